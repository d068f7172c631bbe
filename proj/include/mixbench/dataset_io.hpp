// Copyright 2026 The mixbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "mixbench/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace mixbench {

/// Shortest decimal literal that round-trips to the same double.
std::string format_double(double value);
double parse_double(const std::string& text);

/// Key=value sidecar describing the column-type manifest of a dataset CSV.
struct DatasetMetadata {
    int n = 0;
    int p_continuous = 0;
    int p_categorical = 0;
    std::vector<int> levels;
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> extra;
};

/// CSV layout: one header row, categorical columns named "cat:<name>",
/// optional trailing "truth" column; integer codes for categorical cells.
void write_dataset_csv(std::ostream& out, const MixedDataset& data);
MixedDataset read_dataset_csv(std::istream& in, const std::optional<DatasetMetadata>& meta = std::nullopt);

void write_metadata(std::ostream& out, const DatasetMetadata& meta);
DatasetMetadata read_metadata(std::istream& in);
DatasetMetadata metadata_for(const MixedDataset& data, std::optional<std::uint64_t> seed = std::nullopt);

/// `<stem>.meta` next to the CSV.
std::filesystem::path metadata_path(const std::filesystem::path& csv);

void save_dataset(const std::filesystem::path& csv, const MixedDataset& data,
                  std::optional<std::uint64_t> seed = std::nullopt);
/// Uses the sidecar when present, otherwise infers level counts from the codes.
MixedDataset load_dataset(const std::filesystem::path& csv);

}  // namespace mixbench
