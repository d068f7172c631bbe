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

// Uniform entry point for the eight benchmarked clustering pipelines.

#include "mixbench/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mixbench {

enum class Method {
    Kamila,
    FamdKMeans,
    KPrototypes,
    ModhaSpangler,
    MixedRkm,
    HlPam,
    MixedKMeans,
    GowerPam,
};

enum class PamStartMode { Build, RandomStarts };

/// Tokens used in configs and result files, e.g. "famd_kmeans".
std::string method_name(Method m);
/// Human-readable label, e.g. "FAMD/K-Means".
std::string method_label(Method m);
Method parse_method(const std::string& token);
const std::vector<Method>& all_methods();

struct MethodSettings {
    int starts = 20;
    PamStartMode pam_start = PamStartMode::RandomStarts;
    std::vector<double> ms_grid;  // empty = default uniform grid
};

struct MethodRun {
    Partition assignment;
    int iterations = 0;
    int restarts = 0;
};

MethodRun run_method(Method m, const MixedDataset& data, int k, std::uint64_t seed, const MethodSettings& settings);

}  // namespace mixbench
