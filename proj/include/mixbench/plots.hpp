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

#include "mixbench/summary.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mixbench {

struct PlotSeries {
    std::string name;
    std::vector<double> values;  // one per x level; NaN leaves a gap
};

/// Escapes &, <, >, " and ' for XML text and attribute values.
std::string xml_escape(const std::string& text);

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::vector<std::string>& x_levels,
                           const std::vector<PlotSeries>& series);

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& labels, const std::vector<double>& values);

/// Writes ari_by_<factor>.svg per summarized factor and method_means.svg.
/// Throws EmptyInput on an empty summary and IoError when a file cannot be written.
std::vector<std::filesystem::path> emit_plots(const SummaryTable& summary, const std::filesystem::path& out_dir);

}  // namespace mixbench
