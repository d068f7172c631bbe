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

#include "mixbench/bench.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mixbench {

enum class Factor { K, N, P, Overlap, PctCategorical, Density, Sphericity };

std::string factor_name(Factor f);
Factor parse_factor(const std::string& text);
const std::vector<Factor>& all_factors();
std::string factor_level(const ScenarioConfig& s, Factor f);

struct SummaryRow {
    std::string method;
    std::string factor;  // "all" for the per-method rows
    std::string level;
    double mean_ari = 0.0;
    double mean_ami = 0.0;
    std::size_t count = 0;
};

struct EtaSquared {
    std::string factor;
    double ari = 0.0;
    double ami = 0.0;
};

struct CorrelationMatrix {
    std::vector<std::string> methods;
    Eigen::MatrixXd values;  // NaN where undefined (constant vector or fewer than 2 shared datasets)
};

struct SummaryTable {
    std::vector<std::string> methods;
    std::vector<std::string> factors;
    std::map<std::string, std::vector<std::string>> levels;  // ordered levels per factor
    std::vector<SummaryRow> overall;
    std::vector<SummaryRow> by_factor;
    std::vector<EtaSquared> eta_squared;
    CorrelationMatrix ari_correlation;
    CorrelationMatrix ami_correlation;
    std::size_t records_used = 0;
    std::size_t records_excluded = 0;

    const SummaryRow* find(const std::string& method, const std::string& factor, const std::string& level) const;
};

/// Pearson correlation; NaN when either vector is constant.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// SS_between / SS_total of `values` grouped by `groups`; 0 when SS_total is 0.
double one_way_eta_squared(const std::vector<double>& values, const std::vector<std::string>& groups);

/// Failed records are excluded. Throws EmptyInput when nothing remains.
SummaryTable summarize(const std::vector<BenchmarkRecord>& records, const std::vector<Factor>& by);

/// Writes summary_methods.csv, summary_by_<factor>.csv, eta_squared.csv,
/// correlation_ari.csv and correlation_ami.csv.
std::vector<std::filesystem::path> write_summary(const SummaryTable& table, const std::filesystem::path& dir);

/// Aligned plain-text rendering for terminals.
void print_summary(std::ostream& out, const SummaryTable& table);

}  // namespace mixbench
