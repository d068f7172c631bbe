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

#include "mixbench/methods.hpp"
#include "mixbench/simgen.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mixbench {

/// Factor grids of a sweep; every combination is one scenario.
struct FactorGrid {
    std::vector<int> k{3};
    std::vector<int> n{600};
    std::vector<int> p{8};
    std::vector<double> overlap{0.01, 0.05, 0.10, 0.15, 0.20};
    std::vector<double> pct_categorical{0.5};
    std::vector<Density> density{Density::Equal};
    std::vector<Sphericity> sphericity{Sphericity::Spherical};

    std::size_t size() const;
};

struct BenchmarkConfig {
    std::uint64_t seed = 2026;
    int replicates = 10;
    int starts = 20;
    std::vector<Method> methods = all_methods();
    std::filesystem::path output_dir = "results";
    int mc_samples = 0;  // 0 = automatic per target overlap
    PamStartMode pam_start = PamStartMode::RandomStarts;
    std::vector<double> ms_grid;  // empty = 10 uniform interior values
    bool strict_grid = false;     // require the standard benchmark levels
    bool full = false;
    FactorGrid grid;

    void validate() const;
    MethodSettings method_settings() const;
    CalibrationOptions calibration_options() const;
};

/// key = value lines plus a [grid] section of comma lists; '#' starts a comment.
BenchmarkConfig parse_config(std::istream& in);
BenchmarkConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const BenchmarkConfig& config);

/// Switches to the complete factorial protocol: every standard factor level,
/// 50 replicates and 100 starts.
void apply_full_protocol(BenchmarkConfig& config);

/// Scenario x replicate tasks in canonical order, seeds derived from the
/// master seed and the scenario coordinates.
std::vector<ScenarioConfig> expand_tasks(const BenchmarkConfig& config);

std::uint64_t task_seed(std::uint64_t master, const ScenarioConfig& s);
std::uint64_t method_seed(std::uint64_t task, Method m);

enum class RecordStatus { Ok, Degenerate, Failed };
std::string to_string(RecordStatus s);
RecordStatus parse_status(const std::string& text);

struct BenchmarkRecord {
    ScenarioConfig scenario;  // replicate and seed included
    std::string method;
    double ari = 0.0;
    double ami = 0.0;
    double runtime_s = 0.0;
    int iterations = 0;
    int restarts = 0;
    RecordStatus status = RecordStatus::Ok;
    std::string reason;

    /// Scenario coordinates + replicate + method; unique within a sweep.
    std::string key() const;
    /// Scenario coordinates + replicate (the dataset identity).
    std::string dataset_key() const;
};

inline constexpr const char* kCsvVersionLine = "#mixbench-v1";
std::string csv_header();
std::string format_record(const BenchmarkRecord& r);
BenchmarkRecord parse_record(const std::string& line);
/// Reads a results file; a trailing partial line is ignored.
std::vector<BenchmarkRecord> read_records(std::istream& in);
std::vector<BenchmarkRecord> read_records(const std::filesystem::path& path);

/// Runs every method on one generated dataset. Method failures become
/// Failed records; generation failures produce a Failed record per method.
std::vector<BenchmarkRecord> run_task(const ScenarioConfig& scenario, const BenchmarkConfig& config,
                                      const std::vector<Method>& methods);

struct RunOptions {
    int threads = 1;
    bool resume = true;
    std::function<void(const std::string&)> log;
};

struct RunReport {
    std::size_t tasks = 0;
    std::size_t written = 0;
    std::size_t skipped = 0;
    std::size_t failed = 0;
};

/// Appends records to `csv` in task order (independent of thread count).
/// With resume, an existing file is validated, a torn last line dropped and
/// completed (dataset, method) keys skipped.
RunReport run_benchmark(const BenchmarkConfig& config, const std::filesystem::path& csv, const RunOptions& options = {});

/// MIXBENCH_THREADS when set and positive, else hardware concurrency (>= 1).
int default_thread_count();

}  // namespace mixbench
