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

// mixbench: command-line front end for the benchmark.
//
//   mixbench generate  --config bench.conf --out data/
//   mixbench run       --config bench.conf [--out results.csv] [--threads N] [--fresh] [--full]
//   mixbench summarize --in results.csv [--by overlap,sphericity] [--out summary/]
//   mixbench plot      --in results.csv [--by overlap] --out plots/
//   mixbench validate  [--quick]
//   mixbench cluster   --data file.csv --method kamila --k 3
//   mixbench config    (prints the default configuration)
//
// Exit codes: 0 success, 1 configuration/input error, 2 partial failures.

#include "mixbench/bench.hpp"
#include "mixbench/dataset_io.hpp"
#include "mixbench/errors.hpp"
#include "mixbench/metrics.hpp"
#include "mixbench/plots.hpp"
#include "mixbench/summary.hpp"
#include "mixbench/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace mixbench;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_partial = 2;

std::vector<Factor> parse_factor_list(const std::vector<std::string>& tokens) {
    std::vector<Factor> out;
    for (const auto& t : tokens)
        if (t == "all") {
            const auto& all = all_factors();
            out.insert(out.end(), all.begin(), all.end());
        } else {
            out.push_back(parse_factor(t));
        }
    return out;
}

BenchmarkConfig config_from(const std::string& path, bool full) {
    BenchmarkConfig cfg = path.empty() ? BenchmarkConfig{} : load_config(path);
    if (full) {
        apply_full_protocol(cfg);
        cfg.validate();
    }
    return cfg;
}

std::string scenario_stem(const ScenarioConfig& s) {
    std::ostringstream o;
    o << "K" << s.k << "_n" << s.n << "_p" << s.p << "_o" << format_double(s.overlap) << "_c" << format_double(s.pct_categorical)
      << "_" << to_string(s.density) << "_" << to_string(s.sphericity) << "_r" << s.replicate;
    return o.str();
}

int cmd_generate(const std::string& config_path, const std::string& out_dir, int limit) {
    const auto cfg = config_from(config_path, false);
    auto tasks = expand_tasks(cfg);
    if (limit > 0 && static_cast<std::size_t>(limit) < tasks.size()) tasks.resize(static_cast<std::size_t>(limit));
    std::filesystem::create_directories(out_dir);
    int failures = 0;
    for (const auto& t : tasks) {
        const auto stem = std::filesystem::path(out_dir) / scenario_stem(t);
        try {
            const auto g = generate_scenario(t, cfg.calibration_options());
            save_dataset(stem.string() + ".csv", g.data, t.seed);
            std::ofstream spec(stem.string() + ".mixture");
            if (!spec) throw Error(ErrorKind::IoError, "cannot write " + stem.string() + ".mixture");
            write_mixture_spec(spec, g.spec);
            std::cout << stem.string() << ".csv  achieved overlap " << format_double(g.spec.achieved) << '\n';
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::IoError) throw;
            ++failures;
            std::cerr << "generate: " << stem.filename().string() << ": " << e.what() << '\n';
        }
    }
    return failures ? exit_partial : exit_ok;
}

int cmd_run(const std::string& config_path, std::string out, int threads, bool fresh, bool full, bool quiet) {
    const auto cfg = config_from(config_path, full);
    if (full)
        std::cerr << "warning: the full protocol runs " << expand_tasks(cfg).size() << " datasets x " << cfg.methods.size()
                  << " methods with " << cfg.starts << " starts each; expect days of compute\n";
    if (out.empty()) out = (cfg.output_dir / "results.csv").string();
    RunOptions opts;
    opts.threads = threads > 0 ? threads : default_thread_count();
    opts.resume = !fresh;
    if (!quiet) opts.log = [](const std::string& m) { std::cerr << m << '\n'; };
    const auto report = run_benchmark(cfg, out, opts);
    std::size_t failed = 0;
    for (const auto& r : read_records(std::filesystem::path(out))) failed += r.status == RecordStatus::Failed;
    std::cout << "tasks " << report.tasks << ", records written " << report.written << ", skipped (resume) "
              << report.skipped << ", failed records in file " << failed << "\n" << out << '\n';
    return failed ? exit_partial : exit_ok;
}

int cmd_summarize(const std::string& in, const std::vector<std::string>& by, const std::string& out_dir) {
    const auto table = summarize(read_records(std::filesystem::path(in)), parse_factor_list(by));
    print_summary(std::cout, table);
    if (!out_dir.empty())
        for (const auto& p : write_summary(table, out_dir)) std::cout << "wrote " << p.string() << '\n';
    return exit_ok;
}

int cmd_plot(const std::string& in, const std::vector<std::string>& by, const std::string& out_dir) {
    const auto table = summarize(read_records(std::filesystem::path(in)), parse_factor_list(by));
    for (const auto& p : emit_plots(table, out_dir)) std::cout << "wrote " << p.string() << '\n';
    return exit_ok;
}

int cmd_validate(bool quick) {
    using namespace validation;
    std::vector<CheckResult> checks;
    auto add = [&](std::vector<CheckResult> more) { checks.insert(checks.end(), more.begin(), more.end()); };
    add(oracle_suite(1, quick ? 10 : 50));
    add(monotonicity_suite(2, quick ? 10 : 100));
    add(metric_property_suite());
    checks.push_back(univariate_overlap_check());
    if (!quick)
        for (double target : {0.01, 0.10, 0.20}) checks.push_back(calibration_check(target, 5));
    for (const auto& c : checks) std::cout << (c.informational ? "INFO  " : c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
    const bool ok = all_passed(checks);
    std::cout << (ok ? "all checks passed\n" : "some checks FAILED\n");
    return ok ? exit_ok : exit_partial;
}

int cmd_cluster(const std::string& path, const std::string& method, int k, std::uint64_t seed, int starts) {
    const auto data = load_dataset(path);
    MethodSettings settings;
    settings.starts = starts;
    const auto run = run_method(parse_method(method), data.without_truth(), k, seed, settings);
    std::cout << "cluster\n";
    for (int l : run.assignment.labels()) std::cout << l << '\n';
    if (const auto truth = data.truth_partition()) {
        std::cerr << "ARI " << format_double(adjusted_rand_index(*truth, run.assignment)) << "  AMI "
                  << format_double(adjusted_mutual_information(*truth, run.assignment)) << '\n';
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark of clustering methods for mixed-type data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "mixbench 1.0.0");

    std::string config_path, out, in, data_path, method = "kamila";
    std::vector<std::string> by{"overlap"};
    int threads = 0, limit = 0, k = 3, starts = 20;
    std::uint64_t seed = 1;
    bool fresh = false, full = false, quick = false, quiet = false;

    auto* gen = app.add_subcommand("generate", "Calibrate and sample every dataset of the configured grid");
    gen->add_option("-c,--config", config_path, "Configuration file (defaults when omitted)");
    gen->add_option("-o,--out", out, "Output directory")->required();
    gen->add_option("--limit", limit, "Only the first N datasets");

    auto* run = app.add_subcommand("run", "Run the benchmark sweep, appending to a results CSV");
    run->add_option("-c,--config", config_path, "Configuration file (defaults when omitted)");
    run->add_option("-o,--out", out, "Results CSV (default <output_dir>/results.csv)");
    run->add_option("-t,--threads", threads, "Worker threads (default MIXBENCH_THREADS or all cores)");
    run->add_flag("--fresh", fresh, "Overwrite instead of resuming");
    run->add_flag("--full", full, "Full protocol: 50 replicates, 100 starts, 1620 scenarios");
    run->add_flag("-q,--quiet", quiet, "No progress output");

    auto* sum = app.add_subcommand("summarize", "Mean ARI/AMI tables, eta^2 and method correlations");
    sum->add_option("-i,--in", in, "Results CSV")->required();
    sum->add_option("-b,--by", by, "Factors (K,n,p,overlap,pct_categorical,density,sphericity or all)")->delimiter(',');
    sum->add_option("-o,--out", out, "Directory for summary CSV files");

    auto* plot = app.add_subcommand("plot", "SVG line charts per factor and a method bar chart");
    plot->add_option("-i,--in", in, "Results CSV")->required();
    plot->add_option("-b,--by", by, "Factors to chart")->delimiter(',');
    plot->add_option("-o,--out", out, "Output directory")->required();

    auto* val = app.add_subcommand("validate", "Run the oracle and invariant suite");
    val->add_flag("--quick", quick, "Fewer cases, no calibration checks");

    auto* clu = app.add_subcommand("cluster", "Cluster one dataset CSV and print the labels");
    clu->add_option("-d,--data", data_path, "Dataset CSV")->required();
    clu->add_option("-m,--method", method, "Method name");
    clu->add_option("-k,--k", k, "Number of clusters");
    clu->add_option("-s,--seed", seed, "Seed");
    clu->add_option("--starts", starts, "Random starts");

    auto* cfg = app.add_subcommand("config", "Print the default configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*gen) return cmd_generate(config_path, out, limit);
        if (*run) return cmd_run(config_path, out, threads, fresh, full, quiet);
        if (*sum) return cmd_summarize(in, by, out);
        if (*plot) return cmd_plot(in, by, out);
        if (*val) return cmd_validate(quick);
        if (*clu) return cmd_cluster(data_path, method, k, seed, starts);
        if (*cfg) {
            write_config(std::cout, BenchmarkConfig{});
            return exit_ok;
        }
    } catch (const std::exception& e) {
        std::cerr << "mixbench: " << e.what() << '\n';
        return exit_config;
    }
    return exit_ok;
}
