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

// Acceptance runner: one PASS/FAIL line per criterion, followed by the numbers
// behind it.
//
//   acceptance [--expect-red N,...] [--report FILE] [criterion numbers...]
//
// Without --expect-red the exit status is 0 only when every selected criterion
// passes. With it, the listed criteria are documented known failures: they are
// still reported as FAIL, and the exit status is 0 only when exactly those
// fail (an unexpected pass is an error too, so the list cannot go stale).

#include "mixbench/bench.hpp"
#include "mixbench/dataset_io.hpp"
#include "mixbench/summary.hpp"
#include "mixbench/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#ifndef MIXBENCH_CLI_PATH
#error "MIXBENCH_CLI_PATH must name the mixbench executable"
#endif

using namespace mixbench;

namespace {

struct Outcome {
    bool passed = false;
    std::vector<std::string> details;
};

const std::filesystem::path work_dir = std::filesystem::temp_directory_path() / "mixbench_acceptance";

std::string fmt(double v, int digits = 3) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(digits) << v;
    return o.str();
}

// K=3, n=600, p=8, 50% categorical, spherical, equal density, 10 replicates, 20 starts.
BenchmarkConfig desk_preset() {
    BenchmarkConfig cfg;
    cfg.seed = 2026;
    cfg.replicates = 10;
    cfg.starts = 20;
    cfg.grid = FactorGrid{};
    cfg.grid.overlap = {0.01, 0.05, 0.10, 0.15, 0.20};
    return cfg;
}

SummaryTable run_preset(const BenchmarkConfig& cfg, const std::string& name, const std::vector<Factor>& by) {
    std::filesystem::create_directories(work_dir);
    const auto csv = work_dir / (name + ".csv");
    RunOptions opts;
    opts.resume = false;
    opts.threads = default_thread_count();
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = run_benchmark(cfg, csv, opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "  [" << name << ": " << report.written << " records, " << report.failed << " failed, " << fmt(secs, 1)
              << " s, " << opts.threads << " thread(s)]\n";
    return summarize(read_records(csv), by);
}

const SummaryTable& desk_summary() {
    static const SummaryTable table = run_preset(desk_preset(), "desk_preset", {Factor::Overlap});
    return table;
}

double mean_ari(const SummaryTable& t, Method m, const std::string& factor, const std::string& level) {
    const auto* row = t.find(method_name(m), factor, level);
    return row ? row->mean_ari : std::nan("");
}

Outcome criterion_overlap_effect() {
    const auto& t = desk_summary();
    Outcome o{true, {}};
    const auto& levels = t.levels.at("overlap");
    for (Method m : all_methods()) {
        std::string line = method_label(m) + ":";
        bool decreasing = true;
        double previous = std::numeric_limits<double>::infinity();
        for (const auto& level : levels) {
            const double v = mean_ari(t, m, "overlap", level);
            line += " " + fmt(v);
            decreasing = decreasing && v < previous;
            previous = v;
        }
        if (!decreasing) {
            o.passed = false;
            line += "  <- not strictly decreasing";
        }
        o.details.push_back(line);
    }
    const double kamila = mean_ari(t, Method::Kamila, "overlap", "0.01");
    o.details.push_back("KAMILA mean ARI at overlap 0.01 = " + fmt(kamila) + " (need >= 0.55)");
    o.passed = o.passed && kamila >= 0.55;
    return o;
}

Outcome criterion_method_grouping() {
    const auto& t = desk_summary();
    const double gower = mean_ari(t, Method::GowerPam, "overlap", "0.01");
    Outcome o{true, {"Gower/PAM at 0.01: " + fmt(gower)}};
    for (Method m : {Method::Kamila, Method::FamdKMeans, Method::KPrototypes}) {
        const double v = mean_ari(t, m, "overlap", "0.01");
        const bool ok = v - gower >= 0.10;
        o.passed = o.passed && ok;
        o.details.push_back(method_label(m) + " at 0.01: " + fmt(v) + " (margin " + fmt(v - gower) + ", need >= 0.10)" +
                            (ok ? "" : "  <- short"));
    }
    return o;
}

Outcome criterion_sphericity_effect() {
    auto cfg = desk_preset();
    cfg.grid.overlap = {0.01, 0.10};
    cfg.grid.sphericity = {Sphericity::Spherical, Sphericity::Ellipsoidal};
    const auto t = run_preset(cfg, "sphericity_preset", {Factor::Sphericity});
    double sums[2] = {0, 0};
    std::size_t counts[2] = {0, 0};
    for (const auto& row : t.by_factor) {
        const int idx = row.level == "spherical" ? 0 : 1;
        sums[idx] += row.mean_ari * static_cast<double>(row.count);
        counts[idx] += row.count;
    }
    const double sph = sums[0] / static_cast<double>(counts[0]);
    const double ell = sums[1] / static_cast<double>(counts[1]);
    Outcome o{sph - ell >= 0.03, {}};
    o.details.push_back("pooled mean ARI spherical " + fmt(sph) + " vs ellipsoidal " + fmt(ell) + " (difference " +
                        fmt(sph - ell) + ", need >= 0.03)");
    for (Method m : all_methods())
        o.details.push_back(method_label(m) + ": " + fmt(mean_ari(t, m, "sphericity", "spherical")) + " / " +
                            fmt(mean_ari(t, m, "sphericity", "ellipsoidal")));
    return o;
}

Outcome from_checks(const std::vector<validation::CheckResult>& checks) {
    Outcome o{validation::all_passed(checks), {}};
    for (const auto& c : checks) o.details.push_back(std::string(c.informational ? "info " : c.passed ? "ok   " : "FAIL ") + c.name + " (" + c.detail + ")");
    return o;
}

Outcome criterion_calibration() {
    std::vector<validation::CheckResult> checks;
    for (double target : {0.01, 0.10, 0.20}) checks.push_back(validation::calibration_check(target, 20));
    checks.push_back(validation::univariate_overlap_check(100000));
    return from_checks(checks);
}

Outcome criterion_oracles() { return from_checks(validation::oracle_suite(1, 50)); }
Outcome criterion_monotonicity() { return from_checks(validation::monotonicity_suite(2, 100, 1e-9)); }
Outcome criterion_metrics() { return from_checks(validation::metric_property_suite(3, 50, 100)); }

// Drops the runtime column from every record line; header lines are kept.
std::string csv_without_runtime(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string line, out;
    const std::size_t runtime_col = 12;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("K,", 0) == 0) {
            out += line + '\n';
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (i != runtime_col) out += cells[i] + (i + 1 < cells.size() ? "," : "");
        out += '\n';
    }
    return out;
}

Outcome criterion_determinism() {
    std::filesystem::create_directories(work_dir);
    const auto conf = work_dir / "determinism.conf";
    {
        std::ofstream out(conf);
        out << "seed = 99\nreplicates = 2\nstarts = 5\nmethods = all\noutput_dir = " << (work_dir / "det").string()
            << "\n[grid]\noverlap = 0.01, 0.10\ndensity = one_small_10\nsphericity = ellipsoidal\n";
    }
    Outcome o{true, {}};
    std::string reference;
    for (int run = 0; run < 2; ++run) {
        const auto csv = work_dir / ("determinism_" + std::to_string(run) + ".csv");
        const std::string cmd = std::string("\"") + MIXBENCH_CLI_PATH + "\" run --quiet --fresh --config \"" + conf.string() +
                                "\" --out \"" + csv.string() + "\" --threads " + std::to_string(run + 1) + " >/dev/null";
        const int rc = std::system(cmd.c_str());
        if (rc != 0) {
            o.passed = false;
            o.details.push_back("CLI run " + std::to_string(run + 1) + " exited with status " + std::to_string(rc));
            return o;
        }
        const auto text = csv_without_runtime(csv);
        if (run == 0) {
            reference = text;
        } else {
            o.passed = text == reference;
        }
    }
    std::size_t lines = 0;
    for (char c : reference) lines += c == '\n';
    o.details.push_back("two CLI runs (1 and 2 worker threads), " + std::to_string(lines - 2) + " records each: CSVs " +
                        (o.passed ? "byte-identical" : "DIFFER") + " outside the runtime column");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"ordinal overlap effect (mean ARI strictly decreasing in overlap; KAMILA >= 0.55 at 0.01)", criterion_overlap_effect},
        {"method grouping (KAMILA, FAMD/K-Means, K-Prototypes >= Gower/PAM + 0.10 at overlap 0.01)", criterion_method_grouping},
        {"sphericity effect (spherical pooled mean ARI >= ellipsoidal + 0.03)", criterion_sphericity_effect},
        {"overlap calibration (60 seeded calibrations within 5%; univariate oracle within 0.01)", criterion_calibration},
        {"oracle equivalence suite", criterion_oracles},
        {"monotone objectives on 100 random instances (tolerance 1e-9)", criterion_monotonicity},
        {"metric properties (permutation invariance; AMI chance level)", criterion_metrics},
        {"CLI determinism (byte-identical CSV modulo runtime)", criterion_determinism},
    };
    std::set<int> selected, expected_red;
    std::string report_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if ((arg == "--expect-red" || arg == "--report") && i + 1 < argc) {
            const std::string value = argv[++i];
            if (arg == "--report") {
                report_path = value;
                continue;
            }
            std::stringstream list(value);
            std::string item;
            while (std::getline(list, item, ',')) expected_red.insert(std::atoi(item.c_str()));
        } else {
            selected.insert(std::atoi(arg.c_str()));
        }
    }
    std::ostringstream report;
    auto emit = [&](const std::string& text) {
        std::cout << text << std::flush;
        report << text;
    };
    std::set<int> failed;
    int passed = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        const int number = static_cast<int>(c) + 1;
        if (!selected.empty() && !selected.count(number)) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[c].second();
        } catch (const std::exception& e) {
            o = {false, {std::string("error: ") + e.what()}};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.passed) ++passed;
        else failed.insert(number);
        std::string text = std::string(o.passed ? "PASS" : "FAIL") + "  criterion " + std::to_string(number) + ": " +
                           criteria[c].first + "  [" + fmt(secs, 1) + " s]";
        if (!o.passed && expected_red.count(number)) text += "  (known red, see README)";
        if (o.passed && expected_red.count(number)) text += "  (listed as known red but passed)";
        text += '\n';
        for (const auto& d : o.details) text += "        " + d + '\n';
        emit(text);
    }
    std::set<int> expected_here;
    for (int n : expected_red)
        if (selected.empty() || selected.count(n)) expected_here.insert(n);
    std::string verdict = "acceptance: " + std::to_string(passed) + " passed, " + std::to_string(failed.size()) + " failed";
    if (!expected_here.empty()) {
        verdict += " (known red:";
        for (int n : expected_here) verdict += " " + std::to_string(n);
        verdict += ")";
    }
    const bool ok = failed == expected_here;
    verdict += ok ? "\n" : " -- outcome differs from the expected set\n";
    emit(verdict);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::trunc);
        out << report.str();
    }
    return ok ? 0 : 1;
}
