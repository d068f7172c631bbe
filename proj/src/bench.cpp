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

#include "mixbench/bench.hpp"

#include "mixbench/dataset_io.hpp"
#include "mixbench/errors.hpp"
#include "mixbench/metrics.hpp"
#include "mixbench/proto_kmeans.hpp"
#include "mixbench/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace mixbench {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

[[noreturn]] void config_error(int line, const std::string& msg) {
    throw Error(ErrorKind::ConfigInvalid, "config line " + std::to_string(line) + ": " + msg);
}

long long parse_integer(const std::string& text, int line) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        config_error(line, "expected an integer, got '" + text + "'");
    }
}

double parse_real(const std::string& text, int line) {
    try {
        return parse_double(text);
    } catch (const Error&) {
        config_error(line, "expected a number, got '" + text + "'");
    }
}

bool parse_bool(const std::string& text, int line) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    config_error(line, "expected true/false, got '" + text + "'");
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& value, int line, F item) {
    std::vector<T> out;
    for (const auto& tok : split(value, ',')) {
        if (tok.empty()) config_error(line, "empty list element");
        out.push_back(item(tok));
    }
    if (out.empty()) config_error(line, "empty list");
    return out;
}

std::vector<double> parse_ms_grid(const std::string& value, int line) {
    if (value == "uniform10" || value == "default") return {};
    if (value == "sixths") return sixths_weight_grid();
    return parse_list<double>(value, line, [&](const std::string& t) { return parse_real(t, line); });
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string sanitize(std::string s) {
    for (auto& c : s)
        if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
    return s;
}

std::string format_optional(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

template <typename T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
    return out;
}

std::string coordinates(const ScenarioConfig& s) {
    std::ostringstream o;
    o << s.k << ',' << s.n << ',' << s.p << ',' << format_double(s.overlap) << ',' << format_double(s.pct_categorical) << ','
      << to_string(s.density) << ',' << to_string(s.sphericity) << ',' << s.replicate << ',' << s.seed;
    return o.str();
}

int count_nonempty(const Partition& p) {
    int c = 0;
    for (int s : p.cluster_sizes()) c += s > 0 ? 1 : 0;
    return c;
}

}  // namespace

std::size_t FactorGrid::size() const {
    return k.size() * n.size() * p.size() * overlap.size() * pct_categorical.size() * density.size() * sphericity.size();
}

void BenchmarkConfig::validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorKind::ConfigInvalid, m); };
    if (replicates < 1) fail("replicates must be positive");
    if (starts < 1) fail("starts must be positive");
    if (methods.empty()) fail("no methods selected");
    if (std::set<Method>(methods.begin(), methods.end()).size() != methods.size()) fail("duplicate method");
    if (mc_samples < 0) fail("mc_samples must be nonnegative");
    if (grid.size() == 0) fail("empty factor grid");
    for (double a : ms_grid)
        if (!(a >= 0.0 && a < 1.0)) fail("ms_grid weights must lie in [0, 1)");
    for (const auto& t : expand_tasks(*this)) {
        t.validate();
        if (strict_grid && !t.on_benchmark_grid()) fail("scenario outside the standard benchmark levels: " + coordinates(t));
    }
}

MethodSettings BenchmarkConfig::method_settings() const { return {starts, pam_start, ms_grid}; }

CalibrationOptions BenchmarkConfig::calibration_options() const {
    CalibrationOptions c;
    c.samples = mc_samples;
    return c;
}

BenchmarkConfig parse_config(std::istream& in) {
    BenchmarkConfig cfg;
    std::string raw;
    std::string section;
    int line = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') config_error(line, "malformed section header");
            section = trim(text.substr(1, text.size() - 2));
            if (section != "grid") config_error(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) config_error(line, "expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (value.empty()) config_error(line, "missing value for '" + key + "'");
        if (!seen.insert(section + "." + key).second) config_error(line, "duplicate key '" + key + "'");
        if (section == "grid") {
            auto ints = [&] { return parse_list<int>(value, line, [&](const std::string& t) { return static_cast<int>(parse_integer(t, line)); }); };
            auto reals = [&] { return parse_list<double>(value, line, [&](const std::string& t) { return parse_real(t, line); }); };
            if (key == "k") cfg.grid.k = ints();
            else if (key == "n") cfg.grid.n = ints();
            else if (key == "p") cfg.grid.p = ints();
            else if (key == "overlap") cfg.grid.overlap = reals();
            else if (key == "pct_categorical") cfg.grid.pct_categorical = reals();
            else if (key == "density") cfg.grid.density = parse_list<Density>(value, line, [](const std::string& t) { return parse_density(t); });
            else if (key == "sphericity") cfg.grid.sphericity = parse_list<Sphericity>(value, line, [](const std::string& t) { return parse_sphericity(t); });
            else config_error(line, "unknown grid factor '" + key + "'");
            continue;
        }
        if (key == "seed") {
            const long long v = parse_integer(value, line);
            if (v < 0) config_error(line, "seed must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(v);
        } else if (key == "replicates") {
            cfg.replicates = static_cast<int>(parse_integer(value, line));
        } else if (key == "starts") {
            cfg.starts = static_cast<int>(parse_integer(value, line));
        } else if (key == "methods") {
            if (value == "all") cfg.methods = all_methods();
            else cfg.methods = parse_list<Method>(value, line, [](const std::string& t) { return parse_method(t); });
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "mc_samples") {
            cfg.mc_samples = static_cast<int>(parse_integer(value, line));
        } else if (key == "pam_init") {
            if (value == "random") cfg.pam_start = PamStartMode::RandomStarts;
            else if (value == "build") cfg.pam_start = PamStartMode::Build;
            else config_error(line, "pam_init must be 'random' or 'build'");
        } else if (key == "ms_grid") {
            cfg.ms_grid = parse_ms_grid(value, line);
        } else if (key == "strict_grid") {
            cfg.strict_grid = parse_bool(value, line);
        } else if (key == "full") {
            cfg.full = parse_bool(value, line);
        } else {
            config_error(line, "unknown key '" + key + "'");
        }
    }
    if (cfg.full) apply_full_protocol(cfg);
    cfg.validate();
    return cfg;
}

BenchmarkConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
    return parse_config(in);
}

void write_config(std::ostream& out, const BenchmarkConfig& c) {
    out << "seed = " << c.seed << "\nreplicates = " << c.replicates << "\nstarts = " << c.starts << '\n';
    out << "methods = " << join<Method>(c.methods, [](const Method& m) { return method_name(m); }) << '\n';
    out << "output_dir = " << c.output_dir.string() << "\nmc_samples = " << c.mc_samples << '\n';
    out << "pam_init = " << (c.pam_start == PamStartMode::Build ? "build" : "random") << '\n';
    if (!c.ms_grid.empty()) out << "ms_grid = " << join<double>(c.ms_grid, [](const double& v) { return format_double(v); }) << '\n';
    out << "strict_grid = " << (c.strict_grid ? "true" : "false") << "\n\n[grid]\n";
    auto num = [](const auto& v) { return std::to_string(v); };
    out << "k = " << join<int>(c.grid.k, num) << '\n';
    out << "n = " << join<int>(c.grid.n, num) << '\n';
    out << "p = " << join<int>(c.grid.p, num) << '\n';
    out << "overlap = " << join<double>(c.grid.overlap, [](const double& v) { return format_double(v); }) << '\n';
    out << "pct_categorical = " << join<double>(c.grid.pct_categorical, [](const double& v) { return format_double(v); }) << '\n';
    out << "density = " << join<Density>(c.grid.density, [](const Density& d) { return to_string(d); }) << '\n';
    out << "sphericity = " << join<Sphericity>(c.grid.sphericity, [](const Sphericity& s) { return to_string(s); }) << '\n';
}

void apply_full_protocol(BenchmarkConfig& c) {
    c.full = true;
    c.replicates = 50;
    c.starts = 100;
    c.grid.k = {3, 5, 8};
    c.grid.n = {100, 600, 1000};
    c.grid.p = {8, 12, 16};
    c.grid.overlap = {0.01, 0.05, 0.10, 0.15, 0.20};
    c.grid.pct_categorical = {0.2, 0.5, 0.8};
    c.grid.density = {Density::Equal, Density::OneSmall10};
    c.grid.sphericity = {Sphericity::Spherical, Sphericity::Ellipsoidal};
}

std::uint64_t task_seed(std::uint64_t master, const ScenarioConfig& s) {
    return derive_seed(master, {static_cast<std::uint64_t>(s.k), static_cast<std::uint64_t>(s.n), static_cast<std::uint64_t>(s.p),
                                static_cast<std::uint64_t>(std::llround(s.overlap * 1e6)),
                                static_cast<std::uint64_t>(std::llround(s.pct_categorical * 1e6)),
                                static_cast<std::uint64_t>(s.density), static_cast<std::uint64_t>(s.sphericity),
                                static_cast<std::uint64_t>(s.replicate)});
}

std::uint64_t method_seed(std::uint64_t task, Method m) { return derive_seed(task, {fnv1a(method_name(m))}); }

std::vector<ScenarioConfig> expand_tasks(const BenchmarkConfig& c) {
    std::vector<ScenarioConfig> out;
    for (int k : c.grid.k)
        for (int n : c.grid.n)
            for (int p : c.grid.p)
                for (double o : c.grid.overlap)
                    for (double pct : c.grid.pct_categorical)
                        for (Density d : c.grid.density)
                            for (Sphericity s : c.grid.sphericity)
                                for (int r = 0; r < c.replicates; ++r) {
                                    ScenarioConfig sc;
                                    sc.k = k;
                                    sc.n = n;
                                    sc.p = p;
                                    sc.overlap = o;
                                    sc.pct_categorical = pct;
                                    sc.density = d;
                                    sc.sphericity = s;
                                    sc.replicate = r;
                                    sc.seed = task_seed(c.seed, sc);
                                    out.push_back(sc);
                                }
    return out;
}

std::string to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::Ok: return "ok";
        case RecordStatus::Degenerate: return "degenerate";
        case RecordStatus::Failed: return "failed";
    }
    return "failed";
}

RecordStatus parse_status(const std::string& text) {
    if (text == "ok") return RecordStatus::Ok;
    if (text == "degenerate") return RecordStatus::Degenerate;
    if (text == "failed") return RecordStatus::Failed;
    throw Error(ErrorKind::ParseError, "unknown status '" + text + "'");
}

std::string BenchmarkRecord::dataset_key() const { return coordinates(scenario); }
std::string BenchmarkRecord::key() const { return coordinates(scenario) + ',' + method; }

std::string csv_header() {
    return "K,n,p,overlap,pct_categorical,density,sphericity,replicate,seed,method,ari,ami,runtime_s,iterations,restarts,"
           "status,reason";
}

std::string format_record(const BenchmarkRecord& r) {
    std::ostringstream o;
    o << coordinates(r.scenario) << ',' << r.method << ',' << format_optional(r.ari) << ',' << format_optional(r.ami) << ','
      << format_double(r.runtime_s) << ',' << r.iterations << ',' << r.restarts << ',' << to_string(r.status) << ','
      << sanitize(r.reason);
    return o.str();
}

BenchmarkRecord parse_record(const std::string& line) {
    const auto f = split(line, ',');
    if (f.size() != 17) throw Error(ErrorKind::ParseError, "expected 17 fields, got " + std::to_string(f.size()));
    auto integer = [&](const std::string& t) {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(t, &pos);
            if (pos != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "bad integer '" + t + "'");
        }
    };
    auto real = [](const std::string& t) { return t.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(t); };
    BenchmarkRecord r;
    r.scenario.k = static_cast<int>(integer(f[0]));
    r.scenario.n = static_cast<int>(integer(f[1]));
    r.scenario.p = static_cast<int>(integer(f[2]));
    r.scenario.overlap = parse_double(f[3]);
    r.scenario.pct_categorical = parse_double(f[4]);
    r.scenario.density = parse_density(f[5]);
    r.scenario.sphericity = parse_sphericity(f[6]);
    r.scenario.replicate = static_cast<int>(integer(f[7]));
    try {
        r.scenario.seed = std::stoull(f[8]);
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad seed '" + f[8] + "'");
    }
    r.method = f[9];
    r.ari = real(f[10]);
    r.ami = real(f[11]);
    r.runtime_s = parse_double(f[12]);
    r.iterations = static_cast<int>(integer(f[13]));
    r.restarts = static_cast<int>(integer(f[14]));
    r.status = parse_status(f[15]);
    r.reason = f[16];
    return r;
}

std::vector<BenchmarkRecord> read_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvVersionLine)
        throw Error(ErrorKind::ParseError, "missing " + std::string(kCsvVersionLine) + " version line");
    if (!std::getline(in, line) || trim(line) != csv_header()) throw Error(ErrorKind::ParseError, "unexpected column header");
    std::vector<BenchmarkRecord> out;
    while (std::getline(in, line)) {
        if (in.eof()) break;  // no trailing newline: torn write
        if (trim(line).empty()) continue;
        out.push_back(parse_record(trim(line)));
    }
    return out;
}

std::vector<BenchmarkRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    return read_records(in);
}

std::vector<BenchmarkRecord> run_task(const ScenarioConfig& scenario, const BenchmarkConfig& config,
                                      const std::vector<Method>& methods) {
    std::vector<BenchmarkRecord> out;
    auto blank = [&](Method m) {
        BenchmarkRecord r;
        r.scenario = scenario;
        r.method = method_name(m);
        r.restarts = config.starts;
        return r;
    };
    std::optional<GeneratedScenario> gen;
    std::string gen_error;
    try {
        gen = generate_scenario(scenario, config.calibration_options());
    } catch (const std::exception& e) {
        gen_error = std::string("generation: ") + e.what();
    }
    const MethodSettings settings = config.method_settings();
    for (Method m : methods) {
        BenchmarkRecord r = blank(m);
        if (!gen) {
            r.status = RecordStatus::Failed;
            r.ari = r.ami = std::numeric_limits<double>::quiet_NaN();
            r.reason = gen_error;
            out.push_back(r);
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const MethodRun run = run_method(m, gen->data, scenario.k, method_seed(scenario.seed, m), settings);
            r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const Partition truth = *gen->data.truth_partition();
            r.ari = adjusted_rand_index(run.assignment, truth);
            r.ami = adjusted_mutual_information(run.assignment, truth);
            r.iterations = run.iterations;
            r.restarts = run.restarts;
            const int used = count_nonempty(run.assignment);
            if (used < scenario.k) {
                r.status = RecordStatus::Degenerate;
                r.reason = std::to_string(used) + " of " + std::to_string(scenario.k) + " clusters nonempty";
            }
        } catch (const std::exception& e) {
            r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            r.status = RecordStatus::Failed;
            r.ari = r.ami = std::numeric_limits<double>::quiet_NaN();
            r.reason = e.what();
        }
        out.push_back(r);
    }
    return out;
}

int default_thread_count() {
    if (const char* env = std::getenv("MIXBENCH_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

RunReport run_benchmark(const BenchmarkConfig& config, const std::filesystem::path& csv, const RunOptions& options) {
    config.validate();
    auto log = [&](const std::string& m) {
        if (options.log) options.log(m);
    };
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());

    std::set<std::string> done;
    const bool existing = options.resume && std::filesystem::exists(csv) && std::filesystem::file_size(csv) > 0;
    if (existing) {
        std::string content;
        {
            std::ifstream in(csv, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            content = ss.str();
        }
        const auto last_newline = content.rfind('\n');
        const std::size_t keep = last_newline == std::string::npos ? 0 : last_newline + 1;
        if (keep != content.size()) {
            log("dropping a torn final line from " + csv.string());
            std::filesystem::resize_file(csv, keep);
            content.resize(keep);
        }
        std::istringstream in(content);
        for (const auto& r : read_records(in)) done.insert(r.key());
        log("resuming: " + std::to_string(done.size()) + " records already present");
    } else {
        std::ofstream out(csv, std::ios::trunc);
        if (!out) throw Error(ErrorKind::IoError, "cannot write " + csv.string());
        out << kCsvVersionLine << '\n' << csv_header() << '\n';
    }

    const auto tasks = expand_tasks(config);
    RunReport report;
    report.tasks = tasks.size();
    struct Pending {
        ScenarioConfig scenario;
        std::vector<Method> methods;
    };
    std::vector<Pending> pending;
    for (const auto& t : tasks) {
        Pending p{t, {}};
        for (Method m : config.methods) {
            BenchmarkRecord probe;
            probe.scenario = t;
            probe.method = method_name(m);
            if (done.count(probe.key())) ++report.skipped;
            else p.methods.push_back(m);
        }
        if (!p.methods.empty()) pending.push_back(std::move(p));
    }

    std::ofstream out(csv, std::ios::app);
    if (!out) throw Error(ErrorKind::IoError, "cannot append to " + csv.string());
    auto commit = [&](const std::vector<BenchmarkRecord>& records) {
        for (const auto& r : records) {
            out << format_record(r) << '\n';
            ++report.written;
            if (r.status == RecordStatus::Failed) ++report.failed;
        }
        out.flush();
        if (!out) throw Error(ErrorKind::IoError, "write failed on " + csv.string());
    };

    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(pending.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < pending.size(); ++i) {
            commit(run_task(pending[i].scenario, config, pending[i].methods));
            log("task " + std::to_string(i + 1) + "/" + std::to_string(pending.size()));
        }
        return report;
    }

    // Workers fill slots; this thread commits them strictly in task order.
    std::vector<std::optional<std::vector<BenchmarkRecord>>> slots(pending.size());
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < pending.size(); i = next++) {
                auto records = run_task(pending[i].scenario, config, pending[i].methods);
                {
                    std::lock_guard<std::mutex> lock(mu);
                    slots[i] = std::move(records);
                }
                cv.notify_all();
            }
        });
    try {
        for (std::size_t i = 0; i < pending.size(); ++i) {
            std::vector<BenchmarkRecord> records;
            {
                std::unique_lock<std::mutex> lock(mu);
                cv.wait(lock, [&] { return slots[i].has_value(); });
                records = std::move(*slots[i]);
                slots[i].reset();
            }
            commit(records);
            log("task " + std::to_string(i + 1) + "/" + std::to_string(pending.size()));
        }
    } catch (...) {
        next = pending.size();
        for (auto& t : pool) t.join();
        throw;
    }
    for (auto& t : pool) t.join();
    return report;
}

}  // namespace mixbench
