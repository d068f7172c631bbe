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

#include "mixbench/summary.hpp"

#include "mixbench/dataset_io.hpp"
#include "mixbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace mixbench {
namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

struct Accumulator {
    double ari = 0.0;
    double ami = 0.0;
    std::size_t count = 0;
    void add(const BenchmarkRecord& r) {
        ari += r.ari;
        ami += r.ami;
        ++count;
    }
};

SummaryRow make_row(const std::string& method, const std::string& factor, const std::string& level, const Accumulator& a) {
    return {method, factor, level, a.ari / static_cast<double>(a.count), a.ami / static_cast<double>(a.count), a.count};
}

bool numeric_factor(Factor f) { return f != Factor::Density && f != Factor::Sphericity; }

std::vector<std::string> ordered_methods(const std::vector<BenchmarkRecord>& records) {
    std::set<std::string> present;
    for (const auto& r : records) present.insert(r.method);
    std::vector<std::string> out;
    for (Method m : all_methods())
        if (present.erase(method_name(m))) out.push_back(method_name(m));
    out.insert(out.end(), present.begin(), present.end());
    return out;
}

CorrelationMatrix correlations(const std::vector<BenchmarkRecord>& records, const std::vector<std::string>& methods,
                               bool use_ari) {
    std::map<std::string, std::map<std::string, double>> by_method;  // method -> dataset -> value
    for (const auto& r : records) by_method[r.method][r.dataset_key()] = use_ari ? r.ari : r.ami;
    CorrelationMatrix c;
    c.methods = methods;
    const auto m = static_cast<Eigen::Index>(methods.size());
    c.values = Eigen::MatrixXd::Constant(m, m, nan_value);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = a; b < m; ++b) {
            const auto& va = by_method[methods[static_cast<std::size_t>(a)]];
            const auto& vb = by_method[methods[static_cast<std::size_t>(b)]];
            std::vector<double> x, y;
            for (const auto& [key, value] : va) {
                const auto it = vb.find(key);
                if (it == vb.end()) continue;
                x.push_back(value);
                y.push_back(it->second);
            }
            double r = x.size() >= 2 ? pearson(x, y) : nan_value;
            if (a == b && std::isfinite(r)) r = 1.0;
            c.values(a, b) = c.values(b, a) = r;
        }
    return c;
}

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

void write_file(const std::filesystem::path& path, const std::string& text, std::vector<std::filesystem::path>& written) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "write failed on " + path.string());
    written.push_back(path);
}

std::string correlation_csv(const CorrelationMatrix& c) {
    std::string s = "method";
    for (const auto& m : c.methods) s += "," + m;
    s += '\n';
    for (std::size_t a = 0; a < c.methods.size(); ++a) {
        s += c.methods[a];
        for (std::size_t b = 0; b < c.methods.size(); ++b)
            s += "," + cell(c.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
        s += '\n';
    }
    return s;
}

}  // namespace

std::string factor_name(Factor f) {
    switch (f) {
        case Factor::K: return "K";
        case Factor::N: return "n";
        case Factor::P: return "p";
        case Factor::Overlap: return "overlap";
        case Factor::PctCategorical: return "pct_categorical";
        case Factor::Density: return "density";
        case Factor::Sphericity: return "sphericity";
    }
    return "?";
}

Factor parse_factor(const std::string& text) {
    for (Factor f : all_factors())
        if (text == factor_name(f)) return f;
    if (text == "k") return Factor::K;
    throw Error(ErrorKind::ConfigInvalid, "unknown factor '" + text + "'");
}

const std::vector<Factor>& all_factors() {
    static const std::vector<Factor> f{Factor::K, Factor::N, Factor::P, Factor::Overlap, Factor::PctCategorical,
                                       Factor::Density, Factor::Sphericity};
    return f;
}

std::string factor_level(const ScenarioConfig& s, Factor f) {
    switch (f) {
        case Factor::K: return std::to_string(s.k);
        case Factor::N: return std::to_string(s.n);
        case Factor::P: return std::to_string(s.p);
        case Factor::Overlap: return format_double(s.overlap);
        case Factor::PctCategorical: return format_double(s.pct_categorical);
        case Factor::Density: return to_string(s.density);
        case Factor::Sphericity: return to_string(s.sphericity);
    }
    return "?";
}

const SummaryRow* SummaryTable::find(const std::string& method, const std::string& factor, const std::string& level) const {
    const auto& rows = factor == "all" ? overall : by_factor;
    for (const auto& r : rows)
        if (r.method == method && r.factor == factor && (factor == "all" || r.level == level)) return &r;
    return nullptr;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error(ErrorKind::LengthMismatch, "correlation of vectors of different lengths");
    if (x.empty()) return nan_value;
    // Test constancy exactly: a rounded mean leaves a spurious tiny variance.
    const auto constant = [](const std::vector<double>& v) {
        return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
    };
    if (constant(x) || constant(y)) return nan_value;
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return nan_value;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double one_way_eta_squared(const std::vector<double>& values, const std::vector<std::string>& groups) {
    if (values.size() != groups.size()) throw Error(ErrorKind::LengthMismatch, "values and groups differ in length");
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    std::map<std::string, std::pair<double, std::size_t>> g;
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto& e = g[groups[i]];
        e.first += values[i];
        ++e.second;
        total += (values[i] - mean) * (values[i] - mean);
    }
    if (!(total > 0.0)) return 0.0;
    double between = 0.0;
    for (const auto& [_, e] : g) {
        const double gm = e.first / static_cast<double>(e.second);
        between += static_cast<double>(e.second) * (gm - mean) * (gm - mean);
    }
    return std::min(1.0, between / total);
}

SummaryTable summarize(const std::vector<BenchmarkRecord>& all, const std::vector<Factor>& by) {
    std::vector<BenchmarkRecord> records;
    SummaryTable t;
    for (const auto& r : all) {
        if (r.status == RecordStatus::Failed || !std::isfinite(r.ari) || !std::isfinite(r.ami)) {
            ++t.records_excluded;
            continue;
        }
        records.push_back(r);
    }
    if (records.empty()) throw Error(ErrorKind::EmptyInput, "no usable benchmark records");
    t.records_used = records.size();
    t.methods = ordered_methods(records);

    std::map<std::string, Accumulator> per_method;
    for (const auto& r : records) per_method[r.method].add(r);
    for (const auto& m : t.methods) t.overall.push_back(make_row(m, "all", "all", per_method[m]));

    for (Factor f : by) {
        const std::string name = factor_name(f);
        if (std::find(t.factors.begin(), t.factors.end(), name) != t.factors.end()) continue;
        t.factors.push_back(name);
        std::map<std::pair<std::string, std::string>, Accumulator> cells;
        std::set<std::string> level_set;
        std::vector<double> ari, ami;
        std::vector<std::string> groups;
        for (const auto& r : records) {
            const std::string level = factor_level(r.scenario, f);
            cells[{r.method, level}].add(r);
            level_set.insert(level);
            ari.push_back(r.ari);
            ami.push_back(r.ami);
            groups.push_back(level);
        }
        std::vector<std::string> levels(level_set.begin(), level_set.end());
        if (numeric_factor(f))
            std::sort(levels.begin(), levels.end(), [](const std::string& a, const std::string& b) {
                return parse_double(a) < parse_double(b);
            });
        t.levels[name] = levels;
        for (const auto& m : t.methods)
            for (const auto& level : levels) {
                const auto it = cells.find({m, level});
                if (it != cells.end()) t.by_factor.push_back(make_row(m, name, level, it->second));
            }
        t.eta_squared.push_back({name, one_way_eta_squared(ari, groups), one_way_eta_squared(ami, groups)});
    }
    t.ari_correlation = correlations(records, t.methods, true);
    t.ami_correlation = correlations(records, t.methods, false);
    return t;
}

std::vector<std::filesystem::path> write_summary(const SummaryTable& t, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    std::string s = "method,mean_ari,mean_ami,count\n";
    for (const auto& r : t.overall) s += r.method + "," + cell(r.mean_ari) + "," + cell(r.mean_ami) + "," + std::to_string(r.count) + "\n";
    write_file(dir / "summary_methods.csv", s, written);
    for (const auto& f : t.factors) {
        std::string body = "method," + f + ",mean_ari,mean_ami,count\n";
        for (const auto& r : t.by_factor)
            if (r.factor == f)
                body += r.method + "," + r.level + "," + cell(r.mean_ari) + "," + cell(r.mean_ami) + "," + std::to_string(r.count) + "\n";
        write_file(dir / ("summary_by_" + f + ".csv"), body, written);
    }
    std::string eta = "factor,eta2_ari,eta2_ami\n";
    for (const auto& e : t.eta_squared) eta += e.factor + "," + cell(e.ari) + "," + cell(e.ami) + "\n";
    write_file(dir / "eta_squared.csv", eta, written);
    write_file(dir / "correlation_ari.csv", correlation_csv(t.ari_correlation), written);
    write_file(dir / "correlation_ami.csv", correlation_csv(t.ami_correlation), written);
    return written;
}

void print_summary(std::ostream& out, const SummaryTable& t) {
    auto fixed = [](double v) {
        std::ostringstream o;
        if (std::isfinite(v)) o << std::fixed << std::setprecision(3) << v;
        else o << "-";
        return o.str();
    };
    out << "records used: " << t.records_used << " (excluded: " << t.records_excluded << ")\n\n";
    out << std::left << std::setw(16) << "method" << std::setw(10) << "ARI" << std::setw(10) << "AMI" << "count\n";
    for (const auto& r : t.overall)
        out << std::setw(16) << r.method << std::setw(10) << fixed(r.mean_ari) << std::setw(10) << fixed(r.mean_ami) << r.count << '\n';
    for (const auto& f : t.factors) {
        const auto& levels = t.levels.at(f);
        out << "\nmean ARI/AMI by " << f << '\n' << std::setw(16) << "method";
        for (const auto& l : levels) out << std::setw(14) << l;
        out << '\n';
        for (const auto& m : t.methods) {
            out << std::setw(16) << m;
            for (const auto& l : levels) {
                const SummaryRow* r = t.find(m, f, l);
                out << std::setw(14) << (r ? fixed(r->mean_ari) + "/" + fixed(r->mean_ami) : std::string("-"));
            }
            out << '\n';
        }
    }
    if (!t.eta_squared.empty()) {
        out << "\none-way eta^2 (ARI/AMI)\n";
        for (const auto& e : t.eta_squared) out << std::setw(16) << e.factor << fixed(e.ari) << "/" << fixed(e.ami) << '\n';
    }
    out << "\nmethod agreement (Pearson, ARI)\n" << std::setw(16) << "";
    for (std::size_t b = 0; b < t.methods.size(); ++b) out << std::setw(8) << ("(" + std::to_string(b + 1) + ")");
    out << '\n';
    for (std::size_t a = 0; a < t.methods.size(); ++a) {
        out << std::setw(16) << ("(" + std::to_string(a + 1) + ") " + t.methods[a]);
        for (std::size_t b = 0; b < t.methods.size(); ++b)
            out << std::setw(8) << fixed(t.ari_correlation.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
        out << '\n';
    }
    out << std::right;
}

}  // namespace mixbench
