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

#include "mixbench/simgen.hpp"

#include "mixbench/dataset_io.hpp"
#include "mixbench/errors.hpp"
#include "mixbench/random.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace mixbench {
namespace {

constexpr double spherical_variance_lo = 0.5;
constexpr double spherical_variance_hi = 1.0;
constexpr double eigenvalue_lo = 0.05;
constexpr double eigenvalue_hi = 1.0;

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& sigma) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::NonSPD, "covariance matrix is not positive definite");
    return llt.matrixL();
}

double log_det_factor(const Eigen::MatrixXd& l) { return l.diagonal().array().log().sum(); }

Eigen::MatrixXd random_orthogonal(int p, Rng& rng) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd g(p, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < p; ++i) g(i, j) = z(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < p; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

bool in_list(double v, std::initializer_list<double> list) {
    for (double x : list)
        if (std::abs(v - x) < 1e-12) return true;
    return false;
}

}  // namespace

std::string to_string(Density d) { return d == Density::Equal ? "equal" : "one_small_10"; }
std::string to_string(Sphericity s) { return s == Sphericity::Spherical ? "spherical" : "ellipsoidal"; }

Density parse_density(const std::string& text) {
    if (text == "equal") return Density::Equal;
    if (text == "one_small_10" || text == "onesmall10") return Density::OneSmall10;
    throw Error(ErrorKind::ConfigInvalid, "unknown density '" + text + "'");
}

Sphericity parse_sphericity(const std::string& text) {
    if (text == "spherical") return Sphericity::Spherical;
    if (text == "ellipsoidal") return Sphericity::Ellipsoidal;
    throw Error(ErrorKind::ConfigInvalid, "unknown sphericity '" + text + "'");
}

int ScenarioConfig::categorical_count() const {
    return static_cast<int>(std::ceil(static_cast<double>(p) * pct_categorical - 1e-9));
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::ConfigInvalid, msg); };
    if (k < 2) fail("K must be at least 2");
    if (p < 1) fail("p must be positive");
    if (n < k) fail("n must be at least K");
    if (!(overlap > 0.0 && overlap < 1.0)) fail("overlap must lie in (0, 1)");
    if (!(pct_categorical >= 0.0 && pct_categorical <= 1.0)) fail("pct_categorical must lie in [0, 1]");
    if (continuous_count() < 1) fail("at least one continuous column is required");
    if (levels < 2) fail("levels must be at least 2");
    if (replicate < 0) fail("replicate must be nonnegative");
    if (density == Density::OneSmall10 && static_cast<int>(std::ceil(0.1 * n)) > n - (k - 1)) fail("n too small for one_small_10");
}

bool ScenarioConfig::on_benchmark_grid() const {
    return (k == 3 || k == 5 || k == 8) && (n == 100 || n == 600 || n == 1000) && (p == 8 || p == 12 || p == 16) &&
           in_list(overlap, {0.01, 0.05, 0.10, 0.15, 0.20}) && in_list(pct_categorical, {0.2, 0.5, 0.8}) && levels == 4;
}

void MixtureSpec::validate() const {
    if (k < 1 || p < 1) throw Error(ErrorKind::InvalidArgument, "mixture needs K >= 1 and p >= 1");
    if (weights.size() != k || means.rows() != k || means.cols() != p || static_cast<int>(covariances.size()) != k)
        throw Error(ErrorKind::InvalidArgument, "mixture component shapes are inconsistent");
    if (weights.minCoeff() <= 0.0 || std::abs(weights.sum() - 1.0) > 1e-9)
        throw Error(ErrorKind::InvalidArgument, "weights must be positive and sum to one");
    for (const auto& s : covariances) {
        if (s.rows() != p || s.cols() != p) throw Error(ErrorKind::InvalidArgument, "covariance has the wrong shape");
        if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, s.cwiseAbs().maxCoeff()))
            throw Error(ErrorKind::NonSPD, "covariance is not symmetric");
        cholesky_factor(s);
    }
}

std::vector<double> mixture_weights(Density density, int k) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "K must be positive");
    std::vector<double> w(static_cast<std::size_t>(k), 1.0 / k);
    if (density == Density::OneSmall10 && k > 1) {
        w[0] = 0.1;
        for (int l = 1; l < k; ++l) w[static_cast<std::size_t>(l)] = 0.9 / (k - 1);
    }
    return w;
}

std::vector<int> component_sizes(Density density, int n, int k) {
    if (k < 1 || n < k) throw Error(ErrorKind::InvalidArgument, "need n >= K >= 1");
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    int first = 0;
    int rest = n;
    if (density == Density::OneSmall10 && k > 1) {
        sizes[0] = static_cast<int>(std::ceil(0.1 * n - 1e-9));
        rest = n - sizes[0];
        first = 1;
    }
    const int m = k - first;
    for (int l = first; l < k; ++l) sizes[static_cast<std::size_t>(l)] = rest / m + (l - first < rest % m ? 1 : 0);
    return sizes;
}

OverlapEstimator::OverlapEstimator(const Eigen::VectorXd& weights, const Eigen::MatrixXd& means,
                                   const std::vector<Eigen::MatrixXd>& base_covariances, int samples,
                                   std::uint64_t seed)
    : k_(static_cast<int>(weights.size())) {
    if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be positive");
    const int p = static_cast<int>(means.cols());
    std::vector<Eigen::MatrixXd> chol;
    for (const auto& s : base_covariances) chol.push_back(cholesky_factor(s));
    directed_.resize(static_cast<std::size_t>(k_ * k_));
    std::normal_distribution<double> normal;
    for (int l = 0; l < k_; ++l)
        for (int lp = 0; lp < k_; ++lp) {
            if (l == lp) continue;
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(lp)}));
            const auto& Ll = chol[static_cast<std::size_t>(l)];
            const auto& Llp = chol[static_cast<std::size_t>(lp)];
            const Eigen::VectorXd a = Ll.triangularView<Eigen::Lower>().solve((means.row(lp) - means.row(l)).transpose());
            const Eigen::MatrixXd m = Ll.triangularView<Eigen::Lower>().solve(Llp);
            Directed d;
            d.offset = 2.0 * (std::log(weights(l)) - log_det_factor(Ll) - std::log(weights(lp)) + log_det_factor(Llp));
            d.aa = a.squaredNorm();
            d.zz.resize(static_cast<std::size_t>(samples));
            d.ww.resize(static_cast<std::size_t>(samples));
            d.aw.resize(static_cast<std::size_t>(samples));
            Eigen::VectorXd z(p), w(p);
            for (int s = 0; s < samples; ++s) {
                for (int j = 0; j < p; ++j) z(j) = normal(rng);
                w.noalias() = m.triangularView<Eigen::Lower>() * z;
                d.zz[static_cast<std::size_t>(s)] = z.squaredNorm();
                d.ww[static_cast<std::size_t>(s)] = w.squaredNorm();
                d.aw[static_cast<std::size_t>(s)] = a.dot(w);
            }
            directed_[static_cast<std::size_t>(l * k_ + lp)] = std::move(d);
        }
}

double OverlapEstimator::directed(int l, int l_prime, double c) const {
    if (l == l_prime || l < 0 || l_prime < 0 || l >= k_ || l_prime >= k_)
        throw Error(ErrorKind::InvalidArgument, "directed overlap needs two distinct components");
    if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "inflation must be positive");
    const Directed& d = directed_[static_cast<std::size_t>(l * k_ + l_prime)];
    const double inv_c = 1.0 / c;
    const double inv_sqrt_c = 1.0 / std::sqrt(c);
    std::size_t hits = 0;
    const std::size_t m = d.zz.size();
    for (std::size_t s = 0; s < m; ++s) {
        // x drawn from l' is taken by l when pi_l phi_l(x) > pi_l' phi_l'(x)
        const double q_l = d.aa * inv_c + 2.0 * d.aw[s] * inv_sqrt_c + d.ww[s];
        if (d.offset - q_l + d.zz[s] > 0.0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(m);
}

double OverlapEstimator::mean_overlap(double c) const {
    double s = 0.0;
    int pairs = 0;
    for (int l = 0; l < k_; ++l)
        for (int lp = l + 1; lp < k_; ++lp) {
            s += pair(l, lp, c);
            ++pairs;
        }
    return pairs ? s / pairs : 0.0;
}

Eigen::MatrixXd OverlapEstimator::overlap_matrix(double c) const {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(k_, k_);
    for (int l = 0; l < k_; ++l)
        for (int lp = l + 1; lp < k_; ++lp) w(l, lp) = w(lp, l) = pair(l, lp, c);
    return w;
}

double pairwise_overlap_mc(const MixtureSpec& spec, int l, int l_prime, int samples, std::uint64_t seed) {
    if (l == l_prime) throw Error(ErrorKind::InvalidArgument, "pairwise overlap needs l != l'");
    spec.validate();
    // Only the two components matter; build a two-component estimator.
    Eigen::VectorXd w(2);
    w << spec.weights(l), spec.weights(l_prime);
    Eigen::MatrixXd mu(2, spec.p);
    mu.row(0) = spec.means.row(l);
    mu.row(1) = spec.means.row(l_prime);
    const OverlapEstimator est(w, mu, {spec.covariances[static_cast<std::size_t>(l)], spec.covariances[static_cast<std::size_t>(l_prime)]},
                               samples, derive_seed(seed, {static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(l_prime)}));
    return est.pair(0, 1, 1.0);
}

double mean_overlap_mc(const MixtureSpec& spec, int samples, std::uint64_t seed) {
    double s = 0.0;
    int pairs = 0;
    for (int l = 0; l < spec.k; ++l)
        for (int lp = l + 1; lp < spec.k; ++lp) {
            s += pairwise_overlap_mc(spec, l, lp, samples, seed);
            ++pairs;
        }
    return pairs ? s / pairs : 0.0;
}

int default_calibration_samples(double target) {
    return static_cast<int>(std::max(5e4, std::ceil(2e3 / target)));
}

MixtureSpec draw_mixture_geometry(const ScenarioConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MixtureSpec spec;
    spec.k = config.k;
    spec.p = config.p;
    const auto w = mixture_weights(config.density, config.k);
    spec.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), config.k);
    spec.means.resize(config.k, config.p);
    for (int l = 0; l < config.k; ++l)
        for (int j = 0; j < config.p; ++j) spec.means(l, j) = unit(rng);
    std::uniform_real_distribution<double> var(spherical_variance_lo, spherical_variance_hi);
    std::uniform_real_distribution<double> eig(eigenvalue_lo, eigenvalue_hi);
    for (int l = 0; l < config.k; ++l) {
        if (config.sphericity == Sphericity::Spherical) {
            spec.covariances.push_back(var(rng) * Eigen::MatrixXd::Identity(config.p, config.p));
        } else {
            const Eigen::MatrixXd q = random_orthogonal(config.p, rng);
            Eigen::VectorXd lambda(config.p);
            for (int j = 0; j < config.p; ++j) lambda(j) = eig(rng);
            Eigen::MatrixXd s = q * lambda.asDiagonal() * q.transpose();
            spec.covariances.push_back(0.5 * (s + s.transpose()));
        }
    }
    spec.omega = Eigen::MatrixXd::Zero(config.k, config.k);
    spec.target = config.overlap;
    return spec;
}

MixtureSpec calibrate_mixture(const ScenarioConfig& config, std::uint64_t seed, const CalibrationOptions& options) {
    config.validate();
    const double target = config.overlap;
    const int samples = options.samples > 0 ? options.samples : default_calibration_samples(target);
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
        MixtureSpec spec = draw_mixture_geometry(config, derive_seed(seed, {static_cast<std::uint64_t>(attempt), 0}));
        const OverlapEstimator est(spec.weights, spec.means, spec.covariances, samples,
                                   derive_seed(seed, {static_cast<std::uint64_t>(attempt), 1}));
        // Bracket on log c: f(lo) < target <= f(hi).
        double log_lo = 0.0, log_hi = 0.0;
        double f = est.mean_overlap(1.0);
        bool bracketed = false;
        if (f < target) {
            for (int step = 0; step < 60 && !bracketed; ++step) {
                log_lo = log_hi;
                log_hi += std::log(2.0);
                bracketed = est.mean_overlap(std::exp(log_hi)) >= target;
            }
        } else {
            for (int step = 0; step < 60 && !bracketed; ++step) {
                log_hi = log_lo;
                log_lo -= std::log(2.0);
                bracketed = est.mean_overlap(std::exp(log_lo)) < target;
            }
        }
        if (!bracketed) continue;
        double best_c = std::exp(log_hi);
        double best_f = est.mean_overlap(best_c);
        for (int it = 0; it < options.max_bisections; ++it) {
            if (std::abs(best_f - target) <= options.tolerance * target) break;
            const double mid = 0.5 * (log_lo + log_hi);
            const double fm = est.mean_overlap(std::exp(mid));
            if (std::abs(fm - target) < std::abs(best_f - target)) {
                best_f = fm;
                best_c = std::exp(mid);
            }
            (fm < target ? log_lo : log_hi) = mid;
        }
        if (std::abs(best_f - target) > 0.05 * target) continue;
        for (auto& s : spec.covariances) s *= best_c;
        spec.inflation = best_c;
        spec.omega = est.overlap_matrix(best_c);
        spec.achieved = best_f;
        spec.retries = attempt;
        return spec;
    }
    throw Error(ErrorKind::CalibrationFailed,
                "could not calibrate mean overlap " + format_double(target) + " after " +
                    std::to_string(options.max_retries + 1) + " geometries");
}

std::vector<int> quantile_discretize(std::span<const double> values, int levels) {
    if (values.empty()) throw Error(ErrorKind::EmptyInput, "cannot discretize an empty column");
    if (levels < 2) throw Error(ErrorKind::InvalidArgument, "levels must be at least 2");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    const double last = static_cast<double>(sorted.size() - 1);
    for (int q = 1; q < levels; ++q) {
        const double pos = last * q / levels;
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        cuts.push_back(sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]));
    }
    std::vector<int> out;
    out.reserve(values.size());
    for (double v : values) {
        int level = 0;
        for (double c : cuts) level += c < v ? 1 : 0;
        out.push_back(level);
    }
    return out;
}

MixedDataset sample_dataset(const MixtureSpec& spec, const ScenarioConfig& config, std::uint64_t seed) {
    spec.validate();
    config.validate();
    if (spec.k != config.k || spec.p != config.p) throw Error(ErrorKind::SchemaMismatch, "mixture does not match the scenario");
    const auto sizes = component_sizes(config.density, config.n, config.k);
    Rng rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd raw(config.n, config.p);
    std::vector<int> truth;
    truth.reserve(static_cast<std::size_t>(config.n));
    Eigen::VectorXd z(config.p);
    int row = 0;
    for (int l = 0; l < config.k; ++l) {
        const Eigen::MatrixXd chol = cholesky_factor(spec.covariances[static_cast<std::size_t>(l)]);
        for (int s = 0; s < sizes[static_cast<std::size_t>(l)]; ++s, ++row) {
            for (int j = 0; j < config.p; ++j) z(j) = normal(rng);
            raw.row(row) = spec.means.row(l) + (chol * z).transpose();
            truth.push_back(l);
        }
    }
    // Shuffle rows so that file order carries no label information.
    std::vector<int> order(static_cast<std::size_t>(config.n));
    for (int i = 0; i < config.n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::MatrixXd shuffled(config.n, config.p);
    std::vector<int> labels(static_cast<std::size_t>(config.n));
    for (int i = 0; i < config.n; ++i) {
        shuffled.row(i) = raw.row(order[static_cast<std::size_t>(i)]);
        labels[static_cast<std::size_t>(i)] = truth[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    }
    const int pc = config.categorical_count();
    const int pr = config.p - pc;
    Eigen::MatrixXi cat(config.n, pc);
    for (int j = 0; j < pc; ++j) {
        const Eigen::VectorXd col = shuffled.col(pr + j);
        const auto levels = quantile_discretize(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())), config.levels);
        for (int i = 0; i < config.n; ++i) cat(i, j) = levels[static_cast<std::size_t>(i)];
    }
    return MixedDataset(shuffled.leftCols(pr), cat, std::vector<int>(static_cast<std::size_t>(pc), config.levels), labels);
}

GeneratedScenario generate_scenario(const ScenarioConfig& config, const CalibrationOptions& options) {
    MixtureSpec spec = calibrate_mixture(config, derive_seed(config.seed, {1}), options);
    MixedDataset data = sample_dataset(spec, config, derive_seed(config.seed, {2}));
    return {std::move(spec), std::move(data)};
}

void write_mixture_spec(std::ostream& out, const MixtureSpec& spec) {
    out << "mixture-spec v1\n";
    out << "k " << spec.k << "\np " << spec.p << '\n';
    out << "target " << format_double(spec.target) << '\n';
    out << "achieved " << format_double(spec.achieved) << '\n';
    out << "inflation " << format_double(spec.inflation) << '\n';
    out << "retries " << spec.retries << '\n';
    out << "weights";
    for (Eigen::Index l = 0; l < spec.weights.size(); ++l) out << ' ' << format_double(spec.weights(l));
    out << '\n';
    for (int l = 0; l < spec.k; ++l) {
        out << "mean " << l;
        for (int j = 0; j < spec.p; ++j) out << ' ' << format_double(spec.means(l, j));
        out << '\n';
    }
    for (int l = 0; l < spec.k; ++l) {
        out << "covariance " << l;
        const auto& s = spec.covariances[static_cast<std::size_t>(l)];
        for (int i = 0; i < spec.p; ++i)
            for (int j = 0; j < spec.p; ++j) out << ' ' << format_double(s(i, j));
        out << '\n';
    }
    for (int l = 0; l < spec.k; ++l)
        for (int lp = l + 1; lp < spec.k; ++lp) out << "omega " << l << ' ' << lp << ' ' << format_double(spec.omega(l, lp)) << '\n';
}

MixtureSpec read_mixture_spec(std::istream& in) {
    auto fail = [](const std::string& msg) -> void { throw Error(ErrorKind::ParseError, "mixture spec: " + msg); };
    std::string line;
    if (!std::getline(in, line) || line != "mixture-spec v1") fail("missing header");
    MixtureSpec spec;
    auto number = [&](std::istringstream& ss) {
        std::string tok;
        if (!(ss >> tok)) fail("truncated line");
        return parse_double(tok);
    };
    auto index = [&](std::istringstream& ss) {
        int v = -1;
        if (!(ss >> v) || v < 0 || v >= spec.k) fail("bad component index");
        return v;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "k" || key == "p") {
            int v = 0;
            if (!(ss >> v) || v < 1) fail("bad " + key);
            (key == "k" ? spec.k : spec.p) = v;
            if (spec.k > 0 && spec.p > 0) {
                spec.means = Eigen::MatrixXd::Zero(spec.k, spec.p);
                spec.covariances.assign(static_cast<std::size_t>(spec.k), Eigen::MatrixXd::Zero(spec.p, spec.p));
                spec.omega = Eigen::MatrixXd::Zero(spec.k, spec.k);
                spec.weights = Eigen::VectorXd::Zero(spec.k);
            }
        } else if (key == "target") {
            spec.target = number(ss);
        } else if (key == "achieved") {
            spec.achieved = number(ss);
        } else if (key == "inflation") {
            spec.inflation = number(ss);
        } else if (key == "retries") {
            if (!(ss >> spec.retries)) fail("bad retries");
        } else if (spec.k < 1 || spec.p < 1) {
            fail("k and p must precede component data");
        } else if (key == "weights") {
            for (int l = 0; l < spec.k; ++l) spec.weights(l) = number(ss);
        } else if (key == "mean") {
            const int l = index(ss);
            for (int j = 0; j < spec.p; ++j) spec.means(l, j) = number(ss);
        } else if (key == "covariance") {
            const int l = index(ss);
            for (int i = 0; i < spec.p; ++i)
                for (int j = 0; j < spec.p; ++j) spec.covariances[static_cast<std::size_t>(l)](i, j) = number(ss);
        } else if (key == "omega") {
            const int l = index(ss);
            const int lp = index(ss);
            spec.omega(l, lp) = spec.omega(lp, l) = number(ss);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

}  // namespace mixbench
