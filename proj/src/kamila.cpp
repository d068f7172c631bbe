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

#include "mixbench/kamila.hpp"

#include "mixbench/errors.hpp"
#include "mixbench/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mixbench {
namespace {

double quantile7(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double log_constant(int p) {
    return std::lgamma(p / 2.0 + 1.0) - std::log(static_cast<double>(p)) - (p / 2.0) * std::log(std::numbers::pi);
}

Eigen::MatrixXd distances_to(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids) {
    Eigen::MatrixXd r(x.rows(), centroids.rows());
    for (Eigen::Index l = 0; l < centroids.rows(); ++l)
        r.col(l) = (x.rowwise() - centroids.row(l)).rowwise().norm();
    return r;
}

struct Round {
    std::vector<int> labels;
    std::vector<double> winning;
    Eigen::MatrixXd scores;
};

}  // namespace

double silverman_bandwidth(std::span<const double> sample) {
    if (sample.empty()) throw Error(ErrorKind::EmptyInput, "bandwidth of an empty sample");
    const auto m = static_cast<double>(sample.size());
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : sorted) ss += (v - mean) * (v - mean);
    const double sd = sorted.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    const double iqr = quantile7(sorted, 0.75) - quantile7(sorted, 0.25);
    double lo = std::min(sd, iqr / 1.34);
    if (!(lo > 0.0)) lo = sd;
    if (!(lo > 0.0)) lo = std::abs(sample[0]);
    if (!(lo > 0.0)) lo = 1.0;
    return 0.9 * lo * std::pow(m, -0.2);
}

RadialKde::RadialKde(std::vector<double> radii, double window) : RadialKde(radii, silverman_bandwidth(radii), window) {}

RadialKde::RadialKde(std::vector<double> radii, double bandwidth, double window)
    : radii_(std::move(radii)), h_(bandwidth), window_(window) {
    if (radii_.empty()) throw Error(ErrorKind::EmptyInput, "KDE needs at least one radius");
    if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error(ErrorKind::InvalidArgument, "bandwidth must be positive");
    if (!(window_ >= 0.0)) throw Error(ErrorKind::InvalidArgument, "window must be nonnegative");
    std::sort(radii_.begin(), radii_.end());
}

double RadialKde::density(double r) const {
    auto first = radii_.begin();
    auto last = radii_.end();
    if (window_ > 0.0) {
        first = std::lower_bound(radii_.begin(), radii_.end(), r - window_ * h_);
        last = std::upper_bound(first, radii_.end(), r + window_ * h_);
    }
    double s = 0.0;
    for (auto it = first; it != last; ++it) {
        const double u = (r - *it) / h_;
        s += std::exp(-0.5 * u * u);
    }
    return s / (static_cast<double>(radii_.size()) * h_ * std::sqrt(2.0 * std::numbers::pi));
}

double radial_log_density(double r, const RadialKde& kde, int p_continuous) {
    if (p_continuous < 1) throw Error(ErrorKind::InvalidArgument, "p_continuous must be positive");
    if (!(r >= 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be nonnegative");
    const double rr = std::max(r, RadialKde::radius_floor);
    const double f = std::max(kde.density(rr), RadialKde::density_floor);
    return std::log(f) - (p_continuous - 1) * std::log(rr) + log_constant(p_continuous);
}

double radial_log_density(double r, std::span<const double> radii, int p_continuous) {
    return radial_log_density(r, RadialKde(std::vector<double>(radii.begin(), radii.end()), 0.0), p_continuous);
}

Eigen::MatrixXd kamila_scores(const Eigen::MatrixXd& continuous, const Eigen::MatrixXi& categorical,
                              const KamilaState& state, double kde_window) {
    const RadialKde kde(state.radii, state.bandwidth, kde_window);
    const int p = static_cast<int>(continuous.cols());
    const Eigen::MatrixXd r = distances_to(continuous, state.centroids);
    Eigen::MatrixXd s(r.rows(), r.cols());
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index l = 0; l < r.cols(); ++l) {
            double v = radial_log_density(r(i, l), kde, p);
            for (Eigen::Index j = 0; j < categorical.cols(); ++j)
                v += std::log(std::max(state.theta[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)](categorical(i, j)),
                                       RadialKde::density_floor));
            s(i, l) = v;
        }
    return s;
}

KamilaState kamila_fit(const MixedDataset& data, int k, const KamilaOptions& options) {
    const int n = data.n();
    if (k < 1 || k > n) throw Error(ErrorKind::KTooLarge, "K must lie in [1, n]");
    if (data.p_continuous() < 1) throw Error(ErrorKind::InvalidArgument, "KAMILA needs a continuous column");
    if (options.starts < 1 || options.max_iter < 1) throw Error(ErrorKind::InvalidArgument, "starts and max_iter must be positive");
    if (!(options.smoothing > 0.0)) throw Error(ErrorKind::InvalidArgument, "smoothing must be positive");

    const Eigen::MatrixXd x = options.standardize ? zscore_columns(data.continuous()) : data.continuous();
    const Eigen::MatrixXi& z = data.categorical();
    const int pc = data.p_categorical();

    auto uniform_theta = [&] {
        std::vector<std::vector<Eigen::VectorXd>> theta(static_cast<std::size_t>(k));
        for (auto& t : theta)
            for (int j = 0; j < pc; ++j) t.push_back(Eigen::VectorXd::Constant(data.levels(j), 1.0 / data.levels(j)));
        return theta;
    };

    Rng rng(options.seed);
    KamilaState best;
    bool have_best = false;
    for (int s = 0; s < options.starts; ++s) {
        KamilaState st;
        const std::vector<int> rows = sample_distinct(n, k, rng);
        st.centroids.resize(k, x.cols());
        for (int l = 0; l < k; ++l) st.centroids.row(l) = x.row(rows[static_cast<std::size_t>(l)]);
        st.theta = uniform_theta();

        std::vector<int> previous;
        std::vector<int> labels(static_cast<std::size_t>(n));
        std::vector<double> winning(static_cast<std::size_t>(n));
        while (true) {
            ++st.iterations;
            const Eigen::MatrixXd r = distances_to(x, st.centroids);
            st.radii.assign(static_cast<std::size_t>(n), 0.0);
            for (int i = 0; i < n; ++i) st.radii[static_cast<std::size_t>(i)] = r.row(i).minCoeff();
            st.bandwidth = silverman_bandwidth(st.radii);
            const Eigen::MatrixXd scores = kamila_scores(x, z, st, options.kde_window);
            for (int i = 0; i < n; ++i) {
                Eigen::Index arg = 0;
                winning[static_cast<std::size_t>(i)] = scores.row(i).maxCoeff(&arg);  // first maximum
                labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
            }
            // Empty clusters take the point explained worst by its winner.
            std::vector<int> counts(static_cast<std::size_t>(k), 0);
            for (int v : labels) ++counts[static_cast<std::size_t>(v)];
            for (int l = 0; l < k; ++l) {
                if (counts[static_cast<std::size_t>(l)] > 0) continue;
                int worst = -1;
                for (int i = 0; i < n; ++i) {
                    if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] < 2) continue;
                    if (worst < 0 || winning[static_cast<std::size_t>(i)] < winning[static_cast<std::size_t>(worst)]) worst = i;
                }
                if (worst < 0) break;
                --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(worst)])];
                ++counts[static_cast<std::size_t>(l)];
                labels[static_cast<std::size_t>(worst)] = l;
                winning[static_cast<std::size_t>(worst)] = scores(worst, l);
            }
            if (labels == previous || st.iterations >= options.max_iter) break;
            previous = labels;

            // M-step: centroids and smoothed level frequencies.
            Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
            for (int i = 0; i < n; ++i) sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
            for (int l = 0; l < k; ++l) st.centroids.row(l) = sums.row(l) / counts[static_cast<std::size_t>(l)];
            for (int j = 0; j < pc; ++j) {
                const int c = data.levels(j);
                for (int l = 0; l < k; ++l) st.theta[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)].setConstant(options.smoothing);
                for (int i = 0; i < n; ++i)
                    st.theta[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])][static_cast<std::size_t>(j)](z(i, j)) += 1.0;
                for (int l = 0; l < k; ++l)
                    st.theta[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] /=
                        counts[static_cast<std::size_t>(l)] + options.smoothing * c;
            }
        }
        st.assignment = Partition(labels, k);
        st.objective = 0.0;
        for (double w : winning) st.objective += w;
        if (!have_best || st.objective > best.objective) {
            best = std::move(st);
            have_best = true;
        }
    }
    return best;
}

}  // namespace mixbench
