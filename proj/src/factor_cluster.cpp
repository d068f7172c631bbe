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

#include "mixbench/factor_cluster.hpp"

#include "mixbench/dataset_io.hpp"
#include "mixbench/errors.hpp"
#include "mixbench/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

namespace mixbench {
namespace {

void orient_columns(Eigen::MatrixXd& loadings) {
    for (Eigen::Index c = 0; c < loadings.cols(); ++c) {
        Eigen::Index arg = 0;
        loadings.col(c).cwiseAbs().maxCoeff(&arg);
        if (loadings(arg, c) < 0.0) loadings.col(c) = -loadings.col(c);
    }
}

Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& x, const Partition& p, Eigen::VectorXd* sizes = nullptr) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p.k(), x.cols());
    Eigen::VectorXd n = Eigen::VectorXd::Zero(p.k());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        c.row(p[static_cast<int>(i)]) += x.row(i);
        n(p[static_cast<int>(i)]) += 1.0;
    }
    for (int l = 0; l < p.k(); ++l)
        if (n(l) > 0) c.row(l) /= n(l);
    if (sizes) *sizes = n;
    return c;
}

struct Fit {
    Eigen::MatrixXd b;
    Eigen::MatrixXd g;
};

// Loadings and centroids that are optimal for a fixed partition.
Fit fit_for_partition(const Eigen::MatrixXd& x, const Partition& p, int d) {
    Eigen::VectorXd sizes;
    const Eigen::MatrixXd c = cluster_means(x, p, &sizes);
    const Eigen::MatrixXd between = c.transpose() * sizes.asDiagonal() * c;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (between + between.transpose()));
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::RankDeficient, "eigendecomposition failed");
    Eigen::MatrixXd b = eig.eigenvectors().rightCols(d).rowwise().reverse();
    orient_columns(b);
    return {b, c * b};
}

Partition initial_partition(int n, int k, Rng& rng) {
    const std::vector<int> order = sample_distinct(n, n, rng);
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r < k ? r : pick(rng);
    return Partition(std::move(labels), k);
}

RkmState rkm_single(const Eigen::MatrixXd& x, Partition z, int d, const RkmOptions& options) {
    const int n = static_cast<int>(x.rows());
    const int k = z.k();
    RkmState st;
    st.d = d;
    Fit fit = fit_for_partition(x, z, d);
    double current = rkm_objective(x, z, fit.g, fit.b);
    st.objective_history.push_back(current);
    while (st.sweeps < options.max_sweeps) {
        ++st.sweeps;
        const Eigen::MatrixXd y = x * fit.b;
        std::vector<int> labels(static_cast<std::size_t>(n));
        Eigen::VectorXd residual(n);
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (int l = 0; l < k; ++l) {
                const double dist = (y.row(i) - fit.g.row(l)).squaredNorm();
                if (dist < best) {
                    best = dist;
                    arg = l;
                }
            }
            labels[static_cast<std::size_t>(i)] = arg;
        }
        // Empty clusters take the point reconstructed worst by its centroid.
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int v : labels) ++counts[static_cast<std::size_t>(v)];
        for (int l = 0; l < k; ++l) {
            if (counts[static_cast<std::size_t>(l)] > 0) continue;
            int worst = -1;
            double worst_res = -1.0;
            for (int i = 0; i < n; ++i) {
                const int li = labels[static_cast<std::size_t>(i)];
                if (counts[static_cast<std::size_t>(li)] < 2) continue;
                const double r = (x.row(i) - fit.g.row(li) * fit.b.transpose()).squaredNorm();
                if (r > worst_res) {
                    worst_res = r;
                    worst = i;
                }
            }
            if (worst < 0) break;
            --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(worst)])];
            ++counts[static_cast<std::size_t>(l)];
            labels[static_cast<std::size_t>(worst)] = l;
            fit.g.row(l) = y.row(worst);
        }
        Partition next(std::move(labels), k);
        const bool unchanged = next == z;
        z = std::move(next);
        fit = fit_for_partition(x, z, d);
        const double value = rkm_objective(x, z, fit.g, fit.b);
        st.objective_history.push_back(value);
        const double decrease = current - value;
        current = value;
        if (unchanged || decrease < options.tol * std::max(current, std::numeric_limits<double>::min())) break;
    }
    st.assignment = std::move(z);
    st.centroids = std::move(fit.g);
    st.loadings = std::move(fit.b);
    st.objective = current;
    return st;
}

}  // namespace

Eigen::VectorXd famd_indicator_scales(const MixedDataset& data) {
    const auto coding = DummyCoding::for_dataset(data);
    Eigen::VectorXd scales = Eigen::VectorXd::Zero(coding.p_star - coding.p_continuous);
    for (int j = 0; j < data.p_categorical(); ++j) {
        const Eigen::VectorXd prop = level_proportions(data.categorical_column(j), data.levels(j));
        const int base = coding.offsets[static_cast<std::size_t>(j)] - coding.p_continuous;
        for (int h = 0; h < data.levels(j); ++h)
            if (prop(h) > 0.0) scales(base + h) = 1.0 / std::sqrt(prop(h));
    }
    return scales;
}

Eigen::MatrixXd famd_standardize(const MixedDataset& data) {
    if (data.n() < 2) throw Error(ErrorKind::EmptyInput, "FAMD needs at least two observations");
    const double n = data.n();
    Eigen::MatrixXd out(data.n(), DummyCoding::for_dataset(data).p_star);
    for (int j = 0; j < data.p_continuous(); ++j) {
        const auto col = data.continuous().col(j);
        const double mean = col.mean();
        const double sd = std::sqrt((col.array() - mean).square().sum() / n);
        if (!(sd > 0.0)) throw Error(ErrorKind::ConstantColumn, "continuous column " + std::to_string(j) + " is constant");
        out.col(j) = (col.array() - mean) / sd;
    }
    const Eigen::VectorXd scales = famd_indicator_scales(data);
    Eigen::MatrixXd ind = categorical_indicators(data) * scales.asDiagonal();
    ind.rowwise() -= ind.colwise().mean();
    out.rightCols(ind.cols()) = ind;
    return out;
}

FamdProjection famd_project(const MixedDataset& data, int d) {
    FamdProjection proj;
    proj.standardized = famd_standardize(data);
    const auto& x = proj.standardized;
    if (d < 1 || d > std::min<Eigen::Index>(x.rows() - 1, x.cols()))
        throw Error(ErrorKind::InvalidArgument, "d must lie in [1, min(n - 1, p_star)]");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
    proj.singular_values = svd.singularValues();
    const double cutoff = proj.singular_values(0) * 1e-10 * static_cast<double>(std::max(x.rows(), x.cols()));
    if (!(proj.singular_values(d - 1) > cutoff))
        throw Error(ErrorKind::RankDeficient, "fewer than " + std::to_string(d) + " positive singular values");
    proj.loadings = svd.matrixV().leftCols(d);
    orient_columns(proj.loadings);
    proj.scores = x * proj.loadings;
    proj.d = d;
    return proj;
}

double squared_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "vectors differ in length");
    const Eigen::ArrayXd ca = a.array() - a.mean();
    const Eigen::ArrayXd cb = b.array() - b.mean();
    const double saa = ca.square().sum();
    const double sbb = cb.square().sum();
    if (!(saa > 0.0) || !(sbb > 0.0)) throw Error(ErrorKind::ZeroVariance, "correlation with a constant vector");
    const double sab = (ca * cb).sum();
    return sab * sab / (saa * sbb);
}

double correlation_ratio(const Eigen::VectorXd& f, std::span<const int> categories, int levels) {
    if (static_cast<Eigen::Index>(categories.size()) != f.size())
        throw Error(ErrorKind::LengthMismatch, "vectors differ in length");
    const double mean = f.mean();
    const double total = (f.array() - mean).square().sum();
    if (!(total > 0.0)) throw Error(ErrorKind::ZeroVariance, "correlation ratio of a constant vector");
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(levels);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(levels);
    for (std::size_t i = 0; i < categories.size(); ++i) {
        sums(categories[i]) += f(static_cast<Eigen::Index>(i));
        counts(categories[i]) += 1.0;
    }
    double between = 0.0;
    for (int h = 0; h < levels; ++h)
        if (counts(h) > 0) between += counts(h) * std::pow(sums(h) / counts(h) - mean, 2);
    return between / total;
}

double famd_criterion(const Eigen::VectorXd& f, const MixedDataset& data) {
    if (f.size() != data.n()) throw Error(ErrorKind::LengthMismatch, "score length differs from n");
    double total = 0.0;
    for (int j = 0; j < data.p_continuous(); ++j) total += squared_correlation(f, data.continuous().col(j));
    for (int j = 0; j < data.p_categorical(); ++j)
        total += correlation_ratio(f, data.categorical_column(j), data.levels(j));
    return total;
}

FamdKMeansResult famd_kmeans(const MixedDataset& data, int k, int starts, std::uint64_t seed, std::optional<int> d) {
    if (k < 2) throw Error(ErrorKind::InvalidArgument, "famd_kmeans needs K >= 2");
    if (k > data.n()) throw Error(ErrorKind::KTooLarge, "K exceeds n");
    FamdKMeansResult out;
    out.d = d.value_or(k - 1);
    out.projection = famd_project(data, out.d);
    out.clustering = kmeans(out.projection.scores, k, starts, seed);
    out.assignment = out.clustering.assignment;
    return out;
}

double rkm_objective(const Eigen::MatrixXd& x, const Partition& assignment, const Eigen::MatrixXd& centroids,
                     const Eigen::MatrixXd& loadings) {
    if (assignment.n() != x.rows()) throw Error(ErrorKind::LengthMismatch, "partition size differs from row count");
    if (loadings.rows() != x.cols() || centroids.cols() != loadings.cols() || centroids.rows() != assignment.k())
        throw Error(ErrorKind::SchemaMismatch, "RKM factor shapes are inconsistent");
    const Eigen::MatrixXd recon = centroids * loadings.transpose();
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) s += (x.row(i) - recon.row(assignment[static_cast<int>(i)])).squaredNorm();
    return s;
}

RkmState reduced_kmeans(const Eigen::MatrixXd& x, int k, const RkmOptions& options) {
    const int n = static_cast<int>(x.rows());
    if (k < 2) throw Error(ErrorKind::InvalidArgument, "reduced K-Means needs K >= 2");
    if (k > n) throw Error(ErrorKind::KTooLarge, "K exceeds n");
    const int d = options.d.value_or(k - 1);
    if (d < 1 || d > x.cols() || d > k) throw Error(ErrorKind::InvalidArgument, "d must lie in [1, min(K, p)]");
    if (options.starts < 1 || options.max_sweeps < 1) throw Error(ErrorKind::InvalidArgument, "starts and sweeps must be positive");
    Rng rng(options.seed);
    RkmState best;
    for (int s = 0; s < options.starts; ++s) {
        RkmState run = rkm_single(x, initial_partition(n, k, rng), d, options);
        if (s == 0 || run.objective < best.objective) best = std::move(run);
    }
    return best;
}

RkmState mixed_rkm(const MixedDataset& data, int k, const RkmOptions& options) {
    return reduced_kmeans(famd_standardize(data), k, options);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m, const std::string& prefix) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << prefix << (j + 1);
    out << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
        out << '\n';
    }
}

}  // namespace mixbench
