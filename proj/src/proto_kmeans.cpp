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

#include "mixbench/proto_kmeans.hpp"

#include "lloyd.hpp"
#include "mixbench/errors.hpp"

#include <cmath>
#include <limits>

namespace mixbench {
namespace {

using detail::row_sq_dist;
using detail::update_means;

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& x, const std::vector<int>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(idx[r]);
    return out;
}

Eigen::MatrixXi rows_of(const Eigen::MatrixXi& x, const std::vector<int>& idx) {
    Eigen::MatrixXi out(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(idx[r]);
    return out;
}

struct KMeansModel {
    const Eigen::MatrixXd* x;
    Eigen::MatrixXd c;
    int k;

    double distance(int i, int l) const { return row_sq_dist(*x, i, c, l); }
    void update(const std::vector<int>& labels) { update_means(*x, labels, k, c); }
    void reseed(int l, int i) { c.row(l) = x->row(i); }
};

struct KPrototypesModel {
    const Eigen::MatrixXd* x;
    const Eigen::MatrixXi* z;
    const std::vector<int>* levels;
    double gamma;
    Eigen::MatrixXd c;
    Eigen::MatrixXi modes;
    int k;

    double distance(int i, int l) const {
        int mismatches = 0;
        for (Eigen::Index j = 0; j < z->cols(); ++j) mismatches += (*z)(i, j) != modes(l, j) ? 1 : 0;
        return row_sq_dist(*x, i, c, l) + gamma * static_cast<double>(mismatches);
    }
    void update(const std::vector<int>& labels) {
        update_means(*x, labels, k, c);
        for (Eigen::Index j = 0; j < z->cols(); ++j) {
            const int cj = (*levels)[static_cast<std::size_t>(j)];
            Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(k, cj);
            for (Eigen::Index i = 0; i < z->rows(); ++i) ++counts(labels[static_cast<std::size_t>(i)], (*z)(i, j));
            for (int l = 0; l < k; ++l) {
                if (counts.row(l).sum() == 0) continue;
                Eigen::Index arg = 0;
                counts.row(l).maxCoeff(&arg);  // first maximum: lowest level wins ties
                modes(l, j) = static_cast<int>(arg);
            }
        }
    }
    void reseed(int l, int i) {
        c.row(l) = x->row(i);
        modes.row(l) = z->row(i);
    }
};

struct ModhaSpanglerModel {
    const Eigen::MatrixXd* x;
    const Eigen::MatrixXd* y;      // raw one-hot blocks
    const Eigen::MatrixXd* y_hat;  // unit-normalized rows of y
    double w_con;
    double w_cat;
    Eigen::MatrixXd c;
    Eigen::MatrixXd q;
    Eigen::MatrixXd q_hat;
    int k;

    double distance(int i, int l) const {
        const double cat = y->cols() == 0 ? 0.0 : 1.0 - y_hat->row(i).dot(q_hat.row(l));
        return w_con * row_sq_dist(*x, i, c, l) + w_cat * cat;
    }
    void normalize() {
        q_hat = q;
        for (Eigen::Index l = 0; l < q.rows(); ++l) {
            const double norm = q.row(l).norm();
            if (norm > 0.0) q_hat.row(l) /= norm;
        }
    }
    void update(const std::vector<int>& labels) {
        update_means(*x, labels, k, c);
        update_means(*y, labels, k, q);
        normalize();
    }
    void reseed(int l, int i) {
        c.row(l) = x->row(i);
        q.row(l) = y->row(i);
        q_hat.row(l) = y_hat->row(i);
    }
};

Eigen::MatrixXd prepared_continuous(const MixedDataset& data, bool standardize) {
    return standardize && data.p_continuous() > 0 ? zscore_columns(data.continuous()) : data.continuous();
}

Eigen::MatrixXd normalized_rows(const Eigen::MatrixXd& y) {
    Eigen::MatrixXd out = y;
    if (y.cols() == 0) return out;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        const double norm = y.row(i).norm();
        if (!(norm > 0.0)) throw Error(ErrorKind::ZeroVector, "observation " + std::to_string(i) + " has an empty dummy block");
        out.row(i) /= norm;
    }
    return out;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int starts, std::uint64_t seed, int max_iter) {
    const int n = static_cast<int>(points.rows());
    auto [run, model] = detail::best_of_starts(n, k, starts, seed, max_iter, [&](const std::vector<int>& rows) {
        return KMeansModel{&points, rows_of(points, rows), k};
    });
    KMeansResult out{Partition(run.labels, k), std::move(model.c), run.cost, run.iterations, std::move(run.history)};
    return out;
}

double within_cluster_ss(const Eigen::MatrixXd& points, const Partition& assignment) {
    if (assignment.n() != points.rows()) throw Error(ErrorKind::LengthMismatch, "partition size differs from row count");
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(assignment.k(), points.cols());
    update_means(points, assignment.labels(), assignment.k(), c);
    double s = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) s += row_sq_dist(points, i, c, assignment[static_cast<int>(i)]);
    return s;
}

double variance_ratio_gamma(const MixedDataset& data) {
    if (data.p_categorical() == 0) return 0.0;
    if (data.p_continuous() == 0) return 1.0;
    double con = 0.0;
    for (int j = 0; j < data.p_continuous(); ++j) con += sample_variance(data.continuous().col(j));
    con /= data.p_continuous();
    double cat = 0.0;
    for (int j = 0; j < data.p_categorical(); ++j) cat += categorical_variance(data.categorical_column(j), data.levels(j));
    cat /= data.p_categorical();
    if (!(cat > 0.0)) throw Error(ErrorKind::AllConstant, "every categorical column is constant");
    return con / cat;
}

KPrototypesResult k_prototypes(const MixedDataset& data, int k, const KPrototypesOptions& options) {
    const Eigen::MatrixXd x = prepared_continuous(data, options.standardize);
    GammaWeight gamma;
    if (options.gamma) {
        if (!(*options.gamma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "gamma must be nonnegative");
        gamma.gamma = *options.gamma;
        gamma.source = GammaWeight::Source::Fixed;
    } else {
        gamma.gamma = variance_ratio_gamma(data.with_continuous(x));
        gamma.source = GammaWeight::Source::VarianceRatio;
    }
    const Eigen::MatrixXi& z = data.categorical();
    auto [run, model] = detail::best_of_starts(data.n(), k, options.starts, options.seed, options.max_iter,
                                               [&](const std::vector<int>& rows) {
                                                   return KPrototypesModel{&x, &z, &data.levels(), gamma.gamma,
                                                                           rows_of(x, rows), rows_of(z, rows), k};
                                               });
    KPrototypesResult out{Partition(run.labels, k), gamma, std::move(model.c), std::move(model.modes), run.cost,
                          run.iterations, std::move(run.history)};
    return out;
}

double k_prototypes_cost(const MixedDataset& data, const Partition& assignment, const Eigen::MatrixXd& centers,
                         const Eigen::MatrixXi& modes, double gamma) {
    if (assignment.n() != data.n()) throw Error(ErrorKind::LengthMismatch, "partition size differs from row count");
    if (centers.rows() != assignment.k() || centers.cols() != data.p_continuous() || modes.rows() != assignment.k() ||
        modes.cols() != data.p_categorical())
        throw Error(ErrorKind::SchemaMismatch, "prototype shape does not match the data");
    KPrototypesModel model{&data.continuous(), &data.categorical(), &data.levels(), gamma, centers, modes, assignment.k()};
    double s = 0.0;
    for (int i = 0; i < data.n(); ++i) s += model.distance(i, assignment[i]);
    return s;
}

double cosine_dissimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "vectors differ in length");
    const double na = a.norm();
    const double nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0)) throw Error(ErrorKind::ZeroVector, "cosine of a zero vector");
    return 1.0 - a.dot(b) / (na * nb);
}

std::vector<double> uniform_weight_grid(int count) {
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one value");
    std::vector<double> grid;
    for (int i = 1; i <= count; ++i) grid.push_back(static_cast<double>(i) / static_cast<double>(count + 1));
    return grid;
}

std::vector<double> sixths_weight_grid() { return {1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6}; }

double ms_distortion_ratio(const Eigen::MatrixXd& continuous, const Eigen::MatrixXd& indicators,
                           const Partition& assignment) {
    const Eigen::Index n = assignment.n();
    if (continuous.rows() != n || indicators.rows() != n)
        throw Error(ErrorKind::LengthMismatch, "partition size differs from row count");
    const int k = assignment.k();
    const auto& labels = assignment.labels();

    double ratio = 1.0;
    if (continuous.cols() > 0) {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, continuous.cols());
        update_means(continuous, labels, k, c);
        const Eigen::RowVectorXd grand = continuous.colwise().mean();
        double within = 0.0;
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            within += row_sq_dist(continuous, i, c, labels[static_cast<std::size_t>(i)]);
            total += (continuous.row(i) - grand).squaredNorm();
        }
        const double between = total - within;
        if (!(between > 0.0)) return std::numeric_limits<double>::infinity();
        ratio *= within / between;
    }
    if (indicators.cols() > 0) {
        const Eigen::MatrixXd y_hat = normalized_rows(indicators);
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(k, indicators.cols());
        update_means(indicators, labels, k, q);
        for (int l = 0; l < k; ++l) {
            const double norm = q.row(l).norm();
            if (norm > 0.0) q.row(l) /= norm;
        }
        const Eigen::RowVectorXd grand = indicators.colwise().mean().normalized();
        double within = 0.0;
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            within += 1.0 - y_hat.row(i).dot(q.row(labels[static_cast<std::size_t>(i)]));
            total += 1.0 - y_hat.row(i).dot(grand);
        }
        const double between = total - within;
        if (!(between > 0.0)) return std::numeric_limits<double>::infinity();
        ratio *= within / between;
    }
    return ratio;
}

ModhaSpanglerResult modha_spangler(const MixedDataset& data, int k, const ModhaSpanglerOptions& options) {
    if (options.weight_grid.empty()) throw Error(ErrorKind::InvalidArgument, "weight grid is empty");
    for (double a : options.weight_grid)
        if (!(a >= 0.0 && a < 1.0)) throw Error(ErrorKind::InvalidArgument, "grid weights must lie in [0, 1)");

    const Eigen::MatrixXd x = prepared_continuous(data, options.standardize);
    const Eigen::MatrixXd y = categorical_indicators(data);
    const Eigen::MatrixXd y_hat = normalized_rows(y);

    ModhaSpanglerResult out;
    double best_ratio = std::numeric_limits<double>::infinity();
    int best_index = -1;
    for (std::size_t g = 0; g < options.weight_grid.size(); ++g) {
        const double alpha = options.weight_grid[g];
        auto [run, model] = detail::best_of_starts(
            data.n(), k, options.starts, options.seed, options.max_iter, [&](const std::vector<int>& rows) {
                ModhaSpanglerModel m{&x, &y, &y_hat, 1.0 - alpha, alpha, rows_of(x, rows), rows_of(y, rows), {}, k};
                m.normalize();
                return m;
            });
        Partition part(run.labels, k);
        const double ratio = ms_distortion_ratio(x, y, part);
        out.grid_ratios.push_back(ratio);
        out.grid_partitions.push_back(part);
        if (best_index < 0 || ratio < best_ratio) {
            best_index = static_cast<int>(g);
            best_ratio = ratio;
            out.assignment = part;
            out.alpha = alpha;
            out.centers = model.c;
            out.dummy_means = model.q;
            out.cost = run.cost;
            out.iterations = run.iterations;
            out.cost_history = run.history;
        }
    }
    out.distortion_ratio = best_ratio;
    out.gamma.gamma = out.alpha / (1.0 - out.alpha);
    out.gamma.source = GammaWeight::Source::GridSearch;
    out.gamma.grid = options.weight_grid;
    return out;
}

}  // namespace mixbench
