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

#include "doctest.h"

#include "mixbench/errors.hpp"
#include "mixbench/metrics.hpp"
#include "mixbench/proto_kmeans.hpp"
#include "test_support.hpp"

#include <cmath>
#include <limits>

using namespace mixbench;

namespace {

void check_non_increasing(const std::vector<double>& history) {
    REQUIRE(!history.empty());
    for (std::size_t t = 1; t < history.size(); ++t) CHECK(history[t] <= history[t - 1] + 1e-9);
}

MixedDataset gaussian_blobs(int n, int pr, int pc, int groups, double shift, Rng& rng) {
    Eigen::MatrixXd con = testing::random_normal(n, pr, rng);
    Eigen::MatrixXi cat(n, pc);
    std::vector<int> truth(static_cast<std::size_t>(n));
    std::uniform_int_distribution<int> coin(0, 9);
    for (int i = 0; i < n; ++i) {
        const int g = i % groups;
        truth[static_cast<std::size_t>(i)] = g;
        con(i, 0) += shift * g;
        for (int j = 0; j < pc; ++j) cat(i, j) = coin(rng) < 8 ? g : (g + 1) % groups;
    }
    return MixedDataset(std::move(con), std::move(cat), std::vector<int>(static_cast<std::size_t>(pc), groups), truth);
}

// Distortion ratio recomputed with explicit loops and the public cosine helper.
double naive_ratio(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const Partition& p) {
    const int n = p.n();
    const int k = p.k();
    std::vector<Eigen::VectorXd> cx(k, Eigen::VectorXd::Zero(x.cols())), cy(k, Eigen::VectorXd::Zero(y.cols()));
    std::vector<int> size(k, 0);
    Eigen::VectorXd gx = Eigen::VectorXd::Zero(x.cols()), gy = Eigen::VectorXd::Zero(y.cols());
    for (int i = 0; i < n; ++i) {
        cx[p[i]] += x.row(i).transpose();
        cy[p[i]] += y.row(i).transpose();
        gx += x.row(i).transpose();
        gy += y.row(i).transpose();
        ++size[p[i]];
    }
    for (int l = 0; l < k; ++l) cx[l] /= size[l];
    gx /= n;
    double wx = 0, tx = 0, wy = 0, ty = 0;
    for (int i = 0; i < n; ++i) {
        wx += (x.row(i).transpose() - cx[p[i]]).squaredNorm();
        tx += (x.row(i).transpose() - gx).squaredNorm();
        wy += cosine_dissimilarity(y.row(i).transpose(), cy[p[i]]);
        ty += cosine_dissimilarity(y.row(i).transpose(), gy);
    }
    return (wx / (tx - wx)) * (wy / (ty - wy));
}

}  // namespace

TEST_CASE("kmeans splits two separated clouds perfectly") {
    Rng rng(11);
    const auto data = testing::separated_dataset(120, 3, 0, rng);
    const auto res = kmeans(data.continuous(), 2, 5, 1);
    CHECK(adjusted_rand_index(res.assignment, *data.truth_partition()) == doctest::Approx(1.0));
}

TEST_CASE("kmeans with K=1 returns column means and the total sum of squares") {
    Rng rng(12);
    const Eigen::MatrixXd x = testing::random_normal(40, 3, rng);
    const auto res = kmeans(x, 1, 1, 0);
    const Eigen::RowVectorXd mean = x.colwise().mean();
    CHECK((res.centroids.row(0) - mean).norm() < 1e-12);
    const double total = (x.rowwise() - mean).squaredNorm();
    CHECK(res.wcss == doctest::Approx(total).epsilon(1e-12));
    CHECK(within_cluster_ss(x, res.assignment) == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("kmeans rejects K outside [1, n]") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 2);
    CHECK_THROWS_AS(kmeans(x, 6, 1, 0), Error);
    try {
        kmeans(x, 0, 1, 0);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::KTooLarge);
    }
}

TEST_CASE("kmeans never leaves a cluster empty and reports the best start") {
    // Heavy duplicates make empty clusters likely.
    Eigen::MatrixXd x(12, 1);
    x << 0, 0, 0, 0, 0, 0, 0, 0, 0, 5, 5, 9;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto res = kmeans(x, 4, 3, seed);
        CHECK_FALSE(res.assignment.has_empty_cluster());
        CHECK(res.wcss == doctest::Approx(within_cluster_ss(x, res.assignment)));
    }
    Rng rng(3);
    const Eigen::MatrixXd y = testing::random_normal(60, 2, rng);
    const double many = kmeans(y, 4, 10, 7).wcss;
    const double one = kmeans(y, 4, 1, 7).wcss;
    CHECK(many <= one + 1e-12);
}

TEST_CASE("variance-ratio gamma on standardized data with uniform 4-level columns is 4/3") {
    Rng rng(5);
    const int n = 80;
    Eigen::MatrixXi cat(n, 2);
    for (int i = 0; i < n; ++i) {
        cat(i, 0) = i % 4;
        cat(i, 1) = (i / 4) % 4;
    }
    MixedDataset data(zscore_columns(testing::random_normal(n, 3, rng)), cat, {4, 4});
    CHECK(variance_ratio_gamma(data) == doctest::Approx(1.0 / 0.75).epsilon(1e-12));
    const auto res = k_prototypes(data, 2);
    CHECK(res.gamma.gamma == doctest::Approx(1.0 / 0.75).epsilon(1e-12));
    CHECK(res.gamma.source == GammaWeight::Source::VarianceRatio);
}

TEST_CASE("variance-ratio gamma edge cases") {
    Rng rng(6);
    const auto continuous_only = testing::random_dataset(20, 2, 0, 2, rng);
    CHECK(variance_ratio_gamma(continuous_only) == 0.0);
    const auto categorical_only = testing::random_dataset(20, 0, 2, 3, rng);
    CHECK(variance_ratio_gamma(categorical_only) == 1.0);
    MixedDataset constant(testing::random_normal(10, 2, rng), Eigen::MatrixXi::Zero(10, 2), {2, 2});
    try {
        variance_ratio_gamma(constant);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AllConstant);
    }
}

TEST_CASE("k_prototypes with gamma zero reproduces kmeans under the same seed") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        Rng rng(100 + trial);
        const auto cont = testing::random_dataset(50, 3, 0, 2, rng);
        KPrototypesOptions opt;
        opt.starts = 4;
        opt.seed = trial;
        const auto kp = k_prototypes(cont, 3, opt);
        CHECK(kp.gamma.gamma == 0.0);
        const auto km = kmeans(zscore_columns(cont.continuous()), 3, 4, trial);
        CHECK(kp.assignment == km.assignment);
        CHECK(kp.cost == km.wcss);

        const auto mixed = testing::random_dataset(50, 3, 2, 3, rng);
        opt.gamma = 0.0;
        const auto forced = k_prototypes(mixed, 3, opt);
        CHECK(forced.gamma.source == GammaWeight::Source::Fixed);
        CHECK(forced.assignment == kmeans(zscore_columns(mixed.continuous()), 3, 4, trial).assignment);
    }
}

TEST_CASE("k_prototypes recovers separated mixed clusters") {
    Rng rng(21);
    const auto data = testing::separated_dataset(100, 2, 3, rng);
    KPrototypesOptions opt;
    opt.starts = 5;
    const auto res = k_prototypes(data, 2, opt);
    CHECK(adjusted_rand_index(res.assignment, *data.truth_partition()) == doctest::Approx(1.0));
    CHECK_THROWS_AS(k_prototypes(data, 101), Error);
}

TEST_CASE("k_prototypes prototypes are optimal for their partition") {
    Rng rng(22);
    std::normal_distribution<double> jitter(0.0, 0.3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto data = testing::random_dataset(60, 3, 3, 4, rng);
        KPrototypesOptions opt;
        opt.seed = static_cast<std::uint64_t>(trial);
        const auto res = k_prototypes(data, 3, opt);
        const auto z = data.with_continuous(zscore_columns(data.continuous()));
        const double e = k_prototypes_cost(z, res.assignment, res.centers, res.modes, res.gamma.gamma);
        CHECK(e == doctest::Approx(res.cost).epsilon(1e-12));
        for (int rep = 0; rep < 20; ++rep) {
            Eigen::MatrixXd c = res.centers;
            const int l = rep % 3;
            for (Eigen::Index j = 0; j < c.cols(); ++j) c(l, j) += jitter(rng);
            CHECK(k_prototypes_cost(z, res.assignment, c, res.modes, res.gamma.gamma) >= e - 1e-9);
            Eigen::MatrixXi m = res.modes;
            const int j = rep % 3;
            m(l, j) = (m(l, j) + 1 + rep % 3) % 4;
            CHECK(k_prototypes_cost(z, res.assignment, res.centers, m, res.gamma.gamma) >= e - 1e-9);
        }
    }
}

TEST_CASE("cosine dissimilarity of identical and disjoint one-hot vectors") {
    Eigen::VectorXd a(6), b(6);
    a << 1, 0, 0, 0, 1, 0;
    b << 0, 1, 0, 0, 0, 1;
    CHECK(cosine_dissimilarity(a, a) == doctest::Approx(0.0));
    CHECK(cosine_dissimilarity(a, b) == doctest::Approx(1.0));
    try {
        cosine_dissimilarity(a, Eigen::VectorXd::Zero(6));
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroVector);
    }
}

TEST_CASE("weight grids") {
    const auto g = uniform_weight_grid(10);
    REQUIRE(g.size() == 10);
    CHECK(g.front() == doctest::Approx(1.0 / 11));
    CHECK(g.back() == doctest::Approx(10.0 / 11));
    const auto s = sixths_weight_grid();
    REQUIRE(s.size() == 5);
    CHECK(s[2] == doctest::Approx(0.5));
}

TEST_CASE("modha_spangler with a zero categorical weight reproduces kmeans") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        Rng rng(200 + trial);
        const auto data = testing::random_dataset(50, 3, 2, 3, rng);
        ModhaSpanglerOptions opt;
        opt.starts = 3;
        opt.seed = trial;
        opt.weight_grid = {0.0};
        const auto ms = modha_spangler(data, 3, opt);
        const auto km = kmeans(zscore_columns(data.continuous()), 3, 3, trial);
        CHECK(ms.assignment == km.assignment);
        CHECK(ms.gamma.gamma == 0.0);
    }
}

TEST_CASE("modha_spangler selects the grid point with the minimal distortion ratio") {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        Rng rng(300 + trial);
        const auto data = gaussian_blobs(90, 3, 3, 3, 1.5, rng);
        ModhaSpanglerOptions opt;
        opt.starts = 3;
        opt.seed = trial;
        const auto ms = modha_spangler(data, 3, opt);
        REQUIRE(ms.grid_ratios.size() == opt.weight_grid.size());
        const Eigen::MatrixXd x = zscore_columns(data.continuous());
        const Eigen::MatrixXd y = categorical_indicators(data);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < ms.grid_partitions.size(); ++g) {
            const double r = naive_ratio(x, y, ms.grid_partitions[g]);
            CHECK(ms.grid_ratios[g] == doctest::Approx(r).epsilon(1e-9));
            best = std::min(best, r);
        }
        CHECK(ms.distortion_ratio == doctest::Approx(best).epsilon(1e-9));
        CHECK(naive_ratio(x, y, ms.assignment) == doctest::Approx(best).epsilon(1e-9));
        CHECK(ms.gamma.source == GammaWeight::Source::GridSearch);
        CHECK(ms.gamma.gamma == doctest::Approx(ms.alpha / (1 - ms.alpha)));
        // dummy means are probability vectors per block
        for (Eigen::Index l = 0; l < ms.dummy_means.rows(); ++l)
            for (int j = 0; j < 3; ++j) {
                CHECK(ms.dummy_means.row(l).segment(3 * j, 3).sum() == doctest::Approx(1.0));
                CHECK(ms.dummy_means.row(l).segment(3 * j, 3).minCoeff() >= 0.0);
            }
    }
}

TEST_CASE("distortion ratio is invariant under cluster relabeling") {
    Rng rng(41);
    const auto data = testing::random_dataset(40, 2, 2, 3, rng);
    const Eigen::MatrixXd x = data.continuous();
    const Eigen::MatrixXd y = categorical_indicators(data);
    for (int rep = 0; rep < 10; ++rep) {
        const auto p = testing::random_partition(40, 3, rng);
        CHECK(ms_distortion_ratio(x, y, testing::relabel(p, rng)) == doctest::Approx(ms_distortion_ratio(x, y, p)));
    }
}

TEST_CASE("objectives are non-increasing across iterations") {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        Rng rng(500 + trial);
        const auto data = testing::random_dataset(40, 2, 2, 3, rng);
        check_non_increasing(kmeans(data.continuous(), 3, 1, trial).cost_history);
        KPrototypesOptions kp;
        kp.seed = trial;
        check_non_increasing(k_prototypes(data, 3, kp).cost_history);
        ModhaSpanglerOptions ms;
        ms.seed = trial;
        ms.weight_grid = {0.3, 0.7};
        check_non_increasing(modha_spangler(data, 3, ms).cost_history);
    }
}

TEST_CASE("outputs agree across seeds up to relabeling on separated data") {
    Rng rng(61);
    const auto data = testing::separated_dataset(80, 2, 2, rng);
    KPrototypesOptions a, b;
    a.seed = 1;
    b.seed = 99;
    a.starts = b.starts = 3;
    CHECK(adjusted_rand_index(k_prototypes(data, 2, a).assignment, k_prototypes(data, 2, b).assignment) ==
          doctest::Approx(1.0));
    ModhaSpanglerOptions c, d;
    c.seed = 1;
    d.seed = 99;
    CHECK(adjusted_rand_index(modha_spangler(data, 2, c).assignment, modha_spangler(data, 2, d).assignment) ==
          doctest::Approx(1.0));
    CHECK(adjusted_rand_index(kmeans(data.continuous(), 2, 3, 1).assignment,
                              kmeans(data.continuous(), 2, 3, 99).assignment) == doctest::Approx(1.0));
}
