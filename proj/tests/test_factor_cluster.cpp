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
#include "mixbench/factor_cluster.hpp"
#include "mixbench/metrics.hpp"
#include "mixbench/oracles.hpp"
#include "test_support.hpp"

#include <cmath>
#include <sstream>

using namespace mixbench;

namespace {

Eigen::MatrixXd population_zscores(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd z = x.rowwise() - x.colwise().mean();
    for (Eigen::Index j = 0; j < z.cols(); ++j) z.col(j) /= std::sqrt(z.col(j).squaredNorm() / static_cast<double>(z.rows()));
    return z;
}

double max_abs_sign_free_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    double worst = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c)
        worst = std::max(worst, std::min((a.col(c) - b.col(c)).cwiseAbs().maxCoeff(), (a.col(c) + b.col(c)).cwiseAbs().maxCoeff()));
    return worst;
}

}  // namespace

TEST_CASE("FAMD on purely continuous data is PCA of the z-scored matrix") {
    Rng rng(1);
    const auto data = testing::random_dataset(50, 5, 0, 2, rng);
    const auto proj = famd_project(data, 3);
    const Eigen::MatrixXd reference = oracle::pca_scores_by_eigen(population_zscores(data.continuous()), 3);
    CHECK(max_abs_sign_free_diff(proj.scores, reference) < 1e-8);
}

TEST_CASE("indicator with proportion one quarter is scaled by two") {
    Eigen::MatrixXi cat(8, 1);
    cat << 0, 0, 1, 1, 1, 1, 1, 1;
    Eigen::MatrixXd con(8, 1);
    con << 1, 2, 3, 4, 5, 6, 7, 9;
    MixedDataset data(con, cat, {2});
    const Eigen::VectorXd s = famd_indicator_scales(data);
    CHECK(s(0) == doctest::Approx(2.0));
    CHECK(s(1) == doctest::Approx(1.0 / std::sqrt(0.75)));
    const Eigen::MatrixXd x = famd_standardize(data);
    CHECK(x(0, 1) == doctest::Approx(2.0 * (1.0 - 0.25)));
    CHECK(x(2, 1) == doctest::Approx(-2.0 * 0.25));
    CHECK(x.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("full-rank FAMD reconstructs the standardized matrix") {
    Rng rng(2);
    const auto data = testing::random_dataset(40, 3, 2, 3, rng);
    // standardized rank: 3 continuous + 2 * (3 - 1) centered indicator dimensions
    const auto proj = famd_project(data, 7);
    const Eigen::MatrixXd recon = proj.scores * proj.loadings.transpose();
    CHECK((recon - proj.standardized).cwiseAbs().maxCoeff() < 1e-8);
    CHECK_THROWS_AS(famd_project(data, 8), Error);
    try {
        famd_project(data, 8);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RankDeficient);
    }
}

TEST_CASE("FAMD projection invariants") {
    Rng rng(3);
    const auto data = testing::random_dataset(60, 3, 3, 4, rng);
    const auto proj = famd_project(data, 4);
    const Eigen::MatrixXd gram = proj.loadings.transpose() * proj.loadings;
    CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(proj.scores.colwise().mean().cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::MatrixXd cross = proj.scores.transpose() * proj.scores;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (a != b) CHECK(std::abs(cross(a, b)) < 1e-8 * cross(0, 0));
    CHECK(((proj.standardized * proj.loadings) - proj.scores).cwiseAbs().maxCoeff() < 1e-12);
    for (int c = 0; c < 4; ++c) {
        Eigen::Index arg = 0;
        proj.loadings.col(c).cwiseAbs().maxCoeff(&arg);
        CHECK(proj.loadings(arg, c) > 0.0);
    }
}

TEST_CASE("FAMD criterion equals squared singular value over n") {
    for (int trial = 0; trial < 10; ++trial) {
        Rng rng(10 + static_cast<std::uint64_t>(trial));
        const auto data = testing::random_dataset(45, 2 + trial % 3, 1 + trial % 3, 3, rng);
        const auto proj = famd_project(data, 3);
        for (int c = 0; c < 3; ++c) {
            const double sv = proj.singular_values(c);
            CHECK(famd_criterion(proj.scores.col(c), data) == doctest::Approx(sv * sv / data.n()).epsilon(1e-9));
        }
    }
}

TEST_CASE("FAMD criterion building blocks") {
    Rng rng(4);
    const auto data = testing::random_dataset(30, 2, 1, 3, rng);
    CHECK(squared_correlation(data.continuous().col(0), data.continuous().col(0)) == doctest::Approx(1.0));
    Eigen::VectorXd by_category(30);
    for (int i = 0; i < 30; ++i) by_category(i) = 3.0 * data.categorical()(i, 0) - 1.0;
    CHECK(correlation_ratio(by_category, data.categorical_column(0), 3) == doctest::Approx(1.0));
    try {
        famd_criterion(Eigen::VectorXd::Constant(30, 2.0), data);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroVariance);
    }
    // a continuous column as F: its own R^2 term is one
    const Eigen::VectorXd f = data.continuous().col(1);
    const double rest = squared_correlation(f, data.continuous().col(0)) + correlation_ratio(f, data.categorical_column(0), 3);
    CHECK(famd_criterion(f, data) == doctest::Approx(1.0 + rest));
}

TEST_CASE("first FAMD component beats random directions") {
    Rng rng(5);
    std::normal_distribution<double> z;
    const auto data = testing::random_dataset(80, 3, 3, 3, rng);
    const auto proj = famd_project(data, 1);
    const double top = famd_criterion(proj.scores.col(0), data);
    for (int r = 0; r < 200; ++r) {
        Eigen::VectorXd v(proj.standardized.cols());
        for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = z(rng);
        v.normalize();
        CHECK(famd_criterion(proj.standardized * v, data) <= top + 1e-9);
    }
}

TEST_CASE("famd_kmeans separates two clusters and records d") {
    Rng rng(6);
    const auto data = testing::separated_dataset(100, 3, 2, rng);
    const auto a = famd_kmeans(data, 2, 5, 42);
    CHECK(a.d == 1);
    CHECK(a.projection.scores.cols() == 1);
    CHECK(adjusted_rand_index(a.assignment, *data.truth_partition()) == doctest::Approx(1.0));
    const auto b = famd_kmeans(data, 2, 5, 42);
    CHECK(a.assignment == b.assignment);
    CHECK(famd_kmeans(data, 3, 2, 1).d == 2);
    CHECK(famd_kmeans(data, 3, 2, 1, 4).d == 4);
    CHECK_THROWS_AS(famd_kmeans(data, 1, 1, 0), Error);
}

TEST_CASE("mixed RKM objective is monotone and matches its factors") {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        Rng rng(100 + trial);
        const auto data = testing::random_dataset(40, 2, 2, 3, rng);
        RkmOptions opt;
        opt.seed = trial;
        const auto st = mixed_rkm(data, 3, opt);
        for (std::size_t t = 1; t < st.objective_history.size(); ++t)
            CHECK(st.objective_history[t] <= st.objective_history[t - 1] + 1e-9);
        const Eigen::MatrixXd x = famd_standardize(data);
        CHECK(rkm_objective(x, st.assignment, st.centroids, st.loadings) ==
              doctest::Approx(st.objective).epsilon(1e-8));
        CHECK(st.objective == st.objective_history.back());
        const Eigen::MatrixXd gram = st.loadings.transpose() * st.loadings;
        CHECK((gram - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK_FALSE(st.assignment.has_empty_cluster());
    }
}

TEST_CASE("reduced K-Means with K = n is a rank K-1 truncation") {
    Rng rng(7);
    const Eigen::MatrixXd x = testing::random_normal(6, 9, rng);
    const auto st = reduced_kmeans(x, 6);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(x).singularValues();
    CHECK(st.objective == doctest::Approx(sv(5) * sv(5)).epsilon(1e-8));
}

TEST_CASE("mixed RKM recovers separated clusters and beats the tandem solution on its objective") {
    Rng rng(8);
    const auto data = testing::separated_dataset(100, 3, 2, rng);
    RkmOptions opt;
    opt.starts = 5;
    opt.seed = 3;
    const auto st = mixed_rkm(data, 2, opt);
    CHECK(st.d == 1);
    CHECK(adjusted_rand_index(st.assignment, *data.truth_partition()) == doctest::Approx(1.0));
    const auto tandem = famd_kmeans(data, 2, 5, 3);
    const double tandem_obj = rkm_objective(tandem.projection.standardized, tandem.assignment,
                                            tandem.clustering.centroids, tandem.projection.loadings);
    CHECK(st.objective <= tandem_obj + 1e-9);
}

TEST_CASE("matrix CSV export") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 0.5, -2, 3;
    std::ostringstream out;
    write_matrix_csv(out, m, "F");
    CHECK(out.str() == "F1,F2\n1,0.5\n-2,3\n");
}
