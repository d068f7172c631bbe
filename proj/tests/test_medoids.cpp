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
#include "mixbench/medoids.hpp"
#include "mixbench/metrics.hpp"
#include "mixbench/oracles.hpp"
#include "test_support.hpp"

#include <set>

using namespace mixbench;

namespace {

DissimilarityMatrix random_points_matrix(int n, int dims, Rng& rng) {
    return DissimilarityMatrix(euclidean_distances(testing::random_normal(n, dims, rng)));
}

DissimilarityMatrix two_blocks() {
    // points {0,1,2} near 0, {3,4} near 10
    Eigen::VectorXd x(5);
    x << 0.0, 1.0, 2.5, 10.0, 11.0;
    Eigen::MatrixXd d(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) d(i, j) = std::abs(x(i) - x(j));
    return DissimilarityMatrix(d);
}

void check_state(const DissimilarityMatrix& d, const MedoidState& s) {
    const std::set<int> distinct(s.medoids.begin(), s.medoids.end());
    CHECK(distinct.size() == s.medoids.size());
    double recomputed = 0.0;
    for (int j = 0; j < d.n(); ++j) {
        const double own = d(j, s.medoids[s.assignment[j]]);
        for (int m : s.medoids) CHECK(own <= d(j, m));
        recomputed += own;
    }
    CHECK(std::abs(recomputed - s.cost) <= 1e-9);
    for (std::size_t t = 1; t < s.cost_history.size(); ++t) CHECK(s.cost_history[t] <= s.cost_history[t - 1] + 1e-9);
}

}  // namespace

TEST_CASE("PAM with K = n makes every point a medoid") {
    Rng rng(1);
    const auto d = random_points_matrix(6, 2, rng);
    const auto s = pam(d, 6);
    CHECK(s.cost == 0.0);
    CHECK(s.medoids == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("PAM on two obvious blocks matches the exhaustive optimum") {
    const auto d = two_blocks();
    const auto s = pam(d, 2);
    const auto [best, best_cost] = oracle::medoids_by_exhaustive_search(d.matrix(), 2);
    CHECK(s.medoids == std::vector<int>{1, 3});
    CHECK(best == s.medoids);
    CHECK(s.cost == doctest::Approx(best_cost));
    check_state(d, s);
}

TEST_CASE("PAM with K = 1 picks the minimal row sum") {
    Rng rng(2);
    const auto d = random_points_matrix(15, 3, rng);
    Eigen::Index arg;
    d.matrix().rowwise().sum().minCoeff(&arg);
    CHECK(pam(d, 1).medoids == std::vector<int>{static_cast<int>(arg)});
    CHECK(pam(d, 1, RandomStarts{5, 3}).medoids == std::vector<int>{static_cast<int>(arg)});
}

TEST_CASE("PAM rejects K outside [1, n]") {
    Rng rng(3);
    const auto d = random_points_matrix(4, 2, rng);
    try {
        pam(d, 5);
        FAIL("expected KTooLarge");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::KTooLarge);
    }
    CHECK_THROWS_AS(fast_kmedoids(d, 0, 1, 0), Error);
}

TEST_CASE("SWAP never ends above its BUILD seeding") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = random_points_matrix(40, 2, rng);
        const int k = 2 + trial % 4;
        const auto seeded = evaluate_medoids(d, pam_build(d, k));
        const auto s = pam(d, k);
        CHECK(s.cost <= seeded.cost + 1e-12);
        CHECK(s.cost_history.front() == doctest::Approx(seeded.cost));
        check_state(d, s);
    }
}

TEST_CASE("PAM (20 random starts) is within 5% of the exhaustive optimum on small random dissimilarities") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> nd(4, 10), kd(1, 3);
        const int n = nd(rng);
        const int k = std::min(kd(rng), n);
        const auto d = trial % 2 == 0 ? random_points_matrix(n, 2, rng)
                                      : gower_matrix(testing::random_dataset(n, 2, 2, 3, rng));
        const auto optimum = oracle::medoids_by_exhaustive_search(d.matrix(), k).second;
        const auto s = pam(d, k, RandomStarts{20, static_cast<std::uint64_t>(trial)});
        CHECK(s.cost <= 1.05 * optimum + 1e-12);
        CHECK(pam(d, k).cost >= optimum - 1e-12);
        check_state(d, s);
    }
}

TEST_CASE("PAM ends at a swap-local optimum on arbitrary symmetric matrices") {
    Rng rng(15);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> nd(4, 10), kd(1, 3);
        const int n = nd(rng);
        const int k = std::min(kd(rng), n);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) m(i, j) = m(j, i) = u(rng);
        const DissimilarityMatrix d(m);
        const auto s = pam(d, k);
        for (int i = 0; i < k; ++i) {
            for (int h = 0; h < n; ++h) {
                if (std::find(s.medoids.begin(), s.medoids.end(), h) != s.medoids.end()) continue;
                auto swapped = s.medoids;
                swapped[i] = h;
                CHECK(evaluate_medoids(d, swapped).cost >= s.cost - 1e-12);
            }
        }
    }
}

TEST_CASE("PAM random starts keep the best seeding") {
    Rng rng(6);
    const auto d = random_points_matrix(60, 2, rng);
    const auto many = pam(d, 4, RandomStarts{10, 42});
    const auto one = pam(d, 4, RandomStarts{1, 42});
    CHECK(many.cost <= one.cost + 1e-12);
    check_state(d, many);
    CHECK(pam(d, 4, RandomStarts{10, 42}).medoids == many.medoids);
}

TEST_CASE("fast k-medoids agrees with PAM on separable data and is deterministic") {
    Rng rng(7);
    Eigen::MatrixXd pts = testing::random_normal(60, 2, rng);
    std::vector<int> truth(60);
    for (int i = 0; i < 60; ++i) {
        truth[i] = i % 3;
        pts(i, 0) += 20.0 * truth[i];
    }
    const DissimilarityMatrix d(euclidean_distances(pts));
    const auto fk = fast_kmedoids(d, 3, 10, 11);
    const auto pm = pam(d, 3);
    CHECK(adjusted_rand_index(fk.assignment, pm.assignment) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index(fk.assignment, Partition(truth, 3)) == doctest::Approx(1.0));

    const auto a = fast_kmedoids(d, 3, 1, 99);
    const auto b = fast_kmedoids(d, 3, 1, 99);
    CHECK(a.medoids == b.medoids);
    CHECK(a.assignment == b.assignment);
}

TEST_CASE("fast k-medoids cost is non-increasing and states are valid") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = random_points_matrix(50, 3, rng);
        const auto s = fast_kmedoids(d, 2 + trial % 5, 1, trial);
        check_state(d, s);
        CHECK(s.cost_history.size() >= 1);
    }
}

TEST_CASE("fast k-medoids repairs clusters emptied by duplicate points") {
    // four copies of one point, two of another: random seeds often pick two copies
    Eigen::MatrixXd pts(6, 1);
    pts << 0, 0, 0, 0, 5, 5;
    const DissimilarityMatrix d(euclidean_distances(pts));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = fast_kmedoids(d, 2, 1, seed);
        CHECK_FALSE(s.assignment.has_empty_cluster());
        CHECK(s.cost == doctest::Approx(0.0));
    }
}
