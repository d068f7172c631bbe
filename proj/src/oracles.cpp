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

#include "mixbench/oracles.hpp"

#include "mixbench/errors.hpp"

#include <cmath>
#include <limits>

namespace mixbench::oracle {

double ari_by_pair_enumeration(const Partition& u, const Partition& v) {
    if (u.n() != v.n()) throw Error(ErrorKind::LengthMismatch, "partition lengths differ");
    const int n = u.n();
    double both = 0, only_u = 0, only_v = 0, neither = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool su = u[i] == u[j];
            const bool sv = v[i] == v[j];
            if (su && sv) both += 1;
            else if (su) only_u += 1;
            else if (sv) only_v += 1;
            else neither += 1;
        }
    }
    const double total = both + only_u + only_v + neither;
    const double same_u = both + only_u;
    const double same_v = both + only_v;
    const double expected = total > 0 ? same_u * same_v / total : 0.0;
    const double max_index = 0.5 * (same_u + same_v);
    if (max_index == expected) return 1.0;
    return (both - expected) / (max_index - expected);
}

double cooccurrence_by_subset_search(const Eigen::VectorXd& cond_a, const Eigen::VectorXd& cond_b) {
    const auto c = static_cast<int>(cond_a.size());
    double best = -std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << c); ++mask) {
        double value = 0.0;
        for (int t = 0; t < c; ++t) value += (mask >> t & 1u) ? cond_a(t) : cond_b(t);
        best = std::max(best, value);
    }
    return best - 1.0;
}

std::pair<std::vector<int>, double> medoids_by_exhaustive_search(const Eigen::MatrixXd& d, int k) {
    const auto n = static_cast<int>(d.rows());
    std::vector<int> current(static_cast<std::size_t>(k));
    std::vector<int> best_set;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) current[static_cast<std::size_t>(i)] = i;
    while (true) {
        double cost = 0.0;
        for (int i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (int m : current) nearest = std::min(nearest, d(i, m));
            cost += nearest;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best_set = current;
        }
        // next combination in lexicographic order
        int pos = k - 1;
        while (pos >= 0 && current[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
        if (pos < 0) break;
        ++current[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < k; ++j) current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
    return {best_set, best_cost};
}

Eigen::MatrixXd pca_scores_by_eigen(const Eigen::MatrixXd& centered, int d) {
    const Eigen::MatrixXd gram = centered.transpose() * centered;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    // eigenvalues ascending; take the last d in reverse order
    const auto p = static_cast<int>(gram.rows());
    Eigen::MatrixXd v(p, d);
    for (int k = 0; k < d; ++k) v.col(k) = eig.eigenvectors().col(p - 1 - k);
    return centered * v;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double univariate_overlap(double delta) { return 2.0 * normal_cdf(-delta); }

}  // namespace mixbench::oracle
