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

#include "mixbench/metrics.hpp"

#include "mixbench/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mixbench {

namespace {

double pairs(double m) { return m * (m - 1.0) / 2.0; }

// Every nonempty row and column holds exactly one nonzero cell.
bool is_relabeling(const ContingencyTable& t) {
    for (Eigen::Index r = 0; r < t.counts.rows(); ++r) {
        if ((t.counts.row(r).array() > 0).count() > 1) return false;
    }
    for (Eigen::Index c = 0; c < t.counts.cols(); ++c) {
        if ((t.counts.col(c).array() > 0).count() > 1) return false;
    }
    return true;
}

}  // namespace

ContingencyTable ContingencyTable::from(const Partition& u, const Partition& v) {
    if (u.n() != v.n()) {
        throw Error(ErrorKind::LengthMismatch,
                    "partitions of length " + std::to_string(u.n()) + " and " + std::to_string(v.n()));
    }
    ContingencyTable t;
    t.n = u.n();
    t.counts = Eigen::MatrixXd::Zero(u.k(), v.k());
    for (int i = 0; i < t.n; ++i) t.counts(u[i], v[i]) += 1.0;
    t.row_sums = t.counts.rowwise().sum();
    t.col_sums = t.counts.colwise().sum().transpose();
    return t;
}

double adjusted_rand_index(const Partition& u, const Partition& v) {
    const auto t = ContingencyTable::from(u, v);
    const double index = t.counts.unaryExpr(&pairs).sum();
    const double a = t.row_sums.unaryExpr(&pairs).sum();
    const double b = t.col_sums.unaryExpr(&pairs).sum();
    const double total = pairs(t.n);
    const double expected = total > 0 ? a * b / total : 0.0;
    const double max_index = 0.5 * (a + b);
    const double denom = max_index - expected;
    // Both partitions trivial in the same way (all singletons or one block).
    if (denom == 0.0) return 1.0;
    return (index - expected) / denom;
}

double entropy(const Eigen::VectorXd& sizes, int n) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < sizes.size(); ++i) {
        if (sizes(i) > 0) {
            const double p = sizes(i) / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

double mutual_information(const ContingencyTable& t) {
    double mi = 0.0;
    const double n = t.n;
    for (Eigen::Index r = 0; r < t.counts.rows(); ++r) {
        for (Eigen::Index c = 0; c < t.counts.cols(); ++c) {
            const double nij = t.counts(r, c);
            if (nij > 0) mi += nij / n * std::log(n * nij / (t.row_sums(r) * t.col_sums(c)));
        }
    }
    return mi;
}

double expected_mutual_information(const ContingencyTable& t) {
    const double n = t.n;
    const double lg_n = std::lgamma(n + 1.0);
    double emi = 0.0;
    for (Eigen::Index r = 0; r < t.row_sums.size(); ++r) {
        const double a = t.row_sums(r);
        if (a <= 0) continue;
        for (Eigen::Index c = 0; c < t.col_sums.size(); ++c) {
            const double b = t.col_sums(c);
            if (b <= 0) continue;
            // log of a! b! (n-a)! (n-b)! / n!, shared by every term of this cell
            const double lg_fixed = std::lgamma(a + 1) + std::lgamma(b + 1) + std::lgamma(n - a + 1) +
                                    std::lgamma(n - b + 1) - lg_n;
            const double lo = std::max(1.0, a + b - n);
            const double hi = std::min(a, b);
            for (double nij = lo; nij <= hi; nij += 1.0) {
                const double log_prob = lg_fixed - std::lgamma(nij + 1) - std::lgamma(a - nij + 1) -
                                        std::lgamma(b - nij + 1) - std::lgamma(n - a - b + nij + 1);
                emi += nij / n * std::log(n * nij / (a * b)) * std::exp(log_prob);
            }
        }
    }
    return emi;
}

double adjusted_mutual_information(const Partition& u, const Partition& v, AmiNormalizer normalizer) {
    const auto t = ContingencyTable::from(u, v);
    const auto nonempty = [](const Eigen::VectorXd& s) { return (s.array() > 0).count(); };
    if (nonempty(t.row_sums) <= 1 && nonempty(t.col_sums) <= 1) return 1.0;

    const double mi = mutual_information(t);
    const double emi = expected_mutual_information(t);
    const double hu = entropy(t.row_sums, t.n);
    const double hv = entropy(t.col_sums, t.n);
    const double norm = normalizer == AmiNormalizer::Max ? std::max(hu, hv) : std::sqrt(hu * hv);
    const double denom = norm - emi;
    if (std::abs(denom) <= 1e-12 * std::max(1.0, norm)) {
        // MI is pinned at its maximum under every permutation (e.g. all singletons).
        return is_relabeling(t) ? 1.0 : 0.0;
    }
    return (mi - emi) / denom;
}

}  // namespace mixbench
