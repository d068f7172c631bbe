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

#pragma once

// Independent reference computations used by the test suites and the
// `validate` subcommand. Each one takes the slow, obvious route.

#include "mixbench/dataset.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace mixbench::oracle {

/// ARI by explicit O(n^2) enumeration of all observation pairs.
double ari_by_pair_enumeration(const Partition& u, const Partition& v);

/// max over all 2^c subsets s of P(s | A) + P(not s | B) - 1.
double cooccurrence_by_subset_search(const Eigen::VectorXd& cond_a, const Eigen::VectorXd& cond_b);

/// Best K-medoid set by enumerating every C(n, K) subset.
std::pair<std::vector<int>, double> medoids_by_exhaustive_search(const Eigen::MatrixXd& d, int k);

/// Principal-component scores of a centered matrix via the eigendecomposition of X^T X.
Eigen::MatrixXd pca_scores_by_eigen(const Eigen::MatrixXd& centered, int d);

/// Standard normal CDF.
double normal_cdf(double x);

/// Pairwise overlap of N(0,1) and N(2*delta,1) with equal weights: 2 Phi(-delta).
double univariate_overlap(double delta);

}  // namespace mixbench::oracle
