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

#include "mixbench/dataset.hpp"
#include "mixbench/proto_kmeans.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mixbench {

/// FAMD-standardized matrix: continuous z-scores (population sd), then every
/// indicator column divided by sqrt(p_h) and centered. Unobserved levels give
/// zero columns. Column order follows DummyCoding.
Eigen::MatrixXd famd_standardize(const MixedDataset& data);

/// 1 / sqrt(p_h) for every indicator column (0 for unobserved levels).
Eigen::VectorXd famd_indicator_scales(const MixedDataset& data);

struct FamdProjection {
    Eigen::MatrixXd standardized;     // n x p_star
    Eigen::MatrixXd loadings;         // p_star x d, orthonormal columns
    Eigen::MatrixXd scores;           // n x d principal coordinates
    Eigen::VectorXd singular_values;  // all singular values, descending
    int d = 0;
};

/// Principal components of the FAMD-standardized matrix. Each loading column
/// is signed so that its largest-magnitude entry is positive.
FamdProjection famd_project(const MixedDataset& data, int d);

double squared_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Between-category over total sum of squares of f.
double correlation_ratio(const Eigen::VectorXd& f, std::span<const int> categories, int levels);

/// sum_j R^2(f, continuous_j) + sum_j eta^2(f, categorical_j).
double famd_criterion(const Eigen::VectorXd& f, const MixedDataset& data);

struct FamdKMeansResult {
    Partition assignment;
    FamdProjection projection;
    KMeansResult clustering;
    int d = 0;
};

/// FAMD with d = K - 1 (unless overridden), then K-Means on the scores.
FamdKMeansResult famd_kmeans(const MixedDataset& data, int k, int starts, std::uint64_t seed,
                             std::optional<int> d = std::nullopt);

struct RkmOptions {
    int starts = 1;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    int max_sweeps = 100;
    std::optional<int> d;  // default K - 1
};

struct RkmState {
    Partition assignment;
    Eigen::MatrixXd centroids;  // G, K x d
    Eigen::MatrixXd loadings;   // B, p x d
    double objective = 0.0;
    int sweeps = 0;
    int d = 0;
    std::vector<double> objective_history;
};

/// || X - Z G B^T ||_F^2.
double rkm_objective(const Eigen::MatrixXd& x, const Partition& assignment, const Eigen::MatrixXd& centroids,
                     const Eigen::MatrixXd& loadings);

/// Reduced K-Means by alternating least squares on an arbitrary matrix.
RkmState reduced_kmeans(const Eigen::MatrixXd& x, int k, const RkmOptions& options = {});

/// Reduced K-Means on the FAMD-standardized matrix.
RkmState mixed_rkm(const MixedDataset& data, int k, const RkmOptions& options = {});

/// Plain CSV dump (header row of column names) for inspection.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m, const std::string& prefix);

}  // namespace mixbench
