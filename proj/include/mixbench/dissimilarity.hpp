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

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace mixbench {

/// Dense symmetric n x n matrix, nonnegative with zero diagonal.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;
    /// Validates the invariants (symmetry within 1e-10).
    explicit DissimilarityMatrix(Eigen::MatrixXd values);

    int n() const noexcept { return static_cast<int>(values_.rows()); }
    double operator()(int i, int j) const { return values_(i, j); }
    const Eigen::MatrixXd& matrix() const noexcept { return values_; }

private:
    Eigen::MatrixXd values_;
};

/// Binary dump: 8-byte magic "MIXDISS1", n as uint64 little-endian, then the
/// strictly-lower triangle in row-major order as little-endian float64.
void write_dissimilarity(std::ostream& out, const DissimilarityMatrix& d);
DissimilarityMatrix read_dissimilarity(std::istream& in);

/// Gower's coefficient with range-normalised Manhattan similarity for continuous
/// columns and simple matching for categorical ones. `weights` has one entry
/// per variable (continuous first); empty means all 1.
DissimilarityMatrix gower_matrix(const MixedDataset& data, std::span<const double> weights = {});

/// Per-block factor c_j with c_j^2 * 2 (1 - sum_h p_jh^2) = 1, so the expected
/// squared dummy-block difference of two random rows equals 1.
std::vector<double> hennig_liao_scales(const MixedDataset& data);

/// Euclidean distances on [z-scores | c_j-scaled indicators].
DissimilarityMatrix hl_scaled_matrix(const MixedDataset& data);

/// Pairwise Euclidean distance matrix of the rows of x.
template <typename Derived>
Eigen::MatrixXd euclidean_distances(const Eigen::MatrixBase<Derived>& x) {
    const Eigen::VectorXd sq = x.rowwise().squaredNorm();
    Eigen::MatrixXd d = (-2.0 * x * x.transpose()).eval();
    d.colwise() += sq;
    d.rowwise() += sq.transpose();
    d = d.cwiseMax(0.0).cwiseSqrt();
    d.diagonal().setZero();
    // symmetrize away rounding asymmetry of the Gram product
    return 0.5 * (d + d.transpose());
}

enum class EmptyCategoryPolicy {
    Zero,   // distances involving an unobserved level are 0
    Throw,  // EmptyCategory error
};

/// Co-occurrence distances between levels of each column, learned from the
/// conditional distributions of every other column.
struct CooccurrenceModel {
    int p_continuous = 0;
    std::vector<int> levels;
    int bins = 0;
    std::vector<Eigen::MatrixXd> categorical_delta;  // c_j x c_j per categorical column
    std::vector<Eigen::MatrixXd> discretized_delta;  // bins x bins per continuous column
    Eigen::VectorXd continuous_weights;
    std::vector<Eigen::VectorXd> bin_edges;  // bins + 1 edges per continuous column
};

/// Equal-width codes in [0, bins); returns edges alongside.
std::vector<int> discretize_equal_width(std::span<const double> values, int bins, Eigen::VectorXd* edges = nullptr);

/// max over subsets s of P(s|A) + P(not s|B) - 1, evaluated through the
/// maximizing subset s = {t : P(t|A) > P(t|B)}.
double cooccurrence_distance(const Eigen::VectorXd& cond_a, const Eigen::VectorXd& cond_b);

CooccurrenceModel ahmad_dey_model(const MixedDataset& data, int bins = 4,
                                  EmptyCategoryPolicy policy = EmptyCategoryPolicy::Zero);

/// sum_j (w_j (z_ij - z_i'j))^2 + sum_j delta_j(x_ij, x_i'j)^2 on z-scored continuous values.
DissimilarityMatrix ahmad_dey_matrix(const MixedDataset& data, const CooccurrenceModel& model);

}  // namespace mixbench
