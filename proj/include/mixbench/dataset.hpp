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

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mixbench {

/// Hard cluster assignment of n observations into K clusters.
///
/// Empty clusters are representable; solvers repair them before returning
/// and `has_empty_cluster()` flags the degenerate state otherwise.
class Partition {
public:
    Partition() = default;
    Partition(std::vector<int> assign, int k);

    /// K is taken as max label + 1.
    static Partition from_labels(std::vector<int> assign);

    int n() const noexcept { return static_cast<int>(assign_.size()); }
    int k() const noexcept { return k_; }
    int operator[](int i) const { return assign_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& labels() const noexcept { return assign_; }

    std::vector<int> cluster_sizes() const;
    bool has_empty_cluster() const;

    /// n x K 0/1 membership matrix.
    Eigen::MatrixXd indicator_matrix() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> assign_;
    int k_ = 0;
};

/// n observations over p_r continuous and p_c categorical columns.
/// Categorical entries are dense level codes 0..c_j-1.
class MixedDataset {
public:
    MixedDataset() = default;
    MixedDataset(Eigen::MatrixXd continuous, Eigen::MatrixXi categorical, std::vector<int> levels,
                 std::optional<std::vector<int>> truth = std::nullopt,
                 std::vector<std::string> names = {},
                 std::vector<std::vector<std::string>> vocabularies = {});

    int n() const noexcept { return static_cast<int>(continuous_.rows()); }
    int p_continuous() const noexcept { return static_cast<int>(continuous_.cols()); }
    int p_categorical() const noexcept { return static_cast<int>(categorical_.cols()); }
    int p() const noexcept { return p_continuous() + p_categorical(); }

    const Eigen::MatrixXd& continuous() const noexcept { return continuous_; }
    const Eigen::MatrixXi& categorical() const noexcept { return categorical_; }
    const std::vector<int>& levels() const noexcept { return levels_; }
    int levels(int j) const { return levels_[static_cast<std::size_t>(j)]; }
    std::span<const int> categorical_column(int j) const {
        return {categorical_.col(j).data(), static_cast<std::size_t>(categorical_.rows())};
    }

    const std::optional<std::vector<int>>& truth() const noexcept { return truth_; }
    std::optional<Partition> truth_partition() const;

    /// Column names, continuous columns first.
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<std::vector<std::string>>& vocabularies() const noexcept { return vocabularies_; }

    /// Same schema and truth, different continuous values.
    MixedDataset with_continuous(Eigen::MatrixXd continuous) const;
    MixedDataset with_categorical(Eigen::MatrixXi categorical) const;
    MixedDataset without_truth() const;

    /// Schema equality: column counts and level counts.
    bool same_schema(const MixedDataset& other) const;

private:
    Eigen::MatrixXd continuous_;
    Eigen::MatrixXi categorical_;
    std::vector<int> levels_;
    std::optional<std::vector<int>> truth_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::string>> vocabularies_;
};

struct StandardizationParams {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;  // divisor n-1
    Eigen::VectorXd min;
    Eigen::VectorXd max;
    std::vector<Eigen::VectorXd> proportions;  // p_jh per categorical column

    Eigen::VectorXd range() const { return max - min; }
};

/// Column layout of the dummy-coded matrix [X_con | Z_1 | ... | Z_pc].
struct DummyCoding {
    int p_continuous = 0;
    std::vector<int> offsets;  // first column of each categorical block
    std::vector<int> widths;   // c_j
    std::vector<double> scales;
    int p_star = 0;

    static DummyCoding for_dataset(const MixedDataset& data, std::span<const double> scales = {});
};

/// Sample variance with divisor n-1 (0 for n < 2).
template <typename Derived>
double sample_variance(const Eigen::MatrixBase<Derived>& x) {
    const auto m = x.size();
    if (m < 2) return 0.0;
    const double mean = x.mean();
    return (x.array() - mean).square().sum() / static_cast<double>(m - 1);
}

/// Statistics for every column; never throws.
StandardizationParams compute_standardization(const MixedDataset& data);

/// z-scores every continuous column. Throws ConstantColumn when sd == 0.
std::pair<MixedDataset, StandardizationParams> z_standardize(const MixedDataset& data);

/// z-scores the columns of a plain matrix (divisor n-1).
Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& x);

Eigen::VectorXd level_proportions(std::span<const int> column, int c);

/// 1 - sum_h p_h^2.
double categorical_variance(std::span<const int> column, int c);

/// n x sum(c_j) one-hot matrix of the categorical columns, block j scaled by scales[j].
Eigen::MatrixXd categorical_indicators(const MixedDataset& data, std::span<const double> scales = {});

/// n x p_star matrix: continuous columns verbatim, then one-hot blocks.
Eigen::MatrixXd dummy_code(const MixedDataset& data, std::span<const double> scales = {});

}  // namespace mixbench
