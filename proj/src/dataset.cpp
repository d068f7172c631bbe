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

#include "mixbench/dataset.hpp"

#include "mixbench/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mixbench {

Partition::Partition(std::vector<int> assign, int k) : assign_(std::move(assign)), k_(k) {
    if (k_ < 1) throw Error(ErrorKind::InvalidArgument, "partition needs K >= 1");
    for (int label : assign_) {
        if (label < 0 || label >= k_) {
            throw Error(ErrorKind::InvalidArgument,
                        "cluster index " + std::to_string(label) + " outside [0, " + std::to_string(k_) + ")");
        }
    }
}

Partition Partition::from_labels(std::vector<int> assign) {
    int k = 0;
    for (int label : assign) k = std::max(k, label + 1);
    return Partition(std::move(assign), std::max(k, 1));
}

std::vector<int> Partition::cluster_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(k_), 0);
    for (int label : assign_) ++sizes[static_cast<std::size_t>(label)];
    return sizes;
}

bool Partition::has_empty_cluster() const {
    const auto sizes = cluster_sizes();
    return std::find(sizes.begin(), sizes.end(), 0) != sizes.end();
}

Eigen::MatrixXd Partition::indicator_matrix() const {
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n(), k_);
    for (int i = 0; i < n(); ++i) z(i, assign_[static_cast<std::size_t>(i)]) = 1.0;
    return z;
}

MixedDataset::MixedDataset(Eigen::MatrixXd continuous, Eigen::MatrixXi categorical, std::vector<int> levels,
                           std::optional<std::vector<int>> truth, std::vector<std::string> names,
                           std::vector<std::vector<std::string>> vocabularies)
    : continuous_(std::move(continuous)),
      categorical_(std::move(categorical)),
      levels_(std::move(levels)),
      truth_(std::move(truth)),
      names_(std::move(names)),
      vocabularies_(std::move(vocabularies)) {
    if (continuous_.rows() != categorical_.rows()) {
        throw Error(ErrorKind::LengthMismatch, "continuous and categorical blocks differ in row count");
    }
    if (continuous_.rows() < 1) throw Error(ErrorKind::InvalidArgument, "dataset needs n >= 1");
    if (p() < 1) throw Error(ErrorKind::InvalidArgument, "dataset needs p >= 1");
    if (static_cast<int>(levels_.size()) != p_categorical()) {
        throw Error(ErrorKind::SchemaMismatch, "one level count per categorical column required");
    }
    if (!continuous_.allFinite()) throw Error(ErrorKind::InvalidArgument, "continuous values must be finite");
    for (int j = 0; j < p_categorical(); ++j) {
        const int c = levels_[static_cast<std::size_t>(j)];
        if (c < 1) throw Error(ErrorKind::InvalidArgument, "level count must be >= 1");
        for (int i = 0; i < n(); ++i) {
            const int v = categorical_(i, j);
            if (v < 0 || v >= c) {
                throw Error(ErrorKind::InvalidArgument, "level code " + std::to_string(v) + " in categorical column " +
                                                            std::to_string(j) + " outside [0, " + std::to_string(c) +
                                                            ")");
            }
        }
    }
    if (truth_ && static_cast<int>(truth_->size()) != n()) {
        throw Error(ErrorKind::LengthMismatch, "truth labels must have length n");
    }
    if (names_.empty()) {
        for (int j = 0; j < p_continuous(); ++j) names_.push_back("x" + std::to_string(j + 1));
        for (int j = 0; j < p_categorical(); ++j) names_.push_back("c" + std::to_string(j + 1));
    } else if (static_cast<int>(names_.size()) != p()) {
        throw Error(ErrorKind::SchemaMismatch, "one name per column required");
    }
    if (vocabularies_.empty()) {
        for (int c : levels_) {
            std::vector<std::string> vocab;
            for (int h = 0; h < c; ++h) vocab.push_back(std::to_string(h));
            vocabularies_.push_back(std::move(vocab));
        }
    } else {
        if (static_cast<int>(vocabularies_.size()) != p_categorical()) {
            throw Error(ErrorKind::SchemaMismatch, "one vocabulary per categorical column required");
        }
        for (int j = 0; j < p_categorical(); ++j) {
            if (static_cast<int>(vocabularies_[static_cast<std::size_t>(j)].size()) != levels_[static_cast<std::size_t>(j)]) {
                throw Error(ErrorKind::SchemaMismatch, "vocabulary size differs from level count");
            }
        }
    }
}

std::optional<Partition> MixedDataset::truth_partition() const {
    if (!truth_) return std::nullopt;
    return Partition::from_labels(*truth_);
}

MixedDataset MixedDataset::with_continuous(Eigen::MatrixXd continuous) const {
    return MixedDataset(std::move(continuous), categorical_, levels_, truth_, names_, vocabularies_);
}

MixedDataset MixedDataset::with_categorical(Eigen::MatrixXi categorical) const {
    return MixedDataset(continuous_, std::move(categorical), levels_, truth_, names_, vocabularies_);
}

MixedDataset MixedDataset::without_truth() const {
    return MixedDataset(continuous_, categorical_, levels_, std::nullopt, names_, vocabularies_);
}

bool MixedDataset::same_schema(const MixedDataset& other) const {
    return p_continuous() == other.p_continuous() && levels_ == other.levels_;
}

DummyCoding DummyCoding::for_dataset(const MixedDataset& data, std::span<const double> scales) {
    if (!scales.empty() && static_cast<int>(scales.size()) != data.p_categorical()) {
        throw Error(ErrorKind::SchemaMismatch, "one scale factor per categorical column required");
    }
    DummyCoding coding;
    coding.p_continuous = data.p_continuous();
    int offset = coding.p_continuous;
    for (int j = 0; j < data.p_categorical(); ++j) {
        coding.offsets.push_back(offset);
        coding.widths.push_back(data.levels(j));
        coding.scales.push_back(scales.empty() ? 1.0 : scales[static_cast<std::size_t>(j)]);
        offset += data.levels(j);
    }
    coding.p_star = offset;
    return coding;
}

StandardizationParams compute_standardization(const MixedDataset& data) {
    StandardizationParams params;
    const auto& x = data.continuous();
    const int pr = data.p_continuous();
    params.mean.resize(pr);
    params.sd.resize(pr);
    params.min.resize(pr);
    params.max.resize(pr);
    for (int j = 0; j < pr; ++j) {
        params.mean(j) = x.col(j).mean();
        params.sd(j) = std::sqrt(sample_variance(x.col(j)));
        params.min(j) = x.col(j).minCoeff();
        params.max(j) = x.col(j).maxCoeff();
    }
    for (int j = 0; j < data.p_categorical(); ++j) {
        params.proportions.push_back(level_proportions(data.categorical_column(j), data.levels(j)));
    }
    return params;
}

std::pair<MixedDataset, StandardizationParams> z_standardize(const MixedDataset& data) {
    auto params = compute_standardization(data);
    Eigen::MatrixXd z = data.continuous();
    for (int j = 0; j < data.p_continuous(); ++j) {
        if (!(params.sd(j) > 0.0)) throw Error(ErrorKind::ConstantColumn, "continuous column " + std::to_string(j));
        z.col(j) = (z.col(j).array() - params.mean(j)) / params.sd(j);
    }
    return {data.with_continuous(std::move(z)), std::move(params)};
}

Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd z = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double sd = std::sqrt(sample_variance(x.col(j)));
        if (!(sd > 0.0)) throw Error(ErrorKind::ConstantColumn, "column " + std::to_string(j));
        z.col(j) = (x.col(j).array() - x.col(j).mean()) / sd;
    }
    return z;
}

Eigen::VectorXd level_proportions(std::span<const int> column, int c) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(c);
    if (column.empty()) return p;
    for (int v : column) p(v) += 1.0;
    return p / static_cast<double>(column.size());
}

double categorical_variance(std::span<const int> column, int c) {
    if (column.empty()) throw Error(ErrorKind::EmptyInput, "categorical_variance of an empty column");
    return 1.0 - level_proportions(column, c).squaredNorm();
}

Eigen::MatrixXd categorical_indicators(const MixedDataset& data, std::span<const double> scales) {
    const auto coding = DummyCoding::for_dataset(data, scales);
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(data.n(), coding.p_star - coding.p_continuous);
    for (int j = 0; j < data.p_categorical(); ++j) {
        const int base = coding.offsets[static_cast<std::size_t>(j)] - coding.p_continuous;
        const double s = coding.scales[static_cast<std::size_t>(j)];
        for (int i = 0; i < data.n(); ++i) z(i, base + data.categorical()(i, j)) = s;
    }
    return z;
}

Eigen::MatrixXd dummy_code(const MixedDataset& data, std::span<const double> scales) {
    const auto coding = DummyCoding::for_dataset(data, scales);
    Eigen::MatrixXd out(data.n(), coding.p_star);
    out.leftCols(coding.p_continuous) = data.continuous();
    out.rightCols(coding.p_star - coding.p_continuous) = categorical_indicators(data, scales);
    return out;
}

}  // namespace mixbench
