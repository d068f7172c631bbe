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

#include <cstdint>
#include <optional>
#include <vector>

namespace mixbench {

struct KMeansResult {
    Partition assignment;
    Eigen::MatrixXd centroids;
    double wcss = 0.0;
    int iterations = 0;
    /// Objective after every assignment step of the winning start.
    std::vector<double> cost_history;
};

/// Lloyd iterations from `starts` seedings at distinct random points.
/// Empty clusters are reseeded at the point farthest from its centroid.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int starts, std::uint64_t seed, int max_iter = 100);

/// Within-cluster sum of squares of a partition around its cluster means.
double within_cluster_ss(const Eigen::MatrixXd& points, const Partition& assignment);

struct GammaWeight {
    enum class Source { VarianceRatio, GridSearch, Fixed };
    double gamma = 0.0;
    Source source = Source::Fixed;
    std::vector<double> grid;
};

/// Mean continuous sample variance over mean categorical variance 1 - sum p^2.
double variance_ratio_gamma(const MixedDataset& data);

struct KPrototypesOptions {
    int starts = 1;
    std::uint64_t seed = 0;
    int max_iter = 100;
    bool standardize = true;
    std::optional<double> gamma;  // overrides the variance ratio
};

struct KPrototypesResult {
    Partition assignment;
    GammaWeight gamma;
    Eigen::MatrixXd centers;  // k x p_r cluster means
    Eigen::MatrixXi modes;    // k x p_c modal levels
    double cost = 0.0;
    int iterations = 0;
    std::vector<double> cost_history;
};

/// Squared Euclidean distance on continuous columns plus gamma times the
/// number of categorical mismatches against the cluster modes.
KPrototypesResult k_prototypes(const MixedDataset& data, int k, const KPrototypesOptions& options = {});

/// Objective E for a fixed partition and prototypes.
double k_prototypes_cost(const MixedDataset& data, const Partition& assignment, const Eigen::MatrixXd& centers,
                         const Eigen::MatrixXi& modes, double gamma);

/// 1 - cos(a, b); ZeroVector when either vector vanishes.
double cosine_dissimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// alpha_i = i / (count + 1), i = 1..count.
std::vector<double> uniform_weight_grid(int count = 10);
/// i / 6, i = 1..5.
std::vector<double> sixths_weight_grid();

struct ModhaSpanglerOptions {
    int starts = 1;
    std::uint64_t seed = 0;
    int max_iter = 100;
    bool standardize = true;
    /// Categorical shares alpha in [0, 1): distance (1-alpha) |x-q|^2 + alpha (1 - cos),
    /// i.e. gamma = alpha / (1 - alpha) up to an overall scale.
    std::vector<double> weight_grid = uniform_weight_grid(10);
};

struct ModhaSpanglerResult {
    Partition assignment;
    GammaWeight gamma;
    double alpha = 0.0;
    double distortion_ratio = 0.0;
    std::vector<double> grid_ratios;
    std::vector<Partition> grid_partitions;
    Eigen::MatrixXd centers;      // k x p_r
    Eigen::MatrixXd dummy_means;  // k x sum c_j
    double cost = 0.0;
    int iterations = 0;
    std::vector<double> cost_history;
};

/// (W_con / B_con) * (W_cat / B_cat) with squared-Euclidean and cosine
/// dispersions around cluster and grand centroids; +inf when a between term vanishes.
double ms_distortion_ratio(const Eigen::MatrixXd& continuous, const Eigen::MatrixXd& indicators,
                           const Partition& assignment);

ModhaSpanglerResult modha_spangler(const MixedDataset& data, int k, const ModhaSpanglerOptions& options = {});

}  // namespace mixbench
