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
#include <span>
#include <vector>

namespace mixbench {

/// Silverman's rule of thumb 0.9 min(sd, IQR/1.34) m^{-1/5}, falling back to
/// sd, |x_0| and finally 1 when the spread estimate is zero.
double silverman_bandwidth(std::span<const double> sample);

/// Gaussian kernel density estimate on the half line of radii.
class RadialKde {
public:
    static constexpr double density_floor = 1e-12;
    static constexpr double radius_floor = 1e-10;

    /// `window` > 0 truncates the kernel sum at window * bandwidth; 0 sums exactly.
    explicit RadialKde(std::vector<double> radii, double window = 10.0);
    RadialKde(std::vector<double> radii, double bandwidth, double window);

    double bandwidth() const noexcept { return h_; }
    const std::vector<double>& radii() const noexcept { return radii_; }
    /// Unfloored density f_R(r).
    double density(double r) const;

private:
    std::vector<double> radii_;  // sorted
    double h_ = 1.0;
    double window_ = 10.0;
};

/// log f_R(r) + log Gamma(p/2 + 1) - (p - 1) log r - log p - (p/2) log pi,
/// with f_R floored at 1e-12 and r at 1e-10.
double radial_log_density(double r, const RadialKde& kde, int p_continuous);
double radial_log_density(double r, std::span<const double> radii, int p_continuous);

struct KamilaOptions {
    int starts = 1;
    std::uint64_t seed = 0;
    int max_iter = 25;
    double smoothing = 0.025;  // add-delta per level
    bool standardize = true;
    double kde_window = 10.0;  // 0 = exact kernel sums
};

struct KamilaState {
    Partition assignment;
    Eigen::MatrixXd centroids;                       // K x p_r, in the fitted (standardized) scale
    std::vector<std::vector<Eigen::VectorXd>> theta;  // [cluster][column] level probabilities
    std::vector<double> radii;                       // minimum-distance sample of the final KDE
    double bandwidth = 0.0;
    double objective = 0.0;  // sum of winning log-scores
    int iterations = 0;
};

/// n x K log-scores of every point under the parameters held in `state`;
/// `continuous` must be on the fitted scale.
Eigen::MatrixXd kamila_scores(const Eigen::MatrixXd& continuous, const Eigen::MatrixXi& categorical,
                              const KamilaState& state, double kde_window = 10.0);

KamilaState kamila_fit(const MixedDataset& data, int k, const KamilaOptions& options = {});

}  // namespace mixbench
