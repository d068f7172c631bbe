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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mixbench {

enum class Density { Equal, OneSmall10 };
enum class Sphericity { Spherical, Ellipsoidal };

std::string to_string(Density d);
std::string to_string(Sphericity s);
Density parse_density(const std::string& text);
Sphericity parse_sphericity(const std::string& text);

struct ScenarioConfig {
    int k = 3;
    int n = 600;
    int p = 8;
    double overlap = 0.05;  // target mean pairwise overlap
    double pct_categorical = 0.5;
    Density density = Density::Equal;
    Sphericity sphericity = Sphericity::Spherical;
    int replicate = 0;
    std::uint64_t seed = 0;
    int levels = 4;

    int categorical_count() const;
    int continuous_count() const { return p - categorical_count(); }
    /// Throws ConfigInvalid on out-of-range values.
    void validate() const;
    /// When true, every factor lies on the benchmark grid.
    bool on_benchmark_grid() const;
};

struct MixtureSpec {
    int k = 0;
    int p = 0;
    Eigen::VectorXd weights;
    Eigen::MatrixXd means;                 // K x p
    std::vector<Eigen::MatrixXd> covariances;
    Eigen::MatrixXd omega;                 // K x K pairwise overlaps, zero diagonal
    double target = 0.0;
    double achieved = 0.0;                 // mean overlap at calibration
    double inflation = 1.0;
    int retries = 0;

    /// Throws InvalidArgument / NonSPD when the invariants fail.
    void validate() const;
};

std::vector<double> mixture_weights(Density density, int k);
std::vector<int> component_sizes(Density density, int n, int k);

/// Monte Carlo misclassification estimates with common random numbers across
/// covariance inflations c (Sigma_l = c * base_l).
class OverlapEstimator {
public:
    OverlapEstimator(const Eigen::VectorXd& weights, const Eigen::MatrixXd& means,
                     const std::vector<Eigen::MatrixXd>& base_covariances, int samples, std::uint64_t seed);

    /// P(x from l' is assigned to l) at inflation c.
    double directed(int l, int l_prime, double c) const;
    double pair(int l, int l_prime, double c) const { return directed(l, l_prime, c) + directed(l_prime, l, c); }
    double mean_overlap(double c) const;
    Eigen::MatrixXd overlap_matrix(double c) const;
    int k() const noexcept { return k_; }

private:
    struct Directed {
        double offset = 0.0;  // 2 (log pi_l - log|L_l| - log pi_l' + log|L_l'|)
        double aa = 0.0;
        std::vector<double> zz, ww, aw;
    };
    int k_ = 0;
    std::vector<Directed> directed_;  // row-major over (l, l')
};

/// Sum of both directed misclassification rates between components l and l'.
double pairwise_overlap_mc(const MixtureSpec& spec, int l, int l_prime, int samples, std::uint64_t seed);

/// Mean of pairwise_overlap_mc over all pairs.
double mean_overlap_mc(const MixtureSpec& spec, int samples, std::uint64_t seed);

struct CalibrationOptions {
    int samples = 0;              // per directed pair; 0 = max(5e4, 2e3 / target)
    int max_retries = 10;
    double tolerance = 0.005;     // relative stopping band of the bisection
    int max_bisections = 100;
};

int default_calibration_samples(double target);

MixtureSpec calibrate_mixture(const ScenarioConfig& config, std::uint64_t seed, const CalibrationOptions& options = {});

/// Draws geometry only (before inflation); exposed for diagnostics.
MixtureSpec draw_mixture_geometry(const ScenarioConfig& config, std::uint64_t seed);

/// Quartile-style discretization at the R type-7 sample quantiles; values
/// equal to a cut point go to the lower level.
std::vector<int> quantile_discretize(std::span<const double> values, int levels);

MixedDataset sample_dataset(const MixtureSpec& spec, const ScenarioConfig& config, std::uint64_t seed);

struct GeneratedScenario {
    MixtureSpec spec;
    MixedDataset data;
};

/// calibrate_mixture + sample_dataset with seeds derived from config.seed.
GeneratedScenario generate_scenario(const ScenarioConfig& config, const CalibrationOptions& options = {});

void write_mixture_spec(std::ostream& out, const MixtureSpec& spec);
MixtureSpec read_mixture_spec(std::istream& in);

}  // namespace mixbench
