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

// Self-checks shared by `mixbench validate` and the acceptance runner: closed
// forms and brute-force references against the production code paths.

#include <cstdint>
#include <string>
#include <vector>

namespace mixbench::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    bool informational = false;  // reported but not part of the verdict
};

bool all_passed(const std::vector<CheckResult>& checks);

/// ARI vs pair enumeration, greedy vs exhaustive co-occurrence subsets, PAM vs
/// exhaustive medoids, FAMD vs PCA, K-Prototypes(γ=0) vs K-Means. PAM is judged
/// in the benchmark's configuration (20 random starts); the single-start BUILD
/// result is a local optimum that can miss the 5% band and is informational.
std::vector<CheckResult> oracle_suite(std::uint64_t seed = 1, int cases = 50);

/// Per-iteration objective histories of K-Means, K-Prototypes, Modha-Spangler,
/// mixed RKM and PAM SWAP on random instances.
std::vector<CheckResult> monotonicity_suite(std::uint64_t seed = 2, int instances = 100, double tolerance = 1e-9);

/// Label-permutation invariance of ARI/AMI and the chance level of AMI.
std::vector<CheckResult> metric_property_suite(std::uint64_t seed = 3, int relabelings = 50, int random_pairs = 100);

/// Monte Carlo overlap of two unit-variance normals against 2Φ(−Δ).
CheckResult univariate_overlap_check(int samples = 100000, std::uint64_t seed = 4);

/// `seeds` calibrations of the default K=3, p=8 spherical scenario at `target`;
/// each must land within `relative` of the target, both as reported by the
/// calibrator and under an independent re-estimate with fresh samples.
CheckResult calibration_check(double target, int seeds = 20, std::uint64_t seed = 5, double relative = 0.05);

}  // namespace mixbench::validation
