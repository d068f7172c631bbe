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
#include "mixbench/dissimilarity.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace mixbench {

/// Medoids are stored in ascending observation order; cluster l is the set of
/// points whose nearest medoid is medoids[l] (ties to the lowest index).
struct MedoidState {
    std::vector<int> medoids;
    Partition assignment;
    double cost = 0.0;
    int iterations = 0;
    /// Cost after seeding and after every accepted swap / alternating iteration.
    std::vector<double> cost_history;
};

struct BuildInit {};
struct RandomStarts {
    int starts = 1;
    std::uint64_t seed = 0;
};
using PamInit = std::variant<BuildInit, RandomStarts>;

/// Nearest-medoid assignment and its cost for a fixed medoid set.
MedoidState evaluate_medoids(const DissimilarityMatrix& d, std::vector<int> medoids);

/// Greedy BUILD seeding.
std::vector<int> pam_build(const DissimilarityMatrix& d, int k);

/// SWAP phase from the given medoids: applies the best strictly improving
/// (medoid, non-medoid) exchange until none remains.
MedoidState pam_swap(const DissimilarityMatrix& d, std::vector<int> medoids, int max_swaps = 10000);

MedoidState pam(const DissimilarityMatrix& d, int k, const PamInit& init = BuildInit{});

/// Alternating k-medoids: nearest-medoid assignment, then each medoid moves to
/// its cluster's cost minimizer; best of `starts` random seedings.
MedoidState fast_kmedoids(const DissimilarityMatrix& d, int k, int starts, std::uint64_t seed,
                          int max_iter = 100);

}  // namespace mixbench
