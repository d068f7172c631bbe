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

namespace mixbench {

/// Joint counts n_uv between the clusters of two partitions of the same n.
struct ContingencyTable {
    Eigen::MatrixXd counts;  // K_u x K_v
    Eigen::VectorXd row_sums;
    Eigen::VectorXd col_sums;
    int n = 0;

    static ContingencyTable from(const Partition& u, const Partition& v);
};

enum class AmiNormalizer { Max, Sqrt };

double adjusted_rand_index(const Partition& u, const Partition& v);

/// Mutual information in nats.
double mutual_information(const ContingencyTable& table);
double entropy(const Eigen::VectorXd& sizes, int n);

/// E[MI] under the hypergeometric (fixed-marginals permutation) model.
double expected_mutual_information(const ContingencyTable& table);

double adjusted_mutual_information(const Partition& u, const Partition& v,
                                   AmiNormalizer normalizer = AmiNormalizer::Max);

}  // namespace mixbench
