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

// Shared alternating-minimization loop for the centroid methods. A model
// supplies distance(i, l), update(labels) and reseed(l, i); keeping a single
// loop guarantees that methods which coincide mathematically (e.g. a zero
// categorical weight) also coincide bit for bit.

#include "mixbench/errors.hpp"
#include "mixbench/random.hpp"

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace mixbench::detail {

struct LloydOutcome {
    std::vector<int> labels;
    double cost = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::vector<double> history;
};

inline double row_sq_dist(const Eigen::MatrixXd& x, Eigen::Index i, const Eigen::MatrixXd& c, Eigen::Index l) {
    return (x.row(i) - c.row(l)).squaredNorm();
}

inline void update_means(const Eigen::MatrixXd& x, const std::vector<int>& labels, int k, Eigen::MatrixXd& c) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
        counts(labels[static_cast<std::size_t>(i)]) += 1.0;
    }
    for (int l = 0; l < k; ++l)
        if (counts(l) > 0) c.row(l) = sums.row(l) / counts(l);
}

template <typename Model>
LloydOutcome lloyd(Model& model, int n, int k, int max_iter) {
    LloydOutcome out;
    out.labels.assign(static_cast<std::size_t>(n), 0);
    std::vector<double> dist(static_cast<std::size_t>(n), 0.0);

    auto assign = [&] {
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (int l = 0; l < k; ++l) {
                const double d = model.distance(i, l);
                if (d < best) {
                    best = d;
                    arg = l;
                }
            }
            out.labels[static_cast<std::size_t>(i)] = arg;
            dist[static_cast<std::size_t>(i)] = best;
        }
    };
    auto repair = [&] {
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int v : out.labels) ++counts[static_cast<std::size_t>(v)];
        for (int l = 0; l < k; ++l) {
            if (counts[static_cast<std::size_t>(l)] > 0) continue;
            int far = -1;
            for (int i = 0; i < n; ++i) {
                if (counts[static_cast<std::size_t>(out.labels[static_cast<std::size_t>(i)])] < 2) continue;
                if (far < 0 || dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(far)]) far = i;
            }
            if (far < 0) break;
            --counts[static_cast<std::size_t>(out.labels[static_cast<std::size_t>(far)])];
            ++counts[static_cast<std::size_t>(l)];
            model.reseed(l, far);
            out.labels[static_cast<std::size_t>(far)] = l;
            dist[static_cast<std::size_t>(far)] = model.distance(far, l);
        }
    };
    auto total = [&] {
        double s = 0.0;
        for (double d : dist) s += d;
        return s;
    };

    assign();
    repair();
    out.history.push_back(total());
    while (out.iterations < max_iter) {
        model.update(out.labels);
        ++out.iterations;
        const std::vector<int> previous = out.labels;
        assign();
        repair();
        out.history.push_back(total());
        if (out.labels == previous) break;
    }
    model.update(out.labels);
    double cost = 0.0;
    for (int i = 0; i < n; ++i) cost += model.distance(i, out.labels[static_cast<std::size_t>(i)]);
    out.cost = cost;
    return out;
}

/// Runs `starts` seedings at distinct random rows; keeps the lowest cost,
/// ties to the earliest start. `make(seed_rows)` builds a fresh model.
template <typename Factory>
auto best_of_starts(int n, int k, int starts, std::uint64_t seed, int max_iter, Factory make) {
    if (k < 1 || k > n) throw Error(ErrorKind::KTooLarge, "k must lie in [1, n]");
    if (starts < 1) throw Error(ErrorKind::InvalidArgument, "starts must be positive");
    if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be positive");
    Rng rng(seed);
    auto best_model = make(sample_distinct(n, k, rng));
    LloydOutcome best = lloyd(best_model, n, k, max_iter);
    for (int s = 1; s < starts; ++s) {
        auto model = make(sample_distinct(n, k, rng));
        LloydOutcome run = lloyd(model, n, k, max_iter);
        if (run.cost < best.cost) {
            best = std::move(run);
            best_model = std::move(model);
        }
    }
    return std::pair{std::move(best), std::move(best_model)};
}

}  // namespace mixbench::detail
