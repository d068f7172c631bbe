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

#include "mixbench/medoids.hpp"

#include "mixbench/errors.hpp"
#include "mixbench/random.hpp"

#include <algorithm>
#include <limits>

namespace mixbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_k(const DissimilarityMatrix& d, int k) {
    if (k < 1 || k > d.n()) {
        throw Error(ErrorKind::KTooLarge, "K = " + std::to_string(k) + " with n = " + std::to_string(d.n()));
    }
}

// Nearest and second-nearest medoid distances per point; positions index `medoids`.
struct NearestTable {
    std::vector<int> nearest;
    std::vector<double> first;
    std::vector<double> second;
};

NearestTable nearest_table(const DissimilarityMatrix& d, const std::vector<int>& medoids) {
    const int n = d.n();
    NearestTable t{std::vector<int>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n)),
                   std::vector<double>(static_cast<std::size_t>(n))};
    for (int j = 0; j < n; ++j) {
        double best = kInf, next = kInf;
        int arg = 0;
        for (std::size_t m = 0; m < medoids.size(); ++m) {
            const double v = d(j, medoids[m]);
            if (v < best) {
                next = best;
                best = v;
                arg = static_cast<int>(m);
            } else if (v < next) {
                next = v;
            }
        }
        t.nearest[static_cast<std::size_t>(j)] = arg;
        t.first[static_cast<std::size_t>(j)] = best;
        t.second[static_cast<std::size_t>(j)] = next;
    }
    return t;
}

double total_cost(const NearestTable& t) {
    double s = 0.0;
    for (double v : t.first) s += v;
    return s;
}

}  // namespace

MedoidState evaluate_medoids(const DissimilarityMatrix& d, std::vector<int> medoids) {
    std::sort(medoids.begin(), medoids.end());
    const auto t = nearest_table(d, medoids);
    MedoidState state;
    state.assignment = Partition(t.nearest, static_cast<int>(medoids.size()));
    state.cost = total_cost(t);
    state.medoids = std::move(medoids);
    return state;
}

std::vector<int> pam_build(const DissimilarityMatrix& d, int k) {
    check_k(d, k);
    const int n = d.n();
    const Eigen::VectorXd row_sums = d.matrix().rowwise().sum();
    int first = 0;
    for (int i = 1; i < n; ++i)
        if (row_sums(i) < row_sums(first)) first = i;

    std::vector<int> medoids{first};
    std::vector<bool> chosen(static_cast<std::size_t>(n), false);
    chosen[static_cast<std::size_t>(first)] = true;
    std::vector<double> nearest(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) nearest[static_cast<std::size_t>(j)] = d(j, first);

    while (static_cast<int>(medoids.size()) < k) {
        int best = -1;
        double best_gain = -1.0;
        for (int c = 0; c < n; ++c) {
            if (chosen[static_cast<std::size_t>(c)]) continue;
            double gain = 0.0;
            for (int j = 0; j < n; ++j) gain += std::max(nearest[static_cast<std::size_t>(j)] - d(j, c), 0.0);
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        medoids.push_back(best);
        chosen[static_cast<std::size_t>(best)] = true;
        for (int j = 0; j < n; ++j)
            nearest[static_cast<std::size_t>(j)] = std::min(nearest[static_cast<std::size_t>(j)], d(j, best));
    }
    return medoids;
}

MedoidState pam_swap(const DissimilarityMatrix& d, std::vector<int> medoids, int max_swaps) {
    const int n = d.n();
    const int k = static_cast<int>(medoids.size());
    check_k(d, k);
    std::vector<bool> is_medoid(static_cast<std::size_t>(n), false);
    for (int m : medoids) is_medoid[static_cast<std::size_t>(m)] = true;

    auto table = nearest_table(d, medoids);
    double cost = total_cost(table);
    std::vector<double> history{cost};
    std::vector<double> delta(static_cast<std::size_t>(k));
    int swaps = 0;

    while (swaps < max_swaps) {
        // delta[i] for candidate h: cost change of replacing medoids[i] by h,
        // accumulated for all i in one pass over the points.
        double best_delta = 0.0;
        int best_i = -1, best_h = -1;
        for (int h = 0; h < n; ++h) {
            if (is_medoid[static_cast<std::size_t>(h)]) continue;
            std::fill(delta.begin(), delta.end(), 0.0);
            double shared = 0.0;
            for (int j = 0; j < n; ++j) {
                const double dhj = d(h, j);
                const double dj = table.first[static_cast<std::size_t>(j)];
                const double gain = std::min(dhj - dj, 0.0);
                shared += gain;
                delta[static_cast<std::size_t>(table.nearest[static_cast<std::size_t>(j)])] +=
                    std::min(dhj, table.second[static_cast<std::size_t>(j)]) - dj - gain;
            }
            for (int i = 0; i < k; ++i) {
                const double total = delta[static_cast<std::size_t>(i)] + shared;
                if (total < best_delta) {
                    best_delta = total;
                    best_i = i;
                    best_h = h;
                }
            }
        }
        if (best_i < 0 || best_delta >= -1e-12 * std::max(1.0, cost)) break;

        is_medoid[static_cast<std::size_t>(medoids[static_cast<std::size_t>(best_i)])] = false;
        is_medoid[static_cast<std::size_t>(best_h)] = true;
        medoids[static_cast<std::size_t>(best_i)] = best_h;
        table = nearest_table(d, medoids);
        cost = total_cost(table);
        history.push_back(cost);
        ++swaps;
    }

    auto state = evaluate_medoids(d, std::move(medoids));
    state.iterations = swaps;
    state.cost_history = std::move(history);
    return state;
}

MedoidState pam(const DissimilarityMatrix& d, int k, const PamInit& init) {
    check_k(d, k);
    if (std::holds_alternative<BuildInit>(init)) return pam_swap(d, pam_build(d, k));

    const auto& rs = std::get<RandomStarts>(init);
    if (rs.starts < 1) throw Error(ErrorKind::InvalidArgument, "need at least one random start");
    Rng rng(rs.seed);
    MedoidState best;
    best.cost = kInf;
    for (int s = 0; s < rs.starts; ++s) {
        auto state = pam_swap(d, sample_distinct(d.n(), k, rng));
        if (state.cost < best.cost) best = std::move(state);
    }
    return best;
}

MedoidState fast_kmedoids(const DissimilarityMatrix& d, int k, int starts, std::uint64_t seed, int max_iter) {
    check_k(d, k);
    if (starts < 1) throw Error(ErrorKind::InvalidArgument, "need at least one start");
    const int n = d.n();
    Rng rng(seed);
    MedoidState best;
    best.cost = kInf;

    for (int s = 0; s < starts; ++s) {
        std::vector<int> medoids = sample_distinct(n, k, rng);
        auto table = nearest_table(d, medoids);
        std::vector<double> history{total_cost(table)};
        int iter = 0;
        while (iter < max_iter) {
            ++iter;
            // repair clusters emptied by duplicate points
            std::vector<int> sizes(static_cast<std::size_t>(k), 0);
            for (int j = 0; j < n; ++j) ++sizes[static_cast<std::size_t>(table.nearest[static_cast<std::size_t>(j)])];
            for (int l = 0; l < k; ++l) {
                if (sizes[static_cast<std::size_t>(l)] > 0) continue;
                int far = -1;
                for (int j = 0; j < n; ++j) {
                    if (std::find(medoids.begin(), medoids.end(), j) != medoids.end()) continue;
                    if (far < 0 || table.first[static_cast<std::size_t>(j)] > table.first[static_cast<std::size_t>(far)]) far = j;
                }
                if (far < 0) break;
                medoids[static_cast<std::size_t>(l)] = far;
                table = nearest_table(d, medoids);
                std::fill(sizes.begin(), sizes.end(), 0);
                for (int j = 0; j < n; ++j) ++sizes[static_cast<std::size_t>(table.nearest[static_cast<std::size_t>(j)])];
            }

            std::vector<int> updated = medoids;
            for (int l = 0; l < k; ++l) {
                double best_sum = kInf;
                for (int c = 0; c < n; ++c) {
                    if (table.nearest[static_cast<std::size_t>(c)] != l) continue;
                    double sum = 0.0;
                    for (int j = 0; j < n; ++j)
                        if (table.nearest[static_cast<std::size_t>(j)] == l) sum += d(c, j);
                    if (sum < best_sum) {
                        best_sum = sum;
                        updated[static_cast<std::size_t>(l)] = c;
                    }
                }
            }
            if (updated == medoids) break;
            medoids = std::move(updated);
            table = nearest_table(d, medoids);
            history.push_back(total_cost(table));
        }
        auto state = evaluate_medoids(d, medoids);
        state.iterations = iter;
        state.cost_history = std::move(history);
        if (state.cost < best.cost) best = std::move(state);
    }
    return best;
}

}  // namespace mixbench
