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

#include "mixbench/validation.hpp"

#include "mixbench/dataset_io.hpp"
#include "mixbench/dissimilarity.hpp"
#include "mixbench/factor_cluster.hpp"
#include "mixbench/medoids.hpp"
#include "mixbench/metrics.hpp"
#include "mixbench/oracles.hpp"
#include "mixbench/proto_kmeans.hpp"
#include "mixbench/random.hpp"
#include "mixbench/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace mixbench::validation {
namespace {

Partition random_partition(int n, int k, Rng& rng) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = pick(rng);
    return Partition(std::move(labels), k);
}

Partition relabel(const Partition& p, Rng& rng) {
    std::vector<int> perm(static_cast<std::size_t>(p.k()));
    for (int i = 0; i < p.k(); ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> out;
    for (int l : p.labels()) out.push_back(perm[static_cast<std::size_t>(l)]);
    return Partition(std::move(out), p.k());
}

Eigen::MatrixXd random_normal(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = z(rng);
    return m;
}

// The first `levels` rows cycle through every level so none is unobserved.
MixedDataset random_dataset(int n, int pr, int pc, int levels, Rng& rng) {
    Eigen::MatrixXd con = random_normal(n, pr, rng);
    Eigen::MatrixXi cat(n, pc);
    std::uniform_int_distribution<int> pick(0, levels - 1);
    for (int j = 0; j < pc; ++j)
        for (int i = 0; i < n; ++i) cat(i, j) = i < levels ? i : pick(rng);
    return MixedDataset(std::move(con), std::move(cat), std::vector<int>(static_cast<std::size_t>(pc), levels));
}

std::string sci(double v) {
    std::ostringstream o;
    o.precision(3);
    o << v;
    return o.str();
}

CheckResult tally(std::string name, int good, int total, const std::string& extra) {
    CheckResult r{std::move(name), good == total, std::to_string(good) + "/" + std::to_string(total) + " cases"};
    if (!extra.empty()) r.detail += ", " + extra;
    return r;
}

// Largest rise between consecutive entries (≤ 0 when non-increasing).
double worst_rise(const std::vector<double>& history) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t < history.size(); ++t) worst = std::max(worst, history[t] - history[t - 1]);
    return worst;
}

Eigen::MatrixXd population_zscores(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd z = x.rowwise() - x.colwise().mean();
    for (Eigen::Index j = 0; j < z.cols(); ++j) z.col(j) /= std::sqrt(z.col(j).squaredNorm() / static_cast<double>(z.rows()));
    return z;
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.informational; });
}

std::vector<CheckResult> oracle_suite(std::uint64_t seed, int cases) {
    std::vector<CheckResult> out;
    Rng rng(seed);
    {
        int good = 0;
        double worst = 0.0;
        for (int t = 0; t < cases; ++t) {
            std::uniform_int_distribution<int> nd(2, 12), kd(1, 5);
            const int n = nd(rng);
            const auto u = random_partition(n, kd(rng), rng);
            const auto v = random_partition(n, kd(rng), rng);
            const double diff = std::abs(adjusted_rand_index(u, v) - oracle::ari_by_pair_enumeration(u, v));
            worst = std::max(worst, diff);
            good += diff <= 1e-12;
        }
        out.push_back(tally("ARI closed form = pair enumeration (n<=12)", good, cases, "max |diff| " + sci(worst)));
    }
    {
        int good = 0, total = 0;
        double worst = 0.0;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int c = 1; c <= 6; ++c)
            for (int t = 0; t < cases; ++t, ++total) {
                Eigen::VectorXd a(c), b(c);
                for (int h = 0; h < c; ++h) {
                    a(h) = unif(rng) < 0.2 ? 0.0 : unif(rng);
                    b(h) = unif(rng) < 0.2 ? 0.0 : unif(rng);
                }
                a(0) += 1e-3;
                b(c - 1) += 1e-3;
                a /= a.sum();
                b /= b.sum();
                const double diff = std::abs(cooccurrence_distance(a, b) - oracle::cooccurrence_by_subset_search(a, b));
                worst = std::max(worst, diff);
                good += diff <= 1e-12;
            }
        out.push_back(tally("Ahmad-Dey greedy subset = exhaustive subsets (c<=6)", good, total, "max |diff| " + sci(worst)));
    }
    {
        int good = 0, build_good = 0;
        double worst = 0.0, worst_build = 0.0;
        for (int t = 0; t < cases; ++t) {
            std::uniform_int_distribution<int> nd(4, 10), kd(1, 3);
            const int n = nd(rng);
            const int k = std::min(kd(rng), n);
            const DissimilarityMatrix d = t % 2 == 0 ? DissimilarityMatrix(euclidean_distances(random_normal(n, 2, rng)))
                                                     : gower_matrix(random_dataset(n, 2, 2, 3, rng));
            const double optimum = oracle::medoids_by_exhaustive_search(d.matrix(), k).second;
            const double cost = pam(d, k, RandomStarts{20, static_cast<std::uint64_t>(t)}).cost;
            const double build_cost = pam(d, k, BuildInit{}).cost;
            if (optimum > 0) {
                worst = std::max(worst, cost / optimum - 1.0);
                worst_build = std::max(worst_build, build_cost / optimum - 1.0);
            }
            good += cost <= 1.05 * optimum + 1e-12 && cost >= optimum - 1e-12;
            build_good += build_cost <= 1.05 * optimum + 1e-12 && build_cost >= optimum - 1e-12;
        }
        out.push_back(tally("PAM within 5% of exhaustive medoids (n<=10, 20 random starts)", good, cases,
                            "worst excess " + sci(100.0 * worst) + "%"));
        auto build = tally("PAM within 5% of exhaustive medoids (n<=10, single-start BUILD)", build_good, cases,
                           "worst excess " + sci(100.0 * worst_build) + "%");
        build.informational = true;
        out.push_back(build);
    }
    {
        int good = 0;
        double worst = 0.0;
        for (int t = 0; t < cases; ++t) {
            std::uniform_int_distribution<int> nd(10, 80), pd(2, 6);
            const int n = nd(rng), p = pd(rng);
            const auto data = random_dataset(n, p, 0, 2, rng);
            const int d = 1 + t % p;
            const auto proj = famd_project(data, d);
            const Eigen::MatrixXd ref = oracle::pca_scores_by_eigen(population_zscores(data.continuous()), d);
            double diff = 0.0;
            for (Eigen::Index c = 0; c < d; ++c)
                diff = std::max(diff, std::min((proj.scores.col(c) - ref.col(c)).cwiseAbs().maxCoeff(),
                                               (proj.scores.col(c) + ref.col(c)).cwiseAbs().maxCoeff()));
            worst = std::max(worst, diff);
            good += diff < 1e-8;
        }
        out.push_back(tally("FAMD = PCA on continuous-only data (up to sign)", good, cases, "max |diff| " + sci(worst)));
    }
    {
        int good = 0;
        for (int t = 0; t < cases; ++t) {
            const auto s = static_cast<std::uint64_t>(t);
            const auto cont = random_dataset(50, 3, 0, 2, rng);
            KPrototypesOptions opt;
            opt.starts = 4;
            opt.seed = s;
            const auto kp = k_prototypes(cont, 3, opt);
            const auto km = kmeans(zscore_columns(cont.continuous()), 3, 4, s);
            const auto mixed = random_dataset(50, 3, 2, 3, rng);
            opt.gamma = 0.0;
            const auto forced = k_prototypes(mixed, 3, opt);
            const auto km_mixed = kmeans(zscore_columns(mixed.continuous()), 3, 4, s);
            good += kp.assignment == km.assignment && kp.cost == km.wcss && forced.assignment == km_mixed.assignment;
        }
        out.push_back(tally("K-Prototypes with gamma=0 = K-Means under a shared seed", good, cases, ""));
    }
    return out;
}

std::vector<CheckResult> monotonicity_suite(std::uint64_t seed, int instances, double tol) {
    double rise[5];
    std::fill(std::begin(rise), std::end(rise), -std::numeric_limits<double>::infinity());
    int good[5] = {0, 0, 0, 0, 0};
    for (int t = 0; t < instances; ++t) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t)}));
        const auto s = static_cast<std::uint64_t>(t);
        const auto data = random_dataset(40, 2, 2, 3, rng);
        std::vector<double> histories[5];
        histories[0] = kmeans(data.continuous(), 3, 1, s).cost_history;
        KPrototypesOptions kp;
        kp.seed = s;
        histories[1] = k_prototypes(data, 3, kp).cost_history;
        ModhaSpanglerOptions ms;
        ms.seed = s;
        ms.weight_grid = {0.3, 0.7};
        histories[2] = modha_spangler(data, 3, ms).cost_history;
        RkmOptions rkm;
        rkm.seed = s;
        histories[3] = mixed_rkm(data, 3, rkm).objective_history;
        const auto d = gower_matrix(data);
        histories[4] = pam_swap(d, sample_distinct(d.n(), 3, rng)).cost_history;
        for (int m = 0; m < 5; ++m) {
            const double r = worst_rise(histories[m]);
            rise[m] = std::max(rise[m], r);
            good[m] += r <= tol;
        }
    }
    const char* names[5] = {"K-Means", "K-Prototypes", "Modha-Spangler", "mixed RKM", "PAM SWAP"};
    std::vector<CheckResult> out;
    for (int m = 0; m < 5; ++m)
        out.push_back(tally(std::string(names[m]) + " objective non-increasing", good[m], instances,
                            "largest step change " + sci(rise[m])));
    return out;
}

std::vector<CheckResult> metric_property_suite(std::uint64_t seed, int relabelings, int random_pairs) {
    Rng rng(seed);
    std::vector<CheckResult> out;
    const auto u = random_partition(60, 4, rng);
    const auto v = random_partition(60, 3, rng);
    const double ari = adjusted_rand_index(u, v);
    const double ami = adjusted_mutual_information(u, v);
    int good = 0;
    double worst = 0.0;
    for (int r = 0; r < relabelings; ++r) {
        const auto u2 = relabel(u, rng);
        const auto v2 = relabel(v, rng);
        const double diff = std::max(std::abs(adjusted_rand_index(u2, v2) - ari), std::abs(adjusted_mutual_information(u2, v2) - ami));
        worst = std::max(worst, diff);
        good += diff <= 1e-12;
    }
    out.push_back(tally("ARI/AMI invariant to label permutation", good, relabelings, "max |diff| " + sci(worst)));
    double sum = 0.0;
    for (int i = 0; i < random_pairs; ++i) {
        Rng pair_rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
        sum += adjusted_mutual_information(random_partition(200, 3, pair_rng), random_partition(200, 3, pair_rng));
    }
    const double mean = sum / random_pairs;
    out.push_back({"AMI of independent partitions averages to 0 (+-0.1)", std::abs(mean) <= 0.1,
                   "mean over " + std::to_string(random_pairs) + " seeds = " + sci(mean)});
    return out;
}

CheckResult univariate_overlap_check(int samples, std::uint64_t seed) {
    double worst = 0.0;
    for (double delta : {0.5, 1.0, 1.2816, 2.0}) {
        MixtureSpec s;
        s.k = 2;
        s.p = 1;
        s.weights = Eigen::VectorXd::Constant(2, 0.5);
        s.means = Eigen::MatrixXd::Zero(2, 1);
        s.means(1, 0) = 2 * delta;
        s.covariances = {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1)};
        s.omega = Eigen::MatrixXd::Zero(2, 2);
        worst = std::max(worst, std::abs(pairwise_overlap_mc(s, 0, 1, samples, seed) - oracle::univariate_overlap(delta)));
    }
    return {"univariate overlap = 2*Phi(-delta) within 0.01", worst <= 0.01,
            std::to_string(samples) + " samples, delta in {0.5,1,1.28,2}, max |diff| " + sci(worst)};
}

CheckResult calibration_check(double target, int seeds, std::uint64_t seed, double relative) {
    int good = 0;
    double worst_reported = 0.0, worst_independent = 0.0;
    std::string failure;
    for (int i = 0; i < seeds; ++i) {
        ScenarioConfig cfg;
        cfg.overlap = target;
        const auto s = derive_seed(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(std::llround(target * 1e6))});
        try {
            const auto spec = calibrate_mixture(cfg, s);
            const double reported = std::abs(spec.achieved - target) / target;
            const double independent = std::abs(mean_overlap_mc(spec, 500000, derive_seed(s, {99})) - target) / target;
            worst_reported = std::max(worst_reported, reported);
            worst_independent = std::max(worst_independent, independent);
            good += reported <= relative && independent <= relative;
        } catch (const std::exception& e) {
            failure = e.what();
        }
    }
    auto r = tally("calibration at overlap " + format_double(target), good, seeds,
                   "worst relative error " + sci(100 * worst_reported) + "% reported, " + sci(100 * worst_independent) +
                       "% re-estimated");
    if (!failure.empty()) r.detail += ", last error: " + failure;
    return r;
}

}  // namespace mixbench::validation
