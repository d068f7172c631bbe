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

#include "mixbench/methods.hpp"

#include "mixbench/dissimilarity.hpp"
#include "mixbench/errors.hpp"
#include "mixbench/factor_cluster.hpp"
#include "mixbench/kamila.hpp"
#include "mixbench/medoids.hpp"
#include "mixbench/proto_kmeans.hpp"

namespace mixbench {
namespace {

struct MethodInfo {
    Method method;
    const char* name;
    const char* label;
};

constexpr MethodInfo kMethods[] = {
    {Method::Kamila, "kamila", "KAMILA"},
    {Method::FamdKMeans, "famd_kmeans", "FAMD/K-Means"},
    {Method::KPrototypes, "kprototypes", "K-Prototypes"},
    {Method::ModhaSpangler, "modha_spangler", "Modha-Spangler"},
    {Method::MixedRkm, "mixed_rkm", "Mixed RKM"},
    {Method::HlPam, "hl_pam", "HL/PAM"},
    {Method::MixedKMeans, "mixed_kmeans", "Mixed K-Means"},
    {Method::GowerPam, "gower_pam", "Gower/PAM"},
};

const MethodInfo& info(Method m) {
    for (const auto& i : kMethods)
        if (i.method == m) return i;
    throw Error(ErrorKind::InvalidArgument, "unknown method");
}

MethodRun from_medoids(const MedoidState& st, int restarts) { return {st.assignment, st.iterations, restarts}; }

PamInit pam_init(const MethodSettings& s, std::uint64_t seed) {
    if (s.pam_start == PamStartMode::Build) return BuildInit{};
    return RandomStarts{s.starts, seed};
}

}  // namespace

std::string method_name(Method m) { return info(m).name; }
std::string method_label(Method m) { return info(m).label; }

Method parse_method(const std::string& token) {
    for (const auto& i : kMethods)
        if (token == i.name) return i.method;
    throw Error(ErrorKind::ConfigInvalid, "unknown method '" + token + "'");
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods = [] {
        std::vector<Method> v;
        for (const auto& i : kMethods) v.push_back(i.method);
        return v;
    }();
    return methods;
}

MethodRun run_method(Method m, const MixedDataset& data, int k, std::uint64_t seed, const MethodSettings& settings) {
    const int starts = settings.starts;
    switch (m) {
        case Method::Kamila: {
            KamilaOptions opt;
            opt.starts = starts;
            opt.seed = seed;
            const auto st = kamila_fit(data, k, opt);
            return {st.assignment, st.iterations, starts};
        }
        case Method::FamdKMeans: {
            const auto res = famd_kmeans(data, k, starts, seed);
            return {res.assignment, res.clustering.iterations, starts};
        }
        case Method::KPrototypes: {
            KPrototypesOptions opt;
            opt.starts = starts;
            opt.seed = seed;
            const auto res = k_prototypes(data, k, opt);
            return {res.assignment, res.iterations, starts};
        }
        case Method::ModhaSpangler: {
            ModhaSpanglerOptions opt;
            opt.starts = starts;
            opt.seed = seed;
            if (!settings.ms_grid.empty()) opt.weight_grid = settings.ms_grid;
            const auto res = modha_spangler(data, k, opt);
            return {res.assignment, res.iterations, starts * static_cast<int>(opt.weight_grid.size())};
        }
        case Method::MixedRkm: {
            RkmOptions opt;
            opt.starts = starts;
            opt.seed = seed;
            const auto st = mixed_rkm(data, k, opt);
            return {st.assignment, st.sweeps, starts};
        }
        case Method::HlPam: {
            const auto st = pam(hl_scaled_matrix(data), k, pam_init(settings, seed));
            return from_medoids(st, settings.pam_start == PamStartMode::Build ? 1 : starts);
        }
        case Method::MixedKMeans: {
            const auto d = ahmad_dey_matrix(data, ahmad_dey_model(data));
            return from_medoids(fast_kmedoids(d, k, starts, seed), starts);
        }
        case Method::GowerPam: {
            const auto st = pam(gower_matrix(data), k, pam_init(settings, seed));
            return from_medoids(st, settings.pam_start == PamStartMode::Build ? 1 : starts);
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown method");
}

}  // namespace mixbench
