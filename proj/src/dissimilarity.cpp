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

#include "mixbench/dissimilarity.hpp"

#include "mixbench/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

namespace mixbench {

namespace {

constexpr std::array<char, 8> kMagic{'M', 'I', 'X', 'D', 'I', 'S', 'S', '1'};

template <typename T>
void write_le(std::ostream& out, T value) {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes;
    if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
        throw Error(ErrorKind::ParseError, "truncated dissimilarity dump");
    }
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

// joint[a, t] = count of rows with column j at level a and column j' at level t
Eigen::MatrixXd cross_tab(std::span<const int> col_j, int cj, std::span<const int> col_k, int ck) {
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(cj, ck);
    for (std::size_t i = 0; i < col_j.size(); ++i) joint(col_j[i], col_k[i]) += 1.0;
    return joint;
}

}  // namespace

DissimilarityMatrix::DissimilarityMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols()) throw Error(ErrorKind::InvalidArgument, "dissimilarity matrix must be square");
    if (!values_.allFinite()) throw Error(ErrorKind::InvalidArgument, "dissimilarities must be finite");
    if ((values_.array() < 0.0).any()) throw Error(ErrorKind::InvalidArgument, "dissimilarities must be nonnegative");
    if (values_.diagonal().cwiseAbs().maxCoeff() != 0.0 && values_.size() > 0) {
        throw Error(ErrorKind::InvalidArgument, "dissimilarity diagonal must be zero");
    }
    if (values_.size() > 0 && (values_ - values_.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw Error(ErrorKind::InvalidArgument, "dissimilarity matrix must be symmetric");
    }
}

void write_dissimilarity(std::ostream& out, const DissimilarityMatrix& d) {
    out.write(kMagic.data(), kMagic.size());
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(d.n()));
    for (int i = 1; i < d.n(); ++i)
        for (int j = 0; j < i; ++j) write_le<double>(out, d(i, j));
    if (!out) throw Error(ErrorKind::IoError, "failed writing dissimilarity dump");
}

DissimilarityMatrix read_dissimilarity(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw Error(ErrorKind::ParseError, "not a dissimilarity dump");
    }
    const auto n = static_cast<Eigen::Index>(read_le<std::uint64_t>(in));
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            m(i, j) = read_le<double>(in);
            m(j, i) = m(i, j);
        }
    }
    return DissimilarityMatrix(std::move(m));
}

DissimilarityMatrix gower_matrix(const MixedDataset& data, std::span<const double> weights) {
    const int n = data.n();
    const int pr = data.p_continuous();
    const int pc = data.p_categorical();
    if (!weights.empty() && static_cast<int>(weights.size()) != data.p()) {
        throw Error(ErrorKind::SchemaMismatch, "one Gower weight per variable required");
    }
    std::vector<double> w(static_cast<std::size_t>(data.p()), 1.0);
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (!(weights[j] > 0.0)) throw Error(ErrorKind::NonpositiveWeight, "variable " + std::to_string(j));
        w[j] = weights[j];
    }
    const double total_weight = std::accumulate(w.begin(), w.end(), 0.0);

    const auto& x = data.continuous();
    std::vector<double> scaled_weight(static_cast<std::size_t>(pr));
    for (int j = 0; j < pr; ++j) {
        const double range = x.col(j).maxCoeff() - x.col(j).minCoeff();
        if (!(range > 0.0)) throw Error(ErrorKind::ConstantColumn, "continuous column " + std::to_string(j));
        scaled_weight[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)] / range;
    }

    // Accumulate the weighted dissimilarity 1 - s_j per variable;
    // sum_j w_j (1 - s_j) / sum_j w_j equals one minus the weighted mean similarity.
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) {
            double acc = 0.0;
            for (int j = 0; j < pr; ++j) acc += scaled_weight[static_cast<std::size_t>(j)] * std::abs(x(i, j) - x(k, j));
            for (int j = 0; j < pc; ++j) {
                if (data.categorical()(i, j) != data.categorical()(k, j)) acc += w[static_cast<std::size_t>(pr + j)];
            }
            d(i, k) = d(k, i) = acc / total_weight;
        }
    }
    return DissimilarityMatrix(std::move(d));
}

std::vector<double> hennig_liao_scales(const MixedDataset& data) {
    std::vector<double> scales;
    for (int j = 0; j < data.p_categorical(); ++j) {
        const double variance = categorical_variance(data.categorical_column(j), data.levels(j));
        // a constant column contributes zero difference under any scale
        scales.push_back(variance > 0.0 ? 1.0 / std::sqrt(2.0 * variance) : 1.0);
    }
    return scales;
}

DissimilarityMatrix hl_scaled_matrix(const MixedDataset& data) {
    const auto standardized = z_standardize(data).first;
    const auto scales = hennig_liao_scales(data);
    return DissimilarityMatrix(euclidean_distances(dummy_code(standardized, scales)));
}

std::vector<int> discretize_equal_width(std::span<const double> values, int bins, Eigen::VectorXd* edges) {
    if (bins < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 bins");
    if (values.empty()) throw Error(ErrorKind::EmptyInput, "cannot discretize an empty column");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) throw Error(ErrorKind::ConstantColumn, "cannot discretize a constant column");
    const double width = (hi - lo) / bins;
    std::vector<int> codes;
    codes.reserve(values.size());
    for (double v : values) codes.push_back(std::clamp(static_cast<int>(std::floor((v - lo) / width)), 0, bins - 1));
    if (edges) {
        edges->resize(bins + 1);
        for (int b = 0; b <= bins; ++b) (*edges)(b) = lo + b * width;
        (*edges)(bins) = hi;
    }
    return codes;
}

double cooccurrence_distance(const Eigen::VectorXd& cond_a, const Eigen::VectorXd& cond_b) {
    double value = 0.0;
    for (Eigen::Index t = 0; t < cond_a.size(); ++t) value += cond_a(t) > cond_b(t) ? cond_a(t) : cond_b(t);
    return std::clamp(value - 1.0, 0.0, 1.0);
}

CooccurrenceModel ahmad_dey_model(const MixedDataset& data, int bins, EmptyCategoryPolicy policy) {
    if (data.n() < 2) throw Error(ErrorKind::InvalidArgument, "Ahmad-Dey model needs n >= 2");
    if (bins < 2) throw Error(ErrorKind::InvalidArgument, "Ahmad-Dey model needs bins >= 2");
    const int pr = data.p_continuous();
    const int pc = data.p_categorical();

    CooccurrenceModel model;
    model.p_continuous = pr;
    model.levels = data.levels();
    model.bins = bins;

    // Working columns: categorical first, then discretized continuous ones.
    std::vector<std::vector<int>> columns;
    std::vector<int> widths;
    for (int j = 0; j < pc; ++j) {
        const auto col = data.categorical_column(j);
        columns.emplace_back(col.begin(), col.end());
        widths.push_back(data.levels(j));
    }
    for (int j = 0; j < pr; ++j) {
        const auto& x = data.continuous();
        Eigen::VectorXd edges;
        columns.push_back(discretize_equal_width({x.col(j).data(), static_cast<std::size_t>(data.n())}, bins, &edges));
        widths.push_back(bins);
        model.bin_edges.push_back(std::move(edges));
    }
    const int m = static_cast<int>(columns.size());

    std::vector<Eigen::MatrixXd> deltas;
    for (int j = 0; j < m; ++j) {
        const int cj = widths[static_cast<std::size_t>(j)];
        Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(cj, cj);
        if (m == 1) {
            // no other column to learn from: fall back to simple matching
            delta.setOnes();
            delta.diagonal().setZero();
            deltas.push_back(std::move(delta));
            continue;
        }
        for (int k = 0; k < m; ++k) {
            if (k == j) continue;
            const Eigen::MatrixXd joint = cross_tab(columns[static_cast<std::size_t>(j)], cj,
                                                    columns[static_cast<std::size_t>(k)], widths[static_cast<std::size_t>(k)]);
            const Eigen::VectorXd support = joint.rowwise().sum();
            for (int a = 0; a < cj; ++a) {
                for (int b = a + 1; b < cj; ++b) {
                    if (support(a) == 0.0 || support(b) == 0.0) {
                        if (policy == EmptyCategoryPolicy::Throw) {
                            throw Error(ErrorKind::EmptyCategory, "level " + std::to_string(support(a) == 0.0 ? a : b) +
                                                                      " of working column " + std::to_string(j));
                        }
                        continue;
                    }
                    const Eigen::VectorXd pa = joint.row(a).transpose() / support(a);
                    const Eigen::VectorXd pb = joint.row(b).transpose() / support(b);
                    delta(a, b) += cooccurrence_distance(pa, pb);
                }
            }
        }
        delta /= static_cast<double>(m - 1);
        delta.triangularView<Eigen::StrictlyLower>() = delta.transpose();
        deltas.push_back(std::move(delta));
    }

    model.categorical_delta.assign(deltas.begin(), deltas.begin() + pc);
    model.discretized_delta.assign(deltas.begin() + pc, deltas.end());
    model.continuous_weights.resize(pr);
    for (int j = 0; j < pr; ++j) {
        const auto& codes = columns[static_cast<std::size_t>(pc + j)];
        std::vector<bool> seen(static_cast<std::size_t>(bins), false);
        for (int c : codes) seen[static_cast<std::size_t>(c)] = true;
        double sum = 0.0;
        int count = 0;
        for (int a = 0; a < bins; ++a) {
            for (int b = a + 1; b < bins; ++b) {
                if (!seen[static_cast<std::size_t>(a)] || !seen[static_cast<std::size_t>(b)]) continue;
                sum += model.discretized_delta[static_cast<std::size_t>(j)](a, b);
                ++count;
            }
        }
        model.continuous_weights(j) = count > 0 ? sum / count : 0.0;
    }
    return model;
}

DissimilarityMatrix ahmad_dey_matrix(const MixedDataset& data, const CooccurrenceModel& model) {
    if (data.p_continuous() != model.p_continuous || data.levels() != model.levels) {
        throw Error(ErrorKind::SchemaMismatch, "co-occurrence model was built for a different schema");
    }
    const int n = data.n();
    const Eigen::MatrixXd weighted =
        data.p_continuous() > 0
            ? Eigen::MatrixXd(z_standardize(data).first.continuous() * model.continuous_weights.asDiagonal())
            : Eigen::MatrixXd(n, 0);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) {
            double acc = (weighted.row(i) - weighted.row(k)).squaredNorm();
            for (int j = 0; j < data.p_categorical(); ++j) {
                const double delta = model.categorical_delta[static_cast<std::size_t>(j)](data.categorical()(i, j),
                                                                                        data.categorical()(k, j));
                acc += delta * delta;
            }
            d(i, k) = d(k, i) = acc;
        }
    }
    return DissimilarityMatrix(std::move(d));
}

}  // namespace mixbench
