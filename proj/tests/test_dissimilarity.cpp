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

#include "doctest.h"

#include "mixbench/dissimilarity.hpp"
#include "mixbench/errors.hpp"
#include "mixbench/oracles.hpp"
#include "test_support.hpp"

#include <cmath>
#include <sstream>

using namespace mixbench;

TEST_CASE("Gower: identical rows, one categorical mismatch, single continuous variable") {
    Eigen::MatrixXd con(3, 2);
    con << 0.0, 1.0,
           0.0, 1.0,
           4.0, 3.0;
    Eigen::MatrixXi cat(3, 2);
    cat << 0, 1,
           0, 2,
           1, 0;
    const MixedDataset data(con, cat, {2, 3});
    const auto d = gower_matrix(data);
    // rows 0 and 1 differ only in the second categorical of p = 4 variables
    CHECK(d(0, 1) == doctest::Approx(0.25));
    CHECK(d(0, 0) == 0.0);

    Eigen::MatrixXd x(3, 1);
    x << 1.0, 3.5, 6.0;
    const auto d1 = gower_matrix(MixedDataset(x, Eigen::MatrixXi(3, 0), {}));
    CHECK(d1(0, 1) == doctest::Approx(2.5 / 5.0));
    CHECK(d1(0, 2) == doctest::Approx(1.0));

    Eigen::MatrixXd twin(3, 1);
    twin << 2.0, 2.0, 7.0;
    Eigen::MatrixXi twin_cat(3, 1);
    twin_cat << 1, 1, 0;
    CHECK(gower_matrix(MixedDataset(twin, twin_cat, {2}))(0, 1) == 0.0);
}

TEST_CASE("Gower rejects constant columns and nonpositive weights") {
    const MixedDataset flat(Eigen::MatrixXd::Ones(3, 1), Eigen::MatrixXi(3, 0), {});
    CHECK_THROWS_AS(gower_matrix(flat), Error);
    Rng rng(1);
    const auto data = testing::random_dataset(5, 1, 1, 2, rng);
    const std::vector<double> w{1.0, 0.0};
    try {
        gower_matrix(data, w);
        FAIL("expected NonpositiveWeight");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonpositiveWeight);
    }
}

TEST_CASE("Gower with explicit weights is the weighted mean dissimilarity") {
    Eigen::MatrixXd con(2, 1);
    con << 0.0, 2.0;
    Eigen::MatrixXi cat(2, 1);
    cat << 0, 0;
    const MixedDataset data(con, cat, {1});
    const std::vector<double> w{3.0, 1.0};
    // continuous dissimilarity 1 with weight 3, categorical 0 with weight 1
    CHECK(gower_matrix(data, w)(0, 1) == doctest::Approx(0.75));
}

TEST_CASE("Hennig-Liao scale factors") {
    Eigen::MatrixXi binary(4, 1);
    binary << 0, 1, 0, 1;
    CHECK(hennig_liao_scales(MixedDataset(Eigen::MatrixXd(4, 0), binary, {2}))[0] == doctest::Approx(1.0));
    Eigen::MatrixXi four(8, 1);
    four << 0, 1, 2, 3, 3, 2, 1, 0;
    CHECK(hennig_liao_scales(MixedDataset(Eigen::MatrixXd(8, 0), four, {4}))[0] ==
          doctest::Approx(std::sqrt(4.0 / 6.0)));
}

TEST_CASE("Hennig-Liao scaling makes the expected squared block difference 1") {
    Rng rng(4);
    const auto data = testing::random_dataset(200, 1, 3, 5, rng);
    const auto scales = hennig_liao_scales(data);
    const auto z = categorical_indicators(data, scales);
    const auto coding = DummyCoding::for_dataset(data, scales);
    for (int j = 0; j < data.p_categorical(); ++j) {
        // E over independent draws of two rows of the block's squared difference, by enumeration
        const auto block = z.middleCols(coding.offsets[j] - coding.p_continuous, coding.widths[j]);
        double total = 0.0;
        for (int a = 0; a < data.n(); ++a)
            for (int b = 0; b < data.n(); ++b) total += (block.row(a) - block.row(b)).squaredNorm();
        CHECK(total / (double(data.n()) * data.n()) == doctest::Approx(1.0));
    }
}

TEST_CASE("Hennig-Liao on continuous data is the z-score Euclidean matrix") {
    Rng rng(5);
    const auto data = testing::random_dataset(30, 4, 0, 2, rng);
    const auto d = hl_scaled_matrix(data);
    const auto z = zscore_columns(data.continuous());
    for (int i = 0; i < data.n(); ++i)
        for (int k = 0; k < data.n(); ++k) CHECK(std::abs(d(i, k) - (z.row(i) - z.row(k)).norm()) < 1e-10);
}

TEST_CASE("co-occurrence distance: identical, separated, independent conditionals") {
    Eigen::VectorXd p(4);
    p << 0.1, 0.2, 0.3, 0.4;
    CHECK(cooccurrence_distance(p, p) == 0.0);
    Eigen::VectorXd a(4), b(4);
    a << 0.5, 0.5, 0.0, 0.0;
    b << 0.0, 0.0, 0.3, 0.7;
    CHECK(cooccurrence_distance(a, b) == doctest::Approx(1.0));

    // independent columns: conditionals equal the marginal for every level
    Eigen::MatrixXi cat(16, 2);
    for (int i = 0; i < 16; ++i) {
        cat(i, 0) = i % 4;
        cat(i, 1) = i / 4;
    }
    const auto model = ahmad_dey_model(MixedDataset(Eigen::MatrixXd(16, 0), cat, {4, 4}));
    CHECK(model.categorical_delta[0].cwiseAbs().maxCoeff() < 1e-15);
    CHECK(model.categorical_delta[1].cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("greedy subset equals exhaustive subset search on random tables") {
    Rng rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 1; c <= 6; ++c) {
        for (int trial = 0; trial < 200; ++trial) {
            Eigen::VectorXd a(c), b(c);
            for (int t = 0; t < c; ++t) {
                a(t) = u(rng) < 0.2 ? 0.0 : u(rng);
                b(t) = u(rng) < 0.2 ? 0.0 : u(rng);
            }
            a(0) += 1e-3;
            b(c - 1) += 1e-3;
            a /= a.sum();
            b /= b.sum();
            CHECK(cooccurrence_distance(a, b) == doctest::Approx(oracle::cooccurrence_by_subset_search(a, b)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Ahmad-Dey model: perfectly separating column gives distance 1") {
    Eigen::MatrixXi cat(8, 2);
    for (int i = 0; i < 8; ++i) {
        cat(i, 0) = i % 2;           // A = 0, B = 1
        cat(i, 1) = (i % 2) * 2 + (i / 2) % 2;  // disjoint supports {0,1} vs {2,3}
    }
    const auto model = ahmad_dey_model(MixedDataset(Eigen::MatrixXd(8, 0), cat, {2, 4}));
    CHECK(model.categorical_delta[0](0, 1) == doctest::Approx(1.0));
    CHECK(model.categorical_delta[0](1, 0) == doctest::Approx(1.0));
    for (const auto& delta : model.categorical_delta) {
        CHECK(delta.diagonal().isZero());
        CHECK((delta - delta.transpose()).isZero());
        CHECK((delta.array() >= 0.0).all());
        CHECK((delta.array() <= 1.0).all());
    }
}

TEST_CASE("Ahmad-Dey empty categories") {
    Eigen::MatrixXi cat(4, 2);
    cat << 0, 0,
           0, 1,
           1, 0,
           1, 1;
    const MixedDataset data(Eigen::MatrixXd(4, 0), cat, {3, 2});  // level 2 of column 0 unobserved
    const auto model = ahmad_dey_model(data);
    CHECK(model.categorical_delta[0](0, 2) == 0.0);
    CHECK(model.categorical_delta[0](2, 1) == 0.0);
    try {
        ahmad_dey_model(data, 4, EmptyCategoryPolicy::Throw);
        FAIL("expected EmptyCategory");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyCategory);
    }
}

TEST_CASE("Ahmad-Dey matrix evaluates the squared-term formula") {
    Rng rng(7);
    const auto data = testing::random_dataset(40, 2, 2, 3, rng);
    const auto model = ahmad_dey_model(data, 4);
    const auto d = ahmad_dey_matrix(data, model);
    const auto z = zscore_columns(data.continuous());
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> pick(0, data.n() - 1);
        const int i = pick(rng), k = pick(rng);
        double expected = 0.0;
        for (int j = 0; j < 2; ++j) expected += std::pow(model.continuous_weights(j) * (z(i, j) - z(k, j)), 2);
        for (int j = 0; j < 2; ++j) expected += std::pow(model.categorical_delta[j](data.categorical()(i, j), data.categorical()(k, j)), 2);
        CHECK(d(i, k) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(d(i, k) == d(k, i));
    }
    CHECK((model.continuous_weights.array() >= 0.0).all());
}

TEST_CASE("Ahmad-Dey single categorical column falls back to matching and squares it") {
    Eigen::MatrixXi cat(3, 1);
    cat << 0, 1, 1;
    const MixedDataset data(Eigen::MatrixXd(3, 0), cat, {2});
    const auto model = ahmad_dey_model(data);
    const auto d = ahmad_dey_matrix(data, model);
    CHECK(d(0, 1) == doctest::Approx(std::pow(model.categorical_delta[0](0, 1), 2)));
    CHECK(d(1, 2) == 0.0);
}

TEST_CASE("Ahmad-Dey discretization and continuous weights") {
    const std::vector<double> v{0.0, 1.0, 2.0, 3.0, 4.0, 8.0};
    Eigen::VectorXd edges;
    const auto codes = discretize_equal_width(v, 4, &edges);
    CHECK(codes == std::vector<int>{0, 0, 1, 1, 2, 3});
    CHECK(edges(0) == 0.0);
    CHECK(edges(4) == 8.0);

    // continuous column aligned perfectly with a binary categorical column
    Eigen::MatrixXd con(8, 1);
    Eigen::MatrixXi cat(8, 1);
    for (int i = 0; i < 8; ++i) {
        con(i, 0) = i;
        cat(i, 0) = i < 4 ? 0 : 1;
    }
    const auto model = ahmad_dey_model(MixedDataset(con, cat, {2}), 2);
    CHECK(model.continuous_weights(0) == doctest::Approx(1.0));
    const auto mismatched = MixedDataset(con, Eigen::MatrixXi::Zero(8, 1), {1});
    CHECK_THROWS_AS(ahmad_dey_matrix(mismatched, model), Error);
}

TEST_CASE("all constructions satisfy the dissimilarity invariants on random data") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> nd(5, 50), pd(1, 3), ld(2, 5);
        const auto data = testing::random_dataset(nd(rng), pd(rng), pd(rng), ld(rng), rng);
        const auto g = gower_matrix(data);
        CHECK((g.matrix().array() <= 1.0 + 1e-15).all());
        CHECK(hl_scaled_matrix(data).n() == data.n());
        CHECK(ahmad_dey_matrix(data, ahmad_dey_model(data)).n() == data.n());
    }
}

TEST_CASE("dissimilarity binary dump round-trips and has the documented layout") {
    Rng rng(9);
    const auto d = hl_scaled_matrix(testing::random_dataset(7, 2, 1, 3, rng));
    std::stringstream buf;
    write_dissimilarity(buf, d);
    const std::string bytes = buf.str();
    CHECK(bytes.size() == 8 + 8 + 8 * 21);
    CHECK(bytes.substr(0, 8) == "MIXDISS1");
    CHECK(static_cast<unsigned char>(bytes[8]) == 7);
    const auto back = read_dissimilarity(buf);
    CHECK(back.matrix() == d.matrix());

    std::stringstream junk("not a dump at all");
    CHECK_THROWS_AS(read_dissimilarity(junk), Error);
}

TEST_CASE("DissimilarityMatrix rejects invalid matrices") {
    Eigen::Matrix2d asym;
    asym << 0, 1, 2, 0;
    CHECK_THROWS_AS(DissimilarityMatrix(Eigen::MatrixXd(asym)), Error);
    Eigen::Matrix2d diag;
    diag << 1, 1, 1, 0;
    CHECK_THROWS_AS(DissimilarityMatrix(Eigen::MatrixXd(diag)), Error);
}
