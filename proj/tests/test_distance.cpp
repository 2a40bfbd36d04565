#include <nntopo/distance.hpp>
#include <nntopo/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace nntopo;

namespace {

ActivationMatrix from_columns(const std::vector<std::vector<double>>& cols) {
    const std::size_t rows = cols.front().size();
    std::vector<double> v(rows * cols.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) v[r * cols.size() + c] = cols[c][r];
    }
    return ActivationMatrix(rows, cols.size(), std::move(v));
}

}  // namespace

TEST(Pearson, HandExamples) {
    EXPECT_DOUBLE_EQ(pearson_correlation(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), 1.0);
    EXPECT_DOUBLE_EQ(pearson_correlation(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0);
    // centred (-1,0,1).(-1,1,0) = 1; norms sqrt(2) * sqrt(2) = 2
    EXPECT_DOUBLE_EQ(pearson_correlation(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}), 0.5);
}

TEST(Pearson, Errors) {
    EXPECT_THROW(pearson_correlation(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), data_error);
    EXPECT_THROW(pearson_correlation(std::vector<double>{1}, std::vector<double>{1}), data_error);
}

TEST(Pearson, ConstantColumnIsUncorrelated) {
    EXPECT_EQ(pearson_correlation(std::vector<double>{2, 2, 2}, std::vector<double>{1, 5, 3}), 0.0);
    EXPECT_EQ(pearson_correlation(std::vector<double>{2, 2, 2}, std::vector<double>{2, 2, 2}), 0.0);
    const auto d = distance_matrix(from_columns({{0, 0, 0}, {1, 2, 3}, {0, 0, 0}}));
    EXPECT_EQ(d(0, 1), 1.0);
    EXPECT_EQ(d(0, 2), 1.0);
}

TEST(DistanceMatrix, Examples) {
    const auto same = distance_matrix(from_columns({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}));
    for (double v : same.values()) EXPECT_EQ(v, 0.0);

    const auto anti = distance_matrix(from_columns({{1, 2, 3}, {3, 2, 1}}));
    ASSERT_EQ(anti.values().size(), 1u);
    EXPECT_DOUBLE_EQ(anti.values()[0], 2.0);

    const auto three = distance_matrix(from_columns({{1, 2, 3}, {1, 3, 2}, {2, 1, 3}}));
    EXPECT_DOUBLE_EQ(three(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(three(0, 2), 0.5);
    EXPECT_DOUBLE_EQ(three(1, 2), 1.5);
}

TEST(DistanceMatrix, AgreesBitwiseWithPairwisePearson) {
    Xoshiro256 rng(3);
    std::vector<double> v(30 * 12);
    for (auto& x : v) x = rng.normal();
    const ActivationMatrix m(30, 12, v);
    const auto d = distance_matrix(m);
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = i + 1; j < 12; ++j) {
            EXPECT_EQ(d(i, j), 1.0 - pearson_correlation(m.column(i), m.column(j)));
            EXPECT_EQ(d(i, j), d(j, i));
        }
        EXPECT_EQ(d(i, i), 0.0);
    }
}

TEST(DistanceMatrix, RangeOnRandomInputs) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Xoshiro256 rng(seed);
        const std::size_t rows = 2 + seed % 9, cols = 2 + seed % 13;
        std::vector<double> v(rows * cols);
        for (auto& x : v) x = rng.normal() * std::pow(10.0, static_cast<double>(seed % 7) - 3.0);
        const auto d = distance_matrix(ActivationMatrix(rows, cols, v));
        for (double x : d.values()) {
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, 2.0);
        }
    }
}

// Positive affine maps that are exact in binary64 (power-of-two scale,
// integer shift on a dyadic grid, power-of-two sample count) leave every
// distance bitwise unchanged.
TEST(DistanceMatrix, ExactAffineInvarianceIsBitwise) {
    Xoshiro256 rng(17);
    constexpr std::size_t rows = 64, cols = 10;
    std::vector<double> v(rows * cols);
    for (auto& x : v) x = std::round(rng.normal() * 1024.0) / 1024.0;
    const ActivationMatrix m(rows, cols, v);
    std::vector<double> w(v);
    for (std::size_t c = 0; c < cols; ++c) {
        const double scale = std::ldexp(1.0, static_cast<int>(rng.bounded(9)) - 4);
        const double shift = static_cast<double>(rng.bounded(200)) - 100.0;
        for (std::size_t r = 0; r < rows; ++r) w[r * cols + c] = scale * v[r * cols + c] + shift;
    }
    EXPECT_EQ(distance_matrix(ActivationMatrix(rows, cols, w)), distance_matrix(m));
}

TEST(DistanceMatrix, GeneralAffineInvarianceToRounding) {
    Xoshiro256 rng(19);
    constexpr std::size_t rows = 50, cols = 8;
    std::vector<double> v(rows * cols);
    for (auto& x : v) x = rng.normal();
    std::vector<double> w(v);
    for (std::size_t c = 0; c < cols; ++c) {
        const double scale = 0.1 + 10.0 * rng.uniform01();
        const double shift = 20.0 * rng.uniform01() - 10.0;
        for (std::size_t r = 0; r < rows; ++r) w[r * cols + c] = scale * v[r * cols + c] + shift;
    }
    const auto a = distance_matrix(ActivationMatrix(rows, cols, v));
    const auto b = distance_matrix(ActivationMatrix(rows, cols, w));
    for (std::size_t k = 0; k < a.values().size(); ++k) EXPECT_NEAR(a.values()[k], b.values()[k], 1e-13);
}

TEST(CondensedDistanceMatrix, IndexingAndValidation) {
    const CondensedDistanceMatrix d(4, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
    EXPECT_EQ(d(0, 1), 0.1);
    EXPECT_EQ(d(3, 0), 0.3);
    EXPECT_EQ(d(1, 3), 0.5);
    EXPECT_EQ(d(2, 3), 0.6);
    EXPECT_THROW(CondensedDistanceMatrix(4, {0.1, 0.2}), data_error);
    EXPECT_THROW(CondensedDistanceMatrix(2, {-0.1}), data_error);
    EXPECT_THROW(CondensedDistanceMatrix(2, {std::nan("")}), data_error);
}

TEST(CondensedDistanceMatrix, SerialisationRoundTrips) {
    Xoshiro256 rng(5);
    std::vector<double> v(45);
    for (auto& x : v) x = 2.0 * rng.uniform01();
    const CondensedDistanceMatrix d(10, v);
    const auto bytes = to_cdmx(d);
    EXPECT_EQ(bytes.substr(0, 4), "CDMX");
    EXPECT_EQ(bytes.size(), 16u + 45 * 8);
    EXPECT_EQ(parse_cdmx(bytes), d);
    EXPECT_EQ(parse_square_csv(to_square_csv(d)), d);

    auto broken = bytes;
    broken.pop_back();
    EXPECT_THROW(parse_cdmx(broken), data_error);
    EXPECT_THROW(parse_square_csv("0,1\n2,0\n"), data_error);
    EXPECT_THROW(parse_square_csv("1,1\n1,0\n"), data_error);
}
