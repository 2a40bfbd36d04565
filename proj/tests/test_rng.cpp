#include <nntopo/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using nntopo::Xoshiro256;

// Reference values from tests/oracles/prng_oracle.py.
TEST(Xoshiro256, MatchesReferenceStream) {
    Xoshiro256 rng(0);
    EXPECT_EQ(rng.next(), 0x99ec5f36cb75f2b4ULL);
    EXPECT_EQ(rng.next(), 0xbf6e1f784956452aULL);
    EXPECT_EQ(rng.next(), 0x1a5f849d4933e6e0ULL);
    EXPECT_EQ(rng.next(), 0x6aa594f1262d2d2cULL);
}

TEST(Xoshiro256, NormalMatchesReference) {
    Xoshiro256 rng(7);
    EXPECT_DOUBLE_EQ(rng.normal(), -0.15157274547711355);
    EXPECT_DOUBLE_EQ(rng.normal(), 0.5870995807125802);
    EXPECT_DOUBLE_EQ(rng.normal(), 0.09447186106493743);
}

TEST(Xoshiro256, DeriveSeedMatchesReference) {
    EXPECT_EQ(nntopo::derive_seed(0, 0), 0xa706dd2f4d197e6fULL);
    EXPECT_EQ(nntopo::derive_seed(42, 3), 0x43aa8652ad94b3a2ULL);
}

TEST(Xoshiro256, BoundedStaysInRangeAndCoversIt) {
    Xoshiro256 rng(123);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto x = rng.bounded(7);
        ASSERT_LT(x, 7u);
        ++hits[x];
    }
    for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Xoshiro256, NormalMomentsAreSane) {
    Xoshiro256 rng(99);
    double s = 0.0, ss = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        ASSERT_TRUE(std::isfinite(z));
        s += z;
        ss += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(ss / n, 1.0, 0.02);
}
