#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "nsrl/rng.hpp"

using namespace nsrl;

TEST(SplitMix, ReferenceOutputForZero) {
    EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, EngineIsScrambledMersenneTwister) {
    Rng rng(42);
    std::mt19937_64 reference(splitmix64(42));
    for (int i = 0; i < 100; ++i) EXPECT_EQ(rng.next(), reference());
}

TEST(Rng, SameSeedSameSequence) {
    Rng a(7), b(7);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Rng, SubstreamsDiffer) {
    Rng a = Rng::substream(1, streams::kRewardDraws);
    Rng b = Rng::substream(1, streams::kTransitionDraws);
    Rng c = Rng::substream(2, streams::kRewardDraws);
    const auto x = a.next();
    EXPECT_NE(x, b.next());
    EXPECT_NE(x, c.next());
    EXPECT_EQ(x, Rng::substream(1, streams::kRewardDraws).next());
}

TEST(Rng, UniformRangeAndMean) {
    Rng rng(3);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, BelowIsUniformByChiSquare) {
    Rng rng(4);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) ++counts[rng.below(7)];
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    EXPECT_LT(chi2, 22.46);  // 0.999 quantile, 6 degrees of freedom
    EXPECT_THROW(rng.below(0), std::invalid_argument);
}

TEST(Rng, NormalMoments) {
    Rng rng(5);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Rng, CategoricalFrequencies) {
    Rng rng(6);
    const std::vector<double> p{0.0, 0.2, 0.0, 0.8};
    std::vector<int> counts(4, 0);
    for (int i = 0; i < 50000; ++i) ++counts[static_cast<std::size_t>(rng.categorical(p))];
    EXPECT_EQ(counts[0], 0);
    EXPECT_EQ(counts[2], 0);
    EXPECT_NEAR(counts[1] / 50000.0, 0.2, 0.01);
    EXPECT_THROW(rng.categorical(std::vector<double>{0.0, 0.0}), std::invalid_argument);
}

TEST(Rng, ShuffleIsPermutation) {
    Rng rng(8);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    rng.shuffle(std::span<int>(w));
    EXPECT_NE(v, w);
    std::sort(w.begin(), w.end());
    EXPECT_EQ(v, w);
}
