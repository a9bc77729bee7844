#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "lspp/pathdist.hpp"
#include "oracles.hpp"

using namespace lspp;

namespace {
const MeasureConfig kPlr{};
}

TEST(Enumerate, CountsArePFactorial) {
    for (std::size_t p : {2, 3, 4, 5, 7}) {
        const auto [data, truth] = fixtures::random_sem(p, 150, p);
        const auto dist = enumerate_paths(data, kPlr);
        EXPECT_EQ(dist.lengths.size(), oracle::factorial(p));
        EXPECT_EQ(dist.sample_size, dist.lengths.size());
        EXPECT_EQ(dist.mode, PathMode::Exhaustive);
    }
}

TEST(Enumerate, MatchesPerPermutationRecomputation) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto [data, truth] = fixtures::random_sem(4, 300, seed, true);
        OrderingLattice lattice(data, kPlr);
        const auto dist = enumerate_paths(lattice);
        oracle::PathCoster coster(fixtures::columns(data));
        std::vector<Index> perm{0, 1, 2, 3};
        std::size_t i = 0;
        do {
            EXPECT_EQ(dist.lengths[i], lattice.path_cost(perm));
            EXPECT_NEAR(dist.lengths[i], coster.cost(perm), 1e-10);
            ++i;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST(Enumerate, MinimumIsShortestPath) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto [data, truth] = fixtures::random_sem(3 + seed % 4, 250, seed + 50, seed % 2 == 0);
        const auto dist = enumerate_paths(data, kPlr);
        EXPECT_NEAR(*std::min_element(dist.lengths.begin(), dist.lengths.end()),
                    shortest_path_order(data, kPlr).order.total_cost, 1e-9);
    }
}

TEST(Enumerate, CapIsEnforced) {
    const auto [data, truth] = fixtures::random_sem(5, 100, 1);
    try {
        enumerate_paths(data, kPlr, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooManyFeatures);
    }
}

TEST(Sample, SingleDrawIsAPathLength) {
    const auto [data, truth] = fixtures::random_sem(5, 200, 2);
    OrderingLattice lattice(data, kPlr);
    const auto all = enumerate_paths(lattice);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto one = sample_paths(lattice, 1, seed);
        ASSERT_EQ(one.lengths.size(), 1U);
        EXPECT_NE(std::find(all.lengths.begin(), all.lengths.end(), one.lengths[0]), all.lengths.end());
    }
}

TEST(Sample, MeanAgreesWithExhaustive) {
    int within = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto [data, truth] = fixtures::random_sem(5, 200, 300 + seed, true);
        OrderingLattice lattice(data, kPlr);
        const auto all = enumerate_paths(lattice);
        const auto s = sample_paths(lattice, 120, seed);
        EXPECT_EQ(s.mode, PathMode::Sampled);
        EXPECT_EQ(s.sample_size, 120U);
        const double se = std::sqrt(oracle::pvar(all.lengths) / 120.0);
        within += std::fabs(oracle::mean(s.lengths) - oracle::mean(all.lengths)) <= 3.0 * se;
    }
    EXPECT_GE(within, 18);
}

TEST(Sample, GridSizesAndDeterminism) {
    const auto [data, truth] = fixtures::random_sem(7, 200, 3);
    OrderingLattice lattice(data, kPlr);
    for (std::size_t n : {100, 250, 500, 1000, 2500}) {
        const auto a = sample_paths(lattice, n, 11);
        EXPECT_EQ(a.lengths.size(), n);
        EXPECT_EQ(a.lengths, sample_paths(lattice, n, 11).lengths);
    }
    EXPECT_THROW(sample_paths(lattice, 0, 1), Error);
}

TEST(Moments, TwoPointKurtosisIsOne) {
    std::vector<double> x;
    for (int i = 0; i < 500; ++i) {
        x.push_back(-1.0);
        x.push_back(1.0);
    }
    const auto m = standardized_moments(x, 3, 4);
    EXPECT_EQ(m[1], 1.0);
    EXPECT_EQ(m[0], 0.0);
}

TEST(Moments, SymmetricDataHasZeroOddMoments) {
    Rng rng(4);
    std::vector<double> x;
    for (int i = 0; i < 2000; ++i) {
        // exact mirror pairs; an offset would round asymmetrically
        const double v = rng.uniform(0.0, 3.0);
        x.push_back(v);
        x.push_back(-v);
    }
    const auto m = standardized_moments(x);
    ASSERT_EQ(m.size(), kMomentCount);
    for (int k = kFirstMoment; k <= kLastMoment; k += 2) EXPECT_NEAR(m[static_cast<std::size_t>(k - kFirstMoment)], 0.0, 1e-9);
}

TEST(Moments, GaussianKurtosis) {
    Rng rng(5);
    const auto x = fixtures::gaussian(rng, 1000000);
    EXPECT_NEAR(standardized_moments(x, 4, 4)[0], 3.0, 0.1);
}

TEST(Moments, MatchDirectComputation) {
    Rng rng(6);
    auto x = fixtures::uniform(rng, 500, 0.0, 2.0);
    for (auto& v : x) v = v * v;
    const auto z = oracle::zscore(x);
    const auto m = standardized_moments(x);
    for (int k = kFirstMoment; k <= kLastMoment; ++k) {
        double s = 0.0;
        for (double v : z) s += std::pow(v, k);
        s /= static_cast<double>(z.size());
        EXPECT_NEAR(m[static_cast<std::size_t>(k - kFirstMoment)], s, 1e-9 * std::max(1.0, std::fabs(s)));
    }
}

TEST(Moments, ConstantInputIsDegenerate) {
    const std::vector<double> x(10, 2.5);
    try {
        standardized_moments(x);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateDistribution);
    }
}

TEST(MomentFeatures, PermutationAndScaleInvariance) {
    const auto [data, truth] = fixtures::random_sem(5, 300, 7, true);
    auto dist = enumerate_paths(data, kPlr);
    for (auto& v : dist.lengths) v += 0.01;  // strictly positive for eps = 0
    const auto base = moment_features(dist, 0.0);
    ASSERT_EQ(base.moments.size(), kMomentCount);
    auto shuffled = dist;
    Rng rng(8);
    rng.shuffle(shuffled.lengths.begin(), shuffled.lengths.end());
    auto scaled = dist;
    for (auto& v : scaled.lengths) v *= 37.5;
    const auto a = moment_features(shuffled, 0.0);
    const auto b = moment_features(scaled, 0.0);
    for (std::size_t k = 0; k < kMomentCount; ++k) {
        const double tol = 1e-9 * std::max(1.0, std::fabs(base.moments[k]));
        EXPECT_NEAR(a.moments[k], base.moments[k], tol);
        EXPECT_NEAR(b.moments[k], base.moments[k], tol);
    }
}

TEST(MomentFeatures, DefaultOffsetHandlesZeroLengths) {
    PathDistribution d;
    d.lengths = {0.0, 0.1, 0.2, 0.05, 0.3};
    const auto f = moment_features(d);
    EXPECT_EQ(f.log_epsilon, kDefaultLogEpsilon);
    for (double m : f.moments) EXPECT_TRUE(std::isfinite(m));
    EXPECT_THROW(moment_features(d, 0.0), Error);
}

TEST(PathMode, Names) {
    EXPECT_EQ(parse_path_mode("exhaustive"), PathMode::Exhaustive);
    EXPECT_EQ(parse_path_mode("sample"), PathMode::Sampled);
    EXPECT_EQ(parse_path_mode(to_string(PathMode::Sampled)), PathMode::Sampled);
    EXPECT_THROW(parse_path_mode("random"), Error);
}
