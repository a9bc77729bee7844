#include <gtest/gtest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "lspp/measures.hpp"
#include "oracles.hpp"

using namespace lspp;

namespace {

double corr(const std::vector<double>& a, std::span<const double> b) {
    const std::vector<double> bv(b.begin(), b.end());
    const auto za = oracle::zscore(a), zb = oracle::zscore(bv);
    double s = 0.0;
    for (std::size_t i = 0; i < za.size(); ++i) s += za[i] * zb[i];
    return s / static_cast<double>(za.size());
}

std::vector<double> noisy_effect(Rng& rng, const std::vector<double>& x, double b) {
    auto y = fixtures::uniform(rng, x.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += b * x[i];
    return y;
}

}  // namespace

TEST(Residual, IdenticalInputsGiveZero) {
    const std::vector<double> x{1.0, 4.0, -2.0, 0.5};
    for (double v : measures::residual(x, x)) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Residual, UncorrelatedInputIsUnchanged) {
    const std::vector<double> xi{1, -1, 1, -1}, xj{1, 1, -1, -1};
    EXPECT_EQ(measures::residual(xi, xj), xi);
}

TEST(Residual, AffineRelationIsRemoved) {
    Rng rng(5);
    const auto xj = fixtures::uniform(rng, 1000);
    auto xi = fixtures::gaussian(rng, 1000);
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] += 2.0 * xj[i] + 3.0;
    EXPECT_LT(std::fabs(corr(measures::residual(xi, xj), xj)), 1e-8);
}

TEST(Residual, ConstantRegressorIsRejected) {
    const std::vector<double> xi{1, 2, 3}, xj{2, 2, 2};
    EXPECT_THROW(measures::residual(xi, xj), Error);
}

TEST(Entropy, Constants) {
    EXPECT_DOUBLE_EQ(measures::kEntropyK1, 79.047);
    EXPECT_DOUBLE_EQ(measures::kEntropyK2, 7.4129);
    EXPECT_DOUBLE_EQ(measures::kEntropyGamma, 0.37457);
    EXPECT_DOUBLE_EQ(measures::gaussian_entropy(), 0.5 * (1.0 + std::log(2.0 * std::numbers::pi)));
}

TEST(Entropy, GaussianSampleIsNearGaussianEntropy) {
    Rng rng(17);
    const auto u = fixtures::gaussian(rng, 1000000);
    EXPECT_NEAR(measures::approx_entropy(u), 1.41894, 0.01);
}

TEST(Entropy, NeverExceedsGaussianEntropy) {
    Rng rng(18);
    for (int t = 0; t < 100; ++t) {
        auto u = t % 2 ? fixtures::uniform(rng, 50) : fixtures::gaussian(rng, 50);
        EXPECT_LE(measures::approx_entropy(u), measures::gaussian_entropy());
    }
}

TEST(Entropy, MatchesReference) {
    Rng rng(19);
    for (int t = 0; t < 20; ++t) {
        auto u = fixtures::gaussian(rng, 300);
        for (auto& v : u) v = v * v * v + 4.0;
        EXPECT_NEAR(measures::approx_entropy(u), oracle::entropy(u), 1e-10);
    }
}

TEST(Plr, MatchesReference) {
    Rng rng(20);
    for (int t = 0; t < 50; ++t) {
        const auto x = fixtures::uniform(rng, 400);
        const auto y = noisy_effect(rng, x, rng.uniform(-2.0, 2.0));
        EXPECT_NEAR(measures::plr(x, y), oracle::plr(x, y), 1e-10);
    }
}

TEST(Plr, AntisymmetricAndScaleInvariant) {
    Rng rng(21);
    for (int t = 0; t < 200; ++t) {
        const auto x = fixtures::gaussian(rng, 100);
        const auto y = noisy_effect(rng, x, 0.5);
        const double r = measures::plr(x, y);
        EXPECT_NEAR(r + measures::plr(y, x), 0.0, 1e-9);
        const double a = rng.uniform(0.01, 100.0), b = rng.uniform(0.01, 100.0);
        auto xs = x, ys = y;
        for (auto& v : xs) v *= a;
        for (auto& v : ys) v *= b;
        EXPECT_NEAR(measures::plr(xs, ys), r, 1e-9);
    }
}

TEST(Plr, DirectionOfUniformLinearPair) {
    int positive = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto x = fixtures::uniform(rng, 10000);
        positive += measures::plr(x, noisy_effect(rng, x, 0.8)) > 0.0;
    }
    EXPECT_GE(positive, 19);
}

TEST(Plr, IndependentPairsCenterOnZero) {
    std::vector<double> r;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed + 1000);
        const auto x = fixtures::uniform(rng, 2000);
        const auto y = fixtures::uniform(rng, 2000);
        r.push_back(measures::plr(x, y));
    }
    const double m = oracle::mean(r);
    const double se = std::sqrt(oracle::pvar(r) * 100.0 / 99.0 / 100.0);
    EXPECT_LT(std::fabs(m), 3.0 * se);
}

TEST(Plr, DegenerateInputs) {
    const std::vector<double> c{1, 1, 1, 1}, x{1, 2, 3, 4}, y{2, 4, 6, 8};
    try {
        measures::plr(c, x);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroVariance);
    }
    try {
        measures::plr(x, y);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateCorrelation);
    }
}

TEST(PlrMatrix, AntisymmetricWithZeroDiagonal) {
    Rng rng(22);
    const auto m = measures::plr_matrix(
        Matrix::from_columns({fixtures::uniform(rng, 300), fixtures::uniform(rng, 300), fixtures::gaussian(rng, 300)}));
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(m(i, i), 0.0);
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m(i, j), -m(j, i));
    }
}

TEST(PlrMatrix, PermutingColumnsPermutesEntries) {
    Rng rng(23);
    std::vector<std::vector<double>> cols;
    for (int c = 0; c < 4; ++c) cols.push_back(fixtures::uniform(rng, 300));
    for (std::size_t i = 1; i < 4; ++i)
        for (std::size_t r = 0; r < 300; ++r) cols[i][r] += 0.7 * cols[i - 1][r];
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    std::vector<std::vector<double>> permuted;
    for (auto k : perm) permuted.push_back(cols[k]);
    const auto a = measures::plr_matrix(Matrix::from_columns(cols));
    const auto b = measures::plr_matrix(Matrix::from_columns(permuted));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(b(i, j), a(perm[i], perm[j]), 1e-12);
}

TEST(StepCost, SingleNegativeEntry) {
    PlrMatrix m(2);
    m.set(0, 1, -0.3);
    EXPECT_NEAR(measures::plr_step_cost(m, 0), 0.09, 1e-15);
    EXPECT_EQ(measures::plr_step_cost(m, 1), 0.0);
}

TEST(StepCost, AllPositiveGivesZero) {
    PlrMatrix m(4);
    for (std::size_t j = 1; j < 4; ++j) m.set(0, j, 0.1 * static_cast<double>(j));
    EXPECT_EQ(measures::plr_step_cost(m, 0), 0.0);
}

TEST(StepCost, InvariantToOrderOfOthers) {
    PlrMatrix a(4), b(4);
    const double v[] = {-0.2, 0.5, -0.7};
    a.set(0, 1, v[0]);
    a.set(0, 2, v[1]);
    a.set(0, 3, v[2]);
    b.set(0, 1, v[2]);
    b.set(0, 2, v[0]);
    b.set(0, 3, v[1]);
    EXPECT_DOUBLE_EQ(measures::plr_step_cost(a, 0), measures::plr_step_cost(b, 0));
    EXPECT_NEAR(measures::plr_step_cost(a, 0), (0.04 + 0.49) / 3.0, 1e-15);
}

TEST(StepCost, MatchesReferenceAndIsNonnegative) {
    Rng rng(24);
    for (int t = 0; t < 20; ++t) {
        const auto [data, truth] = fixtures::random_sem(5, 300, rng.next_u64());
        const auto state = initial_state(data);
        const auto cols = fixtures::columns(data);
        for (Index c = 0; c < 5; ++c) {
            const double got = measures::plr_step_cost(c, state);
            EXPECT_GE(got, 0.0);
            EXPECT_NEAR(got, oracle::step_cost(cols, c), 1e-10);
        }
    }
}

TEST(Digamma, AgreesWithSeriesAndBoost) {
    EXPECT_NEAR(measures::digamma(1.0), -0.5772156649, 1e-10);
    for (int n = 1; n <= 200; ++n) {
        EXPECT_NEAR(measures::digamma(n), oracle::digamma_ref(n), 1e-12);
    }
    for (double x : {0.1, 0.5, 2.5, 7.25, 123.456, 1e5})
        EXPECT_NEAR(measures::digamma(x), boost::math::digamma(x), 1e-12 * std::max(1.0, std::fabs(boost::math::digamma(x))));
}

TEST(KnnMi, MatchesBruteForceReference) {
    Rng rng(25);
    for (int t = 0; t < 5; ++t) {
        const auto a = fixtures::uniform(rng, 80), b = fixtures::gaussian(rng, 80);
        auto y = fixtures::uniform(rng, 80);
        for (std::size_t i = 0; i < 80; ++i) y[i] += 0.5 * a[i];
        for (std::size_t k : {1, 3, 9}) {
            EXPECT_NEAR(measures::knn_mi(Matrix::from_columns({a, b}), y, k), oracle::knn_mi({a, b}, y, k), 1e-10);
        }
    }
}

TEST(KnnMi, IndependentInputsNearZero) {
    Rng rng(26);
    const auto x = fixtures::uniform(rng, 5000), y = fixtures::uniform(rng, 5000);
    EXPECT_NEAR(measures::knn_mi(Matrix::from_columns({x}), y, measures::knn_k(KRule::SqrtN, 5000)), 0.0, 0.05);
}

TEST(KnnMi, IdenticalInputsLarge) {
    Rng rng(27);
    const auto x = fixtures::uniform(rng, 5000);
    EXPECT_GE(measures::knn_mi(Matrix::from_columns({x}), x, 5), 1.0);
}

TEST(KnnMi, InvalidK) {
    const std::vector<double> y{1, 2, 3, 4};
    const auto x = Matrix::from_columns({{4, 2, 3, 1}});
    for (std::size_t k : {0, 4}) {
        try {
            measures::knn_mi(x, y, k);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidK);
        }
    }
}

TEST(KnnMi, KRules) {
    EXPECT_EQ(measures::knn_k(KRule::SqrtN, 1000), 32U);
    EXPECT_EQ(measures::knn_k(KRule::Fraction5, 1000), 50U);
    EXPECT_EQ(measures::knn_k(KRule::Fraction10, 1000), 100U);
    EXPECT_EQ(parse_k_rule(to_string(KRule::Fraction5)), KRule::Fraction5);
}

TEST(KnnStepCost, NonnegativeAndZeroForLastFeature) {
    Rng rng(28);
    const auto [data, truth] = fixtures::random_sem(3, 400, 99);
    MeasureConfig cfg{MeasureKind::KnnMi, KRule::SqrtN};
    auto state = initial_state(data);
    for (Index c = 0; c < 3; ++c) EXPECT_GE(measures::knn_step_cost(c, state, cfg), 0.0);
    state = residualize(residualize(state, 0), 1);
    EXPECT_EQ(measures::knn_step_cost(2, state, cfg), 0.0);
}

TEST(KnnStepCost, ChainCostsMatchJointDecomposition) {
    // Along the true order of independent disturbances the summed step costs
    // and a chain-rule estimate of the mutual information between the
    // disturbances are both close to zero.
    double summed = 0.0, joint = 0.0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(static_cast<std::uint64_t>(500 + s));
        const std::size_t n = 1500;
        const auto e1 = fixtures::uniform(rng, n), e2 = fixtures::uniform(rng, n), e3 = fixtures::uniform(rng, n);
        std::vector<double> x2(n), x3(n);
        for (std::size_t i = 0; i < n; ++i) {
            x2[i] = e1[i] + e2[i];
            x3[i] = x2[i] + e3[i];
        }
        const auto data = fixtures::dataset({e1, x2, x3});
        MeasureConfig cfg{MeasureKind::KnnMi, KRule::SqrtN};
        auto state = initial_state(data);
        const std::size_t k = measures::knn_k(KRule::SqrtN, n);
        summed += measures::knn_step_cost(0, state, cfg);
        state = residualize(state, 0);
        summed += measures::knn_step_cost(1, state, cfg);
        joint += measures::knn_mi(Matrix::from_columns({e2, e3}), e1, k) + measures::knn_mi(Matrix::from_columns({e3}), e2, k);
    }
    EXPECT_NEAR(summed / seeds, joint / seeds, 0.05);
    EXPECT_LT(summed / seeds, 0.05);
}

TEST(Residualize, DropsChosenAndOrthogonalizes) {
    const auto [data, truth] = fixtures::random_sem(4, 500, 7);
    const auto s0 = initial_state(data);
    const auto s1 = residualize(s0, 2);
    EXPECT_EQ(s1.columns, (std::vector<Index>{0, 1, 3}));
    const auto chosen = s0.residuals.column(2);
    for (std::size_t c = 0; c < 3; ++c) {
        const auto col = s1.residuals.column(c);
        EXPECT_LT(std::fabs(corr(std::vector<double>(col.begin(), col.end()), chosen)), 1e-8);
    }
    EXPECT_EQ(residualize(residualize(s0, 1), 3).remaining, residualize(residualize(s0, 3), 1).remaining);
}

TEST(Residualize, ChainResidualIsUncorrelatedWithRegressors) {
    Rng rng(29);
    const std::size_t n = 100000;
    const auto x1 = fixtures::uniform(rng, n);
    auto x2 = fixtures::uniform(rng, n), x3 = fixtures::uniform(rng, n);
    for (std::size_t i = 0; i < n; ++i) {
        x2[i] += x1[i];
        x3[i] += x2[i];
    }
    const auto s = residualize(residualize(initial_state(fixtures::dataset({x1, x2, x3})), 0), 1);
    const auto r3 = s.residuals.column(0);
    const std::vector<double> r(r3.begin(), r3.end());
    EXPECT_LT(std::fabs(corr(r, x1)), 1e-8);
    EXPECT_LT(std::fabs(corr(r, x2)), 1e-8);
}
