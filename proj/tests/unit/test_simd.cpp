#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lspp/rng.hpp"
#include "lspp/simd/kernels.hpp"

using namespace lspp;
using simd::Backend;

namespace {

class SimdEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        if (!simd::backend_available(Backend::Avx2)) GTEST_SKIP() << "AVX2 not available on this machine";
    }
    const simd::KernelTable& ref = simd::kernels_for(Backend::Scalar);
    const simd::KernelTable& vec = simd::kernels_for(Backend::Avx2);
};

std::vector<double> draw(Rng& rng, std::size_t n, double scale = 3.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = scale * rng.normal();
    return v;
}

// Lengths that exercise empty input, tails and several full vector blocks.
const std::vector<std::size_t> kSizes{0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 67, 1000, 1003};

void expect_close(double a, double b, double rel) {
    EXPECT_NEAR(a, b, rel * std::max(1.0, std::fabs(b)));
}

}  // namespace

TEST(Simd, ScalarTableIsAlwaysAvailable) {
    EXPECT_TRUE(simd::backend_available(Backend::Scalar));
    EXPECT_EQ(simd::scalar_kernels().backend, Backend::Scalar);
}

TEST(Simd, SetBackendSwitchesActiveTable) {
    const auto before = simd::active_backend();
    simd::set_backend(Backend::Scalar);
    EXPECT_EQ(simd::kernels().backend, Backend::Scalar);
    simd::set_backend(before);
    EXPECT_EQ(simd::active_backend(), before);
}

TEST_F(SimdEquivalence, Reductions) {
    Rng rng(1);
    for (std::size_t n : kSizes) {
        const auto x = draw(rng, n), y = draw(rng, n);
        expect_close(vec.sum(x.data(), n), ref.sum(x.data(), n), 1e-12);
        expect_close(vec.dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n), 1e-12);
        expect_close(vec.dot_dev(x.data(), 0.3, y.data(), -0.7, n), ref.dot_dev(x.data(), 0.3, y.data(), -0.7, n),
                     1e-12);
        expect_close(vec.sum_sq_dev(x.data(), 0.4, n), ref.sum_sq_dev(x.data(), 0.4, n), 1e-12);
        expect_close(vec.squared_distance(x.data(), y.data(), n), ref.squared_distance(x.data(), y.data(), n), 1e-12);
    }
}

TEST_F(SimdEquivalence, SubScaled) {
    Rng rng(2);
    for (std::size_t n : kSizes) {
        const auto x = draw(rng, n), y = draw(rng, n);
        std::vector<double> a(n), b(n);
        vec.sub_scaled(a.data(), x.data(), y.data(), 0.37, n);
        ref.sub_scaled(b.data(), x.data(), y.data(), 0.37, n);
        for (std::size_t i = 0; i < n; ++i) expect_close(a[i], b[i], 1e-14);
        auto in_place = x;
        vec.sub_scaled(in_place.data(), in_place.data(), y.data(), 0.37, n);
        for (std::size_t i = 0; i < n; ++i) expect_close(in_place[i], b[i], 1e-14);
    }
}

TEST_F(SimdEquivalence, EntropySums) {
    Rng rng(3);
    for (std::size_t n : kSizes) {
        const auto a = draw(rng, n, 1.0), b = draw(rng, n, 1.0);
        const auto v2 = vec.entropy_sums(a.data(), b.data(), 0.8, -0.3, 0.1, n);
        const auto r2 = ref.entropy_sums(a.data(), b.data(), 0.8, -0.3, 0.1, n);
        expect_close(v2.log_cosh, r2.log_cosh, 1e-12);
        expect_close(v2.gauss, r2.gauss, 1e-12);
        const auto v1 = vec.entropy_sums(a.data(), nullptr, 1.3, 0.0, -0.2, n);
        const auto r1 = ref.entropy_sums(a.data(), nullptr, 1.3, 0.0, -0.2, n);
        expect_close(v1.log_cosh, r1.log_cosh, 1e-12);
        expect_close(v1.gauss, r1.gauss, 1e-12);
    }
}

TEST_F(SimdEquivalence, EntropySumsHandleLargeArguments) {
    // log cosh must not overflow for heavy tails
    std::vector<double> a{-900.0, -40.0, 0.0, 1e-8, 40.0, 900.0, 3.0, -3.0, 710.0};
    const auto v = vec.entropy_sums(a.data(), nullptr, 1.0, 0.0, 0.0, a.size());
    const auto r = ref.entropy_sums(a.data(), nullptr, 1.0, 0.0, 0.0, a.size());
    EXPECT_TRUE(std::isfinite(r.log_cosh));
    expect_close(v.log_cosh, r.log_cosh, 1e-12);
    expect_close(v.gauss, r.gauss, 1e-12);
}

TEST_F(SimdEquivalence, NeighbourKernelsAreExact) {
    Rng rng(4);
    for (std::size_t n : kSizes) {
        const auto col = draw(rng, n);
        auto d1 = draw(rng, n, 0.5), d2 = d1;
        for (auto& v : d1) v = std::fabs(v);
        d2 = d1;
        vec.chebyshev_update(d1.data(), col.data(), 0.2, n);
        ref.chebyshev_update(d2.data(), col.data(), 0.2, n);
        EXPECT_EQ(d1, d2);
        for (double r : {0.0, 0.5, 1.0, 2.5}) EXPECT_EQ(vec.count_below(d1.data(), r, n), ref.count_below(d2.data(), r, n));
    }
}

TEST_F(SimdEquivalence, PowerSums) {
    Rng rng(5);
    for (std::size_t n : kSizes) {
        const auto x = draw(rng, n, 1.0);
        std::vector<double> a(30), b(30);
        vec.power_sums(x.data(), n, 30, a.data());
        ref.power_sums(x.data(), n, 30, b.data());
        for (int k = 0; k < 30; ++k) expect_close(a[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(k)], 1e-11);
    }
}

TEST(SimdScalar, MatchesDefinitions) {
    const auto& k = simd::scalar_kernels();
    const std::vector<double> x{1, 2, 3, 4}, y{4, 3, 2, 1};
    EXPECT_DOUBLE_EQ(k.sum(x.data(), 4), 10.0);
    EXPECT_DOUBLE_EQ(k.dot(x.data(), y.data(), 4), 20.0);
    EXPECT_DOUBLE_EQ(k.sum_sq_dev(x.data(), 2.5, 4), 5.0);
    EXPECT_DOUBLE_EQ(k.squared_distance(x.data(), y.data(), 4), 20.0);
    std::vector<double> p(3);
    k.power_sums(x.data(), 4, 3, p.data());
    EXPECT_DOUBLE_EQ(p[0], 10.0);
    EXPECT_DOUBLE_EQ(p[1], 30.0);
    EXPECT_DOUBLE_EQ(p[2], 100.0);
    std::vector<double> d{0.1, 0.1, 0.1, 0.1};
    k.chebyshev_update(d.data(), x.data(), 2.0, 4);
    EXPECT_EQ(d, (std::vector<double>{1.0, 0.1, 1.0, 2.0}));
    EXPECT_EQ(k.count_below(d.data(), 1.0, 4), 1U);
}
