// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "lspp/simd/kernels.hpp"

namespace lspp::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

// exp for x <= 709. Cody-Waite reduction x = n ln2 + r, |r| <= ln2/2, then a
// degree-13 Taylor polynomial. Inputs below -708 are clamped (result ~1e-308).
inline __m256d vexp(__m256d x) {
    x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
    x = _mm256_min_pd(x, _mm256_set1_pd(709.0));
    const __m256d n =
        _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(std::numbers::log2e)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93147180369123816490e-01), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.90821492927058770002e-10), r);

    static constexpr double kInvFact[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
        1.0 / 40320.0,      1.0 / 5040.0,      1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,
        1.0 / 6.0,          0.5,               1.0,              1.0,
    };
    __m256d p = _mm256_set1_pd(kInvFact[0]);
    for (std::size_t k = 1; k < std::size(kInvFact); ++k) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[k]));

    const __m128i ni = _mm256_cvtpd_epi32(n);
    __m256i bits = _mm256_cvtepi32_epi64(ni);
    bits = _mm256_slli_epi64(_mm256_add_epi64(bits, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// log1p(t) for t in [0, 1].
inline __m256d vlog1p_unit(__m256d t) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d y = _mm256_add_pd(one, t);
    // rounding error of 1 + t, carried as a first-order correction
    const __m256d corr = _mm256_div_pd(_mm256_sub_pd(t, _mm256_sub_pd(y, one)), y);

    const __m256d big = _mm256_cmp_pd(y, _mm256_set1_pd(std::numbers::sqrt2), _CMP_GT_OQ);
    y = _mm256_blendv_pd(y, _mm256_mul_pd(y, _mm256_set1_pd(0.5)), big);
    const __m256d k = _mm256_and_pd(big, one);

    const __m256d f = _mm256_sub_pd(y, one);
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
    const __m256d z = _mm256_mul_pd(s, s);
    // 2 atanh(s) = 2 s (1 + z/3 + z^2/5 + ...)
    __m256d p = _mm256_set1_pd(1.0 / 25.0);
    for (int d = 23; d >= 1; d -= 2) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / d));
    const __m256d lg = _mm256_mul_pd(_mm256_add_pd(s, s), p);

    return _mm256_add_pd(_mm256_fmadd_pd(k, _mm256_set1_pd(std::numbers::ln2), lg), corr);
}

inline __m256d vlog_cosh(__m256d w) {
    const __m256d a = vabs(w);
    const __m256d e = vexp(_mm256_mul_pd(_mm256_set1_pd(-2.0), a));
    return _mm256_sub_pd(_mm256_add_pd(a, vlog1p_unit(e)), _mm256_set1_pd(std::numbers::ln2));
}

double sum(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + kLanes));
    }
    for (; i + kLanes <= n; i += kLanes) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot(const double* x, const double* y, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + kLanes), _mm256_loadu_pd(y + i + kLanes), a1);
    }
    for (; i + kLanes <= n; i += kLanes) a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double dot_dev(const double* x, double mx, const double* y, double my, std::size_t n) {
    const __m256d vmx = _mm256_set1_pd(mx), vmy = _mm256_set1_pd(my);
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        a0 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vmx), _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy), a0);
        a1 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i + kLanes), vmx),
                             _mm256_sub_pd(_mm256_loadu_pd(y + i + kLanes), vmy), a1);
    }
    for (; i + kLanes <= n; i += kLanes)
        a0 = _mm256_fmadd_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vmx), _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy), a0);
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += (x[i] - mx) * (y[i] - my);
    return s;
}

double sum_sq_dev(const double* x, double shift, std::size_t n) {
    const __m256d c = _mm256_set1_pd(shift);
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + kLanes), c);
        a0 = _mm256_fmadd_pd(d0, d0, a0);
        a1 = _mm256_fmadd_pd(d1, d1, a1);
    }
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
        a0 = _mm256_fmadd_pd(d, d, a0);
    }
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) {
        const double d = x[i] - shift;
        s += d * d;
    }
    return s;
}

void sub_scaled(double* out, const double* x, const double* y, double beta, std::size_t n) {
    const __m256d b = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes)
        _mm256_storeu_pd(out + i, _mm256_fnmadd_pd(b, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = x[i] - beta * y[i];
}

EntropySums entropy_sums(const double* a, const double* b, double ca, double cb, double c0,
                         std::size_t n) {
    const __m256d vca = _mm256_set1_pd(ca);
    const __m256d vcb = _mm256_set1_pd(cb);
    const __m256d vc0 = _mm256_set1_pd(c0);
    const __m256d mhalf = _mm256_set1_pd(-0.5);
    __m256d lc = _mm256_setzero_pd(), gs = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        __m256d w = _mm256_fmadd_pd(vca, _mm256_loadu_pd(a + i), vc0);
        if (b) w = _mm256_fmadd_pd(vcb, _mm256_loadu_pd(b + i), w);
        lc = _mm256_add_pd(lc, vlog_cosh(w));
        gs = _mm256_fmadd_pd(w, vexp(_mm256_mul_pd(mhalf, _mm256_mul_pd(w, w))), gs);
    }
    EntropySums s{hsum(lc), hsum(gs)};
    for (; i < n; ++i) {
        const double w = b ? ca * a[i] + cb * b[i] + c0 : ca * a[i] + c0;
        const double aw = std::fabs(w);
        s.log_cosh += aw + std::log1p(std::exp(-2.0 * aw)) - std::numbers::ln2;
        s.gauss += w * std::exp(-0.5 * w * w);
    }
    return s;
}

void chebyshev_update(double* dist, const double* col, double q, std::size_t n) {
    const __m256d vq = _mm256_set1_pd(q);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(col + i), vq));
        _mm256_storeu_pd(dist + i, _mm256_max_pd(_mm256_loadu_pd(dist + i), d));
    }
    for (; i < n; ++i) dist[i] = std::max(dist[i], std::fabs(col[i] - q));
}

std::size_t count_below(const double* dist, double radius, std::size_t n) {
    const __m256d r = _mm256_set1_pd(radius);
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(dist + i), r, _CMP_LT_OQ));
        c += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(mask)));
    }
    for (; i < n; ++i) c += dist[i] < radius ? 1 : 0;
    return c;
}

double squared_distance(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

void power_sums(const double* x, std::size_t n, int max_power, double* out) {
    std::fill(out, out + max_power, 0.0);
    constexpr int kChunk = 32;
    // up to 32 powers accumulated per pass
    for (int k0 = 0; k0 < max_power; k0 += kChunk) {
        const int kn = std::min(kChunk, max_power - k0);
        __m256d acc[kChunk];
        for (int k = 0; k < kn; ++k) acc[k] = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + kLanes <= n; i += kLanes) {
            const __m256d v = _mm256_loadu_pd(x + i);
            __m256d p = _mm256_set1_pd(1.0);
            for (int k = 0; k < k0; ++k) p = _mm256_mul_pd(p, v);
            for (int k = 0; k < kn; ++k) {
                p = _mm256_mul_pd(p, v);
                acc[k] = _mm256_add_pd(acc[k], p);
            }
        }
        for (int k = 0; k < kn; ++k) out[k0 + k] = hsum(acc[k]);
        for (std::size_t j = i; j < n; ++j) {
            double p = 1.0;
            for (int k = 0; k < k0; ++k) p *= x[j];
            for (int k = 0; k < kn; ++k) {
                p *= x[j];
                out[k0 + k] += p;
            }
        }
    }
}

}  // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{
        Backend::Avx2,    sum,         dot,         dot_dev,         sum_sq_dev,       sub_scaled, entropy_sums,
        chebyshev_update, count_below, squared_distance, power_sums,
    };
    return table;
}

}  // namespace lspp::simd
