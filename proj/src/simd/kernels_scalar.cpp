#include <algorithm>
#include <cmath>
#include <numbers>

#include "lspp/simd/kernels.hpp"

namespace lspp::simd {
namespace {

double sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double dot_dev(const double* x, double mx, const double* y, double my, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (x[i] - mx) * (y[i] - my);
    return s;
}

double sum_sq_dev(const double* x, double shift, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - shift;
        s += d * d;
    }
    return s;
}

void sub_scaled(double* out, const double* x, const double* y, double beta, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - beta * y[i];
}

// log cosh(w) = |w| + log1p(exp(-2|w|)) - log 2, stable for any |w|.
inline double log_cosh(double w) {
    const double a = std::fabs(w);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

EntropySums entropy_sums(const double* a, const double* b, double ca, double cb, double c0,
                         std::size_t n) {
    EntropySums s;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = b ? ca * a[i] + cb * b[i] + c0 : ca * a[i] + c0;
        s.log_cosh += log_cosh(w);
        s.gauss += w * std::exp(-0.5 * w * w);
    }
    return s;
}

void chebyshev_update(double* dist, const double* col, double q, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dist[i] = std::max(dist[i], std::fabs(col[i] - q));
}

std::size_t count_below(const double* dist, double radius, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += dist[i] < radius ? 1 : 0;
    return c;
}

double squared_distance(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

void power_sums(const double* x, std::size_t n, int max_power, double* out) {
    std::fill(out, out + max_power, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double p = 1.0;
        for (int k = 0; k < max_power; ++k) {
            p *= x[i];
            out[k] += p;
        }
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        Backend::Scalar, sum,           dot,         dot_dev,         sum_sq_dev,       sub_scaled, entropy_sums,
        chebyshev_update, count_below, squared_distance, power_sums,
    };
    return table;
}

}  // namespace lspp::simd
