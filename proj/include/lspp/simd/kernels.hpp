#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2+FMA version chosen at runtime. The two are tested for
// equivalence within floating-point reassociation error.

#include <cstddef>
#include <string_view>

namespace lspp::simd {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend backend);

// Partial sums for the entropy approximation, over w_i = ca*a_i + cb*b_i + c0.
struct EntropySums {
    double log_cosh = 0.0;  // sum of log cosh(w_i)
    double gauss = 0.0;     // sum of w_i * exp(-w_i^2 / 2)
};

struct KernelTable {
    Backend backend;

    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum of (x_i - mx) * (y_i - my)
    double (*dot_dev)(const double* x, double mx, const double* y, double my, std::size_t n);
    // sum of (x_i - shift)^2
    double (*sum_sq_dev)(const double* x, double shift, std::size_t n);
    // out_i = x_i - beta * y_i (out may alias x)
    void (*sub_scaled)(double* out, const double* x, const double* y, double beta, std::size_t n);
    // b may be null, in which case cb is ignored
    EntropySums (*entropy_sums)(const double* a, const double* b, double ca, double cb, double c0,
                                std::size_t n);
    // dist_i = max(dist_i, |col_i - q|)
    void (*chebyshev_update)(double* dist, const double* col, double q, std::size_t n);
    // number of i with dist_i < radius
    std::size_t (*count_below)(const double* dist, double radius, std::size_t n);
    // sum of (x_i - y_i)^2
    double (*squared_distance)(const double* x, const double* y, std::size_t n);
    // sum of x_i^k for k = 1..max_power, written to out[0..max_power-1]
    void (*power_sums)(const double* x, std::size_t n, int max_power, double* out);
};

const KernelTable& scalar_kernels();
bool backend_available(Backend backend);
const KernelTable& kernels_for(Backend backend);

// Active table. Defaults to the best available backend; the LSPP_SIMD
// environment variable ("scalar" or "avx2") overrides the first selection.
const KernelTable& kernels();
Backend active_backend();
void set_backend(Backend backend);

}  // namespace lspp::simd
