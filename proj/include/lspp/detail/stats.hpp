#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "lspp/simd/kernels.hpp"

namespace lspp::detail {

// A variance this small relative to the data's magnitude is rounding noise
// around a constant.
inline bool negligible_variance(double var, std::span<const double> x) {
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::fabs(v));
    const double floor = 1e-13 * scale;
    return !(var > floor * floor) || var == 0.0;
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // population (1/N)
};

inline MeanVar mean_var(std::span<const double> x) {
    const auto& k = simd::kernels();
    const double n = static_cast<double>(x.size());
    MeanVar mv;
    mv.mean = k.sum(x.data(), x.size()) / n;
    mv.var = k.sum_sq_dev(x.data(), mv.mean, x.size()) / n;
    return mv;
}

}  // namespace lspp::detail
