#pragma once

#include <cstdint>
#include <vector>

#include "lspp/model.hpp"
#include "lspp/rng.hpp"
#include "lspp/simgen.hpp"
#include "oracles.hpp"

namespace fixtures {

inline lspp::Dataset dataset(const std::vector<std::vector<double>>& cols) {
    return lspp::Dataset(lspp::Matrix::from_columns(cols), lspp::Dataset::default_names(cols.size()));
}

inline oracle::Cols columns(const lspp::Dataset& d) {
    oracle::Cols out;
    for (std::size_t c = 0; c < d.n_features(); ++c) {
        const auto col = d.column(c);
        out.emplace_back(col.begin(), col.end());
    }
    return out;
}

inline std::vector<double> uniform(lspp::Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

inline std::vector<double> gaussian(lspp::Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    return v;
}

// Simulator draw with randomized benchmark parameters.
inline std::pair<lspp::Dataset, lspp::GroundTruth> random_sem(std::size_t p, std::size_t n, std::uint64_t seed,
                                                              bool confounders = false) {
    return lspp::generate(lspp::sample_benchmark_params(p, n, confounders, seed));
}

}  // namespace fixtures
