#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lspp/model.hpp"
#include "lspp/rng.hpp"

namespace lspp {

// Non-Gaussian shapes used for noise and latent confounders. Every draw is
// centered and rescaled afterwards, so only the shape matters.
enum class NoiseFamily {
    Uniform,
    ExponentialRight,
    ExponentialLeft,
    Laplace,
    StudentT3,
    StudentT5,
    MixtureBimodal,
    MixtureScale,
    MixtureSkewRight,
    MixtureSkewLeft,
    ChiSquare1,
    LogNormal,
};

inline constexpr std::size_t kNoiseFamilyCount = 12;

std::string_view to_string(NoiseFamily f);
// Accepts a family name; "mixed" is handled by the caller.
NoiseFamily parse_noise_family(std::string_view s);
bool is_valid_noise_spec(std::string_view s);

// n raw draws of the family (not yet standardized).
std::vector<double> draw_family(NoiseFamily f, std::size_t n, Rng& rng);

// Draws from the family, rescaled to mean 0 and the given sample variance.
std::vector<double> draw_scaled(NoiseFamily f, std::size_t n, double variance, Rng& rng);

// Synthetic LiNGAM data with optional latent confounders. All randomness comes
// from one generator seeded with params.seed, drawn in this order: B entries
// (row-major over i > j in causal order: magnitude, sign, keep), per-variable
// noise (family, variance, samples), per-confounder signals, Lambda columns,
// and finally the column permutation.
std::pair<Dataset, GroundTruth> generate(const GenParams& params);

// Benchmark draw of the generator parameters: sparsity ~ U(0,1),
// strength exponent ~ U(1,2), 1..3 confounders when requested,
// confoundedness ~ U(0,1).
GenParams sample_benchmark_params(std::size_t p, std::size_t n, bool with_confounders, std::uint64_t seed);

}  // namespace lspp
