#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lspp/measures.hpp"
#include "lspp/search.hpp"

namespace lspp {

enum class PathMode { Exhaustive, Sampled };

std::string_view to_string(PathMode mode);
PathMode parse_path_mode(std::string_view s);

struct PathDistribution {
    std::vector<double> lengths;
    PathMode mode = PathMode::Exhaustive;
    std::size_t sample_size = 0;
};

inline constexpr std::size_t kDefaultEnumerationCap = 8;
inline constexpr int kFirstMoment = 3;
inline constexpr int kLastMoment = 30;
inline constexpr std::size_t kMomentCount = kLastMoment - kFirstMoment + 1;
inline constexpr double kDefaultLogEpsilon = 1e-12;

struct MomentFeatures {
    std::vector<double> moments;  // orders 3..30
    double log_epsilon = kDefaultLogEpsilon;
};

// Total cost of every ordering, in lexicographic order of the permutations.
// Each lattice edge is evaluated once.
PathDistribution enumerate_paths(const Dataset& data, const MeasureConfig& config,
                                 std::size_t cap = kDefaultEnumerationCap);
PathDistribution enumerate_paths(OrderingLattice& lattice, std::size_t cap = kDefaultEnumerationCap);

// Costs of n orderings drawn uniformly with replacement.
PathDistribution sample_paths(const Dataset& data, const MeasureConfig& config, std::size_t n, std::uint64_t seed);
PathDistribution sample_paths(OrderingLattice& lattice, std::size_t n, std::uint64_t seed);

// Standardized moments of x for orders first..last (z-scored first with the
// population standard deviation). Throws DegenerateDistribution when x has
// zero variance.
std::vector<double> standardized_moments(std::span<const double> x, int first = kFirstMoment,
                                         int last = kLastMoment);

// Standardized moments of log(length + eps).
MomentFeatures moment_features(const PathDistribution& dist, double log_epsilon = kDefaultLogEpsilon);

}  // namespace lspp
