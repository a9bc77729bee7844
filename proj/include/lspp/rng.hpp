#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace lspp {

// Seeded generator with platform-independent distributions. The standard
// library's distribution objects are implementation-defined, so every draw
// here is derived directly from mt19937_64 output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    // [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // (0, 1], safe for log
    double uniform_open0() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    // uniform integer in [0, n) by rejection, n > 0
    std::uint64_t below(std::uint64_t n);
    // Box-Muller, one output per pair of uniforms
    double normal();

    template <typename It>
    void shuffle(It first, It last) {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            const auto j = below(i);
            std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1), first + static_cast<std::ptrdiff_t>(j));
        }
    }

private:
    std::mt19937_64 engine_;
};

// Stable 64-bit mixing of a list of integers (splitmix64 finalizer chained).
std::uint64_t hash_combine(std::initializer_list<std::uint64_t> parts);
std::uint64_t hash_double(double v);

}  // namespace lspp
