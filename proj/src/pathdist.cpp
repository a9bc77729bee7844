#include "lspp/pathdist.hpp"

#include <cmath>
#include <numeric>

#include "lspp/detail/stats.hpp"
#include "lspp/rng.hpp"
#include "lspp/simd/kernels.hpp"

namespace lspp {

namespace {

void check_size(std::size_t p) {
    require(p >= 1 && p <= FeatureSet::kMaxFeatures, ErrorCode::TooManyFeatures,
            "feature count out of range for path statistics");
}

// Per-node edge weights, indexed by remaining-set bits then feature.
class CostTable {
public:
    explicit CostTable(OrderingLattice& lattice) : lattice_(lattice), p_(lattice.n_features()) {}

    const std::vector<double>& at(FeatureSet s) {
        auto it = table_.find(s);
        if (it != table_.end()) return it->second;
        std::vector<double> row(p_, 0.0);
        const auto cands = s.indices();
        const auto costs = lattice_.step_costs(s, cands);
        for (std::size_t i = 0; i < cands.size(); ++i) row[cands[i]] = costs[i];
        return table_.emplace(s, std::move(row)).first->second;
    }

private:
    OrderingLattice& lattice_;
    std::size_t p_;
    std::unordered_map<FeatureSet, std::vector<double>, FeatureSetHash> table_;
};

void enumerate(CostTable& table, FeatureSet s, double acc, std::vector<double>& out) {
    if (s.empty()) {
        out.push_back(acc);
        return;
    }
    const auto& row = table.at(s);
    for (Index c : s.indices()) enumerate(table, s.without(c), acc + row[c], out);
}

}  // namespace

std::string_view to_string(PathMode mode) { return mode == PathMode::Exhaustive ? "exhaustive" : "sampled"; }

PathMode parse_path_mode(std::string_view s) {
    if (s == "exhaustive") return PathMode::Exhaustive;
    if (s == "sampled" || s == "sample") return PathMode::Sampled;
    fail(ErrorCode::InvalidArgument, "unknown path mode '" + std::string(s) + "'");
}

PathDistribution enumerate_paths(const Dataset& data, const MeasureConfig& config, std::size_t cap) {
    if (data.n_features() > cap)
        fail(ErrorCode::TooManyFeatures, "exhaustive enumeration is capped at p = " + std::to_string(cap) +
                                             ", got p = " + std::to_string(data.n_features()));
    OrderingLattice lattice(data, config);
    return enumerate_paths(lattice, cap);
}

PathDistribution enumerate_paths(OrderingLattice& lattice, std::size_t cap) {
    const std::size_t p = lattice.n_features();
    check_size(p);
    if (p > cap)
        fail(ErrorCode::TooManyFeatures, "exhaustive enumeration is capped at p = " + std::to_string(cap) +
                                             ", got p = " + std::to_string(p));
    PathDistribution dist;
    dist.mode = PathMode::Exhaustive;
    std::size_t count = 1;
    for (std::size_t i = 2; i <= p; ++i) count *= i;
    dist.lengths.reserve(count);
    CostTable table(lattice);
    enumerate(table, FeatureSet::full(p), 0.0, dist.lengths);
    dist.sample_size = dist.lengths.size();
    return dist;
}

PathDistribution sample_paths(const Dataset& data, const MeasureConfig& config, std::size_t n, std::uint64_t seed) {
    OrderingLattice lattice(data, config);
    return sample_paths(lattice, n, seed);
}

PathDistribution sample_paths(OrderingLattice& lattice, std::size_t n, std::uint64_t seed) {
    require(n >= 1, ErrorCode::InvalidArgument, "sample size must be at least 1");
    const std::size_t p = lattice.n_features();
    check_size(p);
    Rng rng(seed);
    CostTable table(lattice);
    PathDistribution dist;
    dist.mode = PathMode::Sampled;
    dist.sample_size = n;
    dist.lengths.reserve(n);
    std::vector<Index> perm(p);
    for (std::size_t t = 0; t < n; ++t) {
        std::iota(perm.begin(), perm.end(), Index{0});
        rng.shuffle(perm.begin(), perm.end());
        FeatureSet s = FeatureSet::full(p);
        double acc = 0.0;
        for (Index c : perm) {
            acc += table.at(s)[c];
            s = s.without(c);
        }
        dist.lengths.push_back(acc);
    }
    return dist;
}

std::vector<double> standardized_moments(std::span<const double> x, int first, int last) {
    require(first >= 1 && last >= first, ErrorCode::InvalidArgument, "invalid moment range");
    require(x.size() >= 2, ErrorCode::DegenerateDistribution, "need at least 2 values");
    const auto mv = detail::mean_var(x);
    if (!(mv.var > 0.0) || detail::negligible_variance(mv.var, x))
        fail(ErrorCode::DegenerateDistribution, "all values are equal");
    const double inv_sd = 1.0 / std::sqrt(mv.var);
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - mv.mean) * inv_sd;
    std::vector<double> sums(static_cast<std::size_t>(last));
    simd::kernels().power_sums(z.data(), z.size(), last, sums.data());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    const double n = static_cast<double>(x.size());
    for (int k = first; k <= last; ++k) out.push_back(sums[static_cast<std::size_t>(k - 1)] / n);
    return out;
}

MomentFeatures moment_features(const PathDistribution& dist, double log_epsilon) {
    require(log_epsilon >= 0.0, ErrorCode::InvalidArgument, "log offset must be nonnegative");
    std::vector<double> x(dist.lengths.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = dist.lengths[i] + log_epsilon;
        require(v > 0.0, ErrorCode::DegenerateDistribution, "path length plus offset must be positive");
        x[i] = std::log(v);
    }
    MomentFeatures f;
    f.log_epsilon = log_epsilon;
    f.moments = standardized_moments(x);
    for (double m : f.moments)
        require(std::isfinite(m), ErrorCode::DegenerateDistribution, "non-finite standardized moment");
    return f;
}

}  // namespace lspp
