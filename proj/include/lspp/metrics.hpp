#pragma once

#include <span>
#include <vector>

#include "lspp/adjacency.hpp"
#include "lspp/model.hpp"

namespace lspp {

struct OrderingError {
    double e_o = 0.0;
    std::size_t wrong_pairs = 0;
    std::size_t total_pairs = 0;
};

struct EdgeReport {
    std::size_t required_captured = 0;
    std::size_t required_total = 0;
    std::size_t forbidden_captured = 0;
    std::size_t forbidden_total = 0;
};

// Fraction of unordered pairs whose relative order differs.
OrderingError ordering_error(std::span<const Index> estimated, std::span<const Index> truth);
OrderingError ordering_error(const CausalOrder& estimated, std::span<const Index> truth);

EdgeReport edge_report(const WeightedDag& dag, const EdgeConstraints& constraints);

// Every edge from a later tier into an earlier one is forbidden.
EdgeConstraints tiers_to_forbidden(const std::vector<std::vector<Index>>& tiers);

}  // namespace lspp
