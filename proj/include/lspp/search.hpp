#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "lspp/measures.hpp"
#include "lspp/model.hpp"

namespace lspp {

struct SearchResult {
    CausalOrder order;
    std::size_t edges_evaluated = 0;
    std::size_t states_expanded = 0;
    std::chrono::nanoseconds wall_time{0};
};

// False iff some (a, b) in the prior has a still remaining while b has
// already been placed.
bool is_state_allowed(FeatureSet remaining, const PriorKnowledge& prior);

// The subset lattice of orderings for one dataset. Residuals of a node depend
// only on which features were removed; they are computed canonically by
// removing features in ascending index order and memoized per node. Edge
// weights are computed on first request and memoized as well.
class OrderingLattice {
public:
    OrderingLattice(const Dataset& data, MeasureConfig config);

    std::size_t n_features() const noexcept { return p_; }
    std::size_t n_samples() const noexcept { return n_; }
    const MeasureConfig& config() const noexcept { return config_; }

    const SearchState& state(FeatureSet remaining);

    // Weight of the edge that removes `candidate` from `remaining`. Zero when
    // `remaining` holds a single feature.
    double step_cost(FeatureSet remaining, Index candidate);
    // Weights for several candidates of one node, in the given order.
    std::vector<double> step_costs(FeatureSet remaining, std::span<const Index> candidates);

    // Distinct non-trivial edges whose weight has been computed so far.
    std::size_t edges_evaluated() const noexcept { return edges_evaluated_; }

    // Sum of edge weights along a full ordering, accumulated left to right.
    double path_cost(std::span<const Index> order);

    // Drop memoized residuals (edge weights are kept).
    void release_residuals();

private:
    struct NodeCosts {
        std::vector<double> cost;      // indexed by feature, NaN until computed
        bool all_plr_computed = false;  // PLR fills every candidate at once
    };

    NodeCosts& node_costs(FeatureSet remaining);

    std::size_t p_;
    std::size_t n_;
    MeasureConfig config_;
    std::unordered_map<FeatureSet, SearchState, FeatureSetHash> states_;
    std::unordered_map<FeatureSet, NodeCosts, FeatureSetHash> costs_;
    std::size_t edges_evaluated_ = 0;
};

// Minimum-cost ordering consistent with the prior (Dijkstra over the lattice
// with lazily computed edge weights). Ties pop the numerically smaller
// remaining-set first.
SearchResult shortest_path_order(const Dataset& data, const MeasureConfig& config,
                                 const PriorKnowledge& prior = {});

// Greedy baseline: at every node take the allowed candidate with the smallest
// step cost (lower index on ties).
SearchResult direct_lingam_order(const Dataset& data, const MeasureConfig& config,
                                 const PriorKnowledge& prior = {});

// Both searches on an existing lattice, sharing its memoized edge weights.
SearchResult shortest_path_order(OrderingLattice& lattice, const PriorKnowledge& prior = {});
SearchResult direct_lingam_order(OrderingLattice& lattice, const PriorKnowledge& prior = {});

// Number of edges in the full lattice over p features: sum_m C(p, m) * m.
std::size_t lattice_edge_count(std::size_t p);

}  // namespace lspp
