#include "lspp/search.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <queue>

namespace lspp {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

void check_inputs(std::size_t p, std::size_t n, const PriorKnowledge& prior) {
    require(p >= 2, ErrorCode::InvalidArgument, "search needs at least 2 features");
    require(p <= FeatureSet::kMaxFeatures, ErrorCode::TooManyFeatures,
            "search supports at most " + std::to_string(FeatureSet::kMaxFeatures) + " features");
    require(n >= p + 2, ErrorCode::InvalidArgument, "search needs N >= p + 2");
    if (!prior.empty() && prior.max_index() >= p)
        fail(ErrorCode::PriorUnsatisfiable, "prior refers to feature " + std::to_string(prior.max_index()) +
                                                " but the data has " + std::to_string(p));
}

std::vector<Index> allowed_candidates(FeatureSet remaining, const PriorKnowledge& prior) {
    std::vector<Index> out;
    for (Index c : remaining.indices())
        if (is_state_allowed(remaining.without(c), prior)) out.push_back(c);
    return out;
}

}  // namespace

bool is_state_allowed(FeatureSet remaining, const PriorKnowledge& prior) {
    for (const auto& [a, b] : prior.pairs())
        if (remaining.contains(a) && !remaining.contains(b)) return false;
    return true;
}

OrderingLattice::OrderingLattice(const Dataset& data, MeasureConfig config)
    : p_(data.n_features()), n_(data.n_samples()), config_(config) {
    require(p_ <= FeatureSet::kMaxFeatures, ErrorCode::TooManyFeatures,
            "at most " + std::to_string(FeatureSet::kMaxFeatures) + " features are supported");
    SearchState start = initial_state(data);
    const FeatureSet key = start.remaining;
    states_.emplace(key, std::move(start));
}

const SearchState& OrderingLattice::state(FeatureSet remaining) {
    if (auto it = states_.find(remaining); it != states_.end()) return it->second;
    const FeatureSet full = FeatureSet::full(p_);
    require((remaining.bits() & ~full.bits()) == 0, ErrorCode::InvalidArgument, "state outside the lattice");
    if (states_.find(full) == states_.end())
        fail(ErrorCode::InvalidArgument, "residuals were released; rebuild the lattice");
    // Parent: put back the highest removed feature, so removals are replayed
    // in ascending index order.
    const std::uint64_t removed = full.bits() & ~remaining.bits();
    const Index last = static_cast<Index>(63 - std::countl_zero(removed));
    const SearchState& parent = state(remaining.with(last));
    SearchState next = residualize(parent, last);
    return states_.emplace(remaining, std::move(next)).first->second;
}

OrderingLattice::NodeCosts& OrderingLattice::node_costs(FeatureSet remaining) {
    auto it = costs_.find(remaining);
    if (it == costs_.end()) {
        NodeCosts nc;
        nc.cost.assign(p_, kUnset);
        it = costs_.emplace(remaining, std::move(nc)).first;
    }
    return it->second;
}

std::vector<double> OrderingLattice::step_costs(FeatureSet remaining, std::span<const Index> candidates) {
    for (Index c : candidates)
        require(c < p_ && remaining.contains(c), ErrorCode::InvalidArgument,
                "candidate " + std::to_string(c) + " is not in the state");
    std::vector<double> out(candidates.size(), 0.0);
    if (remaining.size() < 2) return out;

    NodeCosts& nc = node_costs(remaining);
    std::vector<Index> missing;
    for (Index c : candidates)
        if (std::isnan(nc.cost[c])) missing.push_back(c);

    if (!missing.empty()) {
        const SearchState& s = state(remaining);
        if (config_.kind == MeasureKind::Plr) {
            // One PLR matrix yields every candidate's cost at this node.
            if (!nc.all_plr_computed) {
                const auto all = remaining.indices();
                const auto costs = lspp::step_costs(s, all, config_);
                for (std::size_t i = 0; i < all.size(); ++i) nc.cost[all[i]] = costs[i];
                nc.all_plr_computed = true;
            }
        } else {
            const auto costs = lspp::step_costs(s, missing, config_);
            for (std::size_t i = 0; i < missing.size(); ++i) nc.cost[missing[i]] = costs[i];
        }
        edges_evaluated_ += missing.size();
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = nc.cost[candidates[i]];
    return out;
}

double OrderingLattice::step_cost(FeatureSet remaining, Index candidate) {
    const Index c[1] = {candidate};
    return step_costs(remaining, c).front();
}

double OrderingLattice::path_cost(std::span<const Index> order) {
    require(is_permutation_of_range(order, p_), ErrorCode::InvalidArgument, "path_cost needs a permutation");
    FeatureSet s = FeatureSet::full(p_);
    double total = 0.0;
    for (Index c : order) {
        total += step_cost(s, c);
        s = s.without(c);
    }
    return total;
}

void OrderingLattice::release_residuals() { states_.clear(); }

std::size_t lattice_edge_count(std::size_t p) {
    // sum_m C(p, m) m = p 2^(p-1)
    return p == 0 ? 0 : p * (std::size_t{1} << (p - 1));
}

SearchResult shortest_path_order(const Dataset& data, const MeasureConfig& config, const PriorKnowledge& prior) {
    check_inputs(data.n_features(), data.n_samples(), prior);
    OrderingLattice lattice(data, config);
    return shortest_path_order(lattice, prior);
}

SearchResult direct_lingam_order(const Dataset& data, const MeasureConfig& config, const PriorKnowledge& prior) {
    check_inputs(data.n_features(), data.n_samples(), prior);
    OrderingLattice lattice(data, config);
    return direct_lingam_order(lattice, prior);
}

SearchResult shortest_path_order(OrderingLattice& lattice, const PriorKnowledge& prior) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t p = lattice.n_features();
    check_inputs(p, lattice.n_samples(), prior);

    struct Label {
        double dist;
        FeatureSet parent;
        Index chosen;
        double step;
        bool settled;
    };
    using Entry = std::pair<double, std::uint64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    std::unordered_map<FeatureSet, Label, FeatureSetHash> labels;

    const FeatureSet start = FeatureSet::full(p);
    labels[start] = {0.0, start, 0, 0.0, false};
    frontier.push({0.0, start.bits()});

    SearchResult result;
    bool reached = false;
    while (!frontier.empty()) {
        const auto [d, bits] = frontier.top();
        frontier.pop();
        const FeatureSet s(bits);
        Label& lab = labels.at(s);
        if (lab.settled || d > lab.dist) continue;
        lab.settled = true;
        if (s.empty()) {
            reached = true;
            break;
        }
        ++result.states_expanded;

        const auto cands = allowed_candidates(s, prior);
        const auto costs = lattice.step_costs(s, cands);
        if (s.size() >= 2) result.edges_evaluated += cands.size();
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const FeatureSet child = s.without(cands[i]);
            const double nd = d + costs[i];
            auto it = labels.find(child);
            if (it == labels.end()) {
                labels.emplace(child, Label{nd, s, cands[i], costs[i], false});
                frontier.push({nd, child.bits()});
            } else if (!it->second.settled && nd < it->second.dist) {
                it->second = Label{nd, s, cands[i], costs[i], false};
                frontier.push({nd, child.bits()});
            }
        }
    }
    if (!reached) fail(ErrorCode::PriorUnsatisfiable, "no ordering satisfies the prior");

    std::vector<Index> order(p);
    std::vector<double> steps(p);
    FeatureSet cur;
    for (std::size_t pos = p; pos-- > 0;) {
        const Label& lab = labels.at(cur);
        order[pos] = lab.chosen;
        steps[pos] = lab.step;
        cur = lab.parent;
    }
    result.order = CausalOrder::from_steps(std::move(order), std::move(steps));
    result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
    return result;
}

SearchResult direct_lingam_order(OrderingLattice& lattice, const PriorKnowledge& prior) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t p = lattice.n_features();
    check_inputs(p, lattice.n_samples(), prior);

    SearchResult result;
    std::vector<Index> order;
    std::vector<double> steps;
    FeatureSet s = FeatureSet::full(p);
    while (!s.empty()) {
        const auto cands = allowed_candidates(s, prior);
        if (cands.empty()) fail(ErrorCode::PriorUnsatisfiable, "no ordering satisfies the prior");
        ++result.states_expanded;
        const auto costs = lattice.step_costs(s, cands);
        if (s.size() >= 2) result.edges_evaluated += cands.size();
        std::size_t best = 0;
        for (std::size_t i = 1; i < cands.size(); ++i)
            if (costs[i] < costs[best]) best = i;
        order.push_back(cands[best]);
        steps.push_back(costs[best]);
        s = s.without(cands[best]);
    }
    result.order = CausalOrder::from_steps(std::move(order), std::move(steps));
    result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
    return result;
}

}  // namespace lspp
