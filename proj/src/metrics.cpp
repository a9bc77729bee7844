#include "lspp/metrics.hpp"

#include <set>

namespace lspp {

OrderingError ordering_error(std::span<const Index> estimated, std::span<const Index> truth) {
    const std::size_t p = truth.size();
    require(estimated.size() == p, ErrorCode::LengthMismatch, "orderings differ in length");
    require(is_permutation_of_range(estimated, p) && is_permutation_of_range(truth, p), ErrorCode::InvalidArgument,
            "orderings must be permutations of the same index range");
    std::vector<std::size_t> pos_est(p), pos_true(p);
    for (std::size_t i = 0; i < p; ++i) {
        pos_est[estimated[i]] = i;
        pos_true[truth[i]] = i;
    }
    OrderingError out;
    out.total_pairs = p * (p - 1) / 2;
    for (Index a = 0; a < p; ++a)
        for (Index b = a + 1; b < p; ++b)
            if ((pos_est[a] < pos_est[b]) != (pos_true[a] < pos_true[b])) ++out.wrong_pairs;
    out.e_o = out.total_pairs == 0 ? 0.0
                                   : 2.0 * static_cast<double>(out.wrong_pairs) / static_cast<double>(p * (p - 1));
    return out;
}

OrderingError ordering_error(const CausalOrder& estimated, std::span<const Index> truth) {
    return ordering_error(std::span<const Index>(estimated.order), truth);
}

EdgeReport edge_report(const WeightedDag& dag, const EdgeConstraints& constraints) {
    constraints.validate();
    const std::size_t p = dag.b_hat.rows();
    auto check = [p](const std::set<EdgeConstraints::Edge>& s) {
        for (const auto& [c, e] : s)
            require(c < p && e < p, ErrorCode::InvalidArgument, "constraint refers to an unknown feature");
    };
    check(constraints.required);
    check(constraints.forbidden);

    EdgeReport r;
    r.required_total = constraints.required.size();
    r.forbidden_total = constraints.forbidden.size();
    for (const auto& e : dag.edges) {
        r.required_captured += constraints.required.count(e);
        r.forbidden_captured += constraints.forbidden.count(e);
    }
    return r;
}

EdgeConstraints tiers_to_forbidden(const std::vector<std::vector<Index>>& tiers) {
    std::set<Index> seen;
    for (const auto& tier : tiers)
        for (Index i : tier)
            if (!seen.insert(i).second)
                fail(ErrorCode::OverlappingTiers, "feature " + std::to_string(i) + " appears in more than one tier");
    EdgeConstraints out;
    for (std::size_t early = 0; early < tiers.size(); ++early)
        for (std::size_t late = early + 1; late < tiers.size(); ++late)
            for (Index l : tiers[late])
                for (Index e : tiers[early]) out.forbidden.insert({l, e});
    return out;
}

}  // namespace lspp
