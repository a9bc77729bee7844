#include <gtest/gtest.h>

#include "lspp/metrics.hpp"
#include "lspp/rng.hpp"

using namespace lspp;

TEST(OrderingError, Identity) {
    const std::vector<Index> t{3, 1, 0, 2};
    const auto e = ordering_error(t, t);
    EXPECT_EQ(e.e_o, 0.0);
    EXPECT_EQ(e.total_pairs, 6U);
}

TEST(OrderingError, Reverse) {
    const std::vector<Index> t{3, 1, 0, 2}, r{2, 0, 1, 3};
    EXPECT_EQ(ordering_error(r, t).e_o, 1.0);
}

TEST(OrderingError, TwoWrongPairsOfTen) {
    const std::vector<Index> t{0, 1, 2, 3, 4}, e{1, 0, 2, 4, 3};
    const auto err = ordering_error(e, t);
    EXPECT_EQ(err.wrong_pairs, 2U);
    EXPECT_DOUBLE_EQ(err.e_o, 0.2);
}

TEST(OrderingError, SymmetricAndRelabelInvariant) {
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
        std::vector<Index> a(7), b(7), relabel(7);
        for (Index i = 0; i < 7; ++i) a[i] = b[i] = relabel[i] = i;
        rng.shuffle(a.begin(), a.end());
        rng.shuffle(b.begin(), b.end());
        rng.shuffle(relabel.begin(), relabel.end());
        EXPECT_EQ(ordering_error(a, b).e_o, ordering_error(b, a).e_o);
        std::vector<Index> ra(7), rb(7);
        for (std::size_t k = 0; k < 7; ++k) {
            ra[k] = relabel[a[k]];
            rb[k] = relabel[b[k]];
        }
        EXPECT_EQ(ordering_error(ra, rb).e_o, ordering_error(a, b).e_o);
    }
}

TEST(OrderingError, RejectsMismatch) {
    const std::vector<Index> a{0, 1, 2}, b{0, 1};
    EXPECT_THROW(ordering_error(a, b), Error);
}

TEST(EdgeReport, EmptyGraph) {
    WeightedDag dag;
    dag.b_hat = Matrix(3, 3);
    EdgeConstraints c;
    c.required = {{0, 1}};
    c.forbidden = {{2, 0}};
    const auto r = edge_report(dag, c);
    EXPECT_EQ(r.required_captured, 0U);
    EXPECT_EQ(r.forbidden_captured, 0U);
    EXPECT_EQ(r.required_total, 1U);
    EXPECT_EQ(r.forbidden_total, 1U);
}

TEST(EdgeReport, GraphEqualToRequired) {
    WeightedDag dag;
    dag.b_hat = Matrix(3, 3);
    dag.edges = {{0, 1}, {1, 2}};
    EdgeConstraints c;
    c.required = dag.edges;
    c.forbidden = {{2, 0}, {1, 0}};
    const auto r = edge_report(dag, c);
    EXPECT_EQ(r.required_captured, r.required_total);
    EXPECT_EQ(r.forbidden_captured, 0U);
}

TEST(EdgeReport, UnknownFeatureRejected) {
    WeightedDag dag;
    dag.b_hat = Matrix(2, 2);
    EdgeConstraints c;
    c.required = {{0, 5}};
    EXPECT_THROW(edge_report(dag, c), Error);
}

TEST(Tiers, TwoSingletons) {
    const auto c = tiers_to_forbidden({{0}, {1}});
    EXPECT_EQ(c.forbidden, (std::set<EdgeConstraints::Edge>{{1, 0}}));
    EXPECT_TRUE(c.required.empty());
}

TEST(Tiers, SingleTierIsUnconstrained) {
    const auto c = tiers_to_forbidden({{0, 1, 2}});
    EXPECT_TRUE(c.forbidden.empty());
    EXPECT_TRUE(c.required.empty());
}

TEST(Tiers, WithinTierPairsFree) {
    const auto c = tiers_to_forbidden({{0, 1}, {2}});
    EXPECT_EQ(c.forbidden, (std::set<EdgeConstraints::Edge>{{2, 0}, {2, 1}}));
}

TEST(Tiers, OverlapRejected) {
    try {
        tiers_to_forbidden({{0, 1}, {1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OverlappingTiers);
    }
}
