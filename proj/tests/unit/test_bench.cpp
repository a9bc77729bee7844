#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "lspp/bench.hpp"

using namespace lspp;

namespace {

void expect_same_cells(const std::vector<BenchCell>& a, const std::vector<BenchCell>& b) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].method, b[i].method);
        EXPECT_EQ(a[i].p, b[i].p);
        EXPECT_EQ(a[i].confounded, b[i].confounded);
        EXPECT_EQ(a[i].prior_frac, b[i].prior_frac);
        EXPECT_EQ(a[i].trials, b[i].trials);
        EXPECT_EQ(a[i].failed, b[i].failed);
        EXPECT_EQ(a[i].valid, b[i].valid);
        EXPECT_EQ(a[i].mean_eo, b[i].mean_eo);
        EXPECT_EQ(a[i].mean_edges, b[i].mean_edges);
    }
}

}  // namespace

TEST(TTest, EqualSamples) {
    const std::vector<double> a{0.1, 0.5, 0.2};
    const auto r = paired_t_test(a, a);
    EXPECT_EQ(r.t, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
}

TEST(TTest, ConstantShiftIsDegenerate) {
    const std::vector<double> b{0.1, 0.5, 0.2, 0.9, 0.3, 0.4, 0.8, 0.7, 0.6, 0.0};
    std::vector<double> a = b;
    for (auto& v : a) v += 1.0;
    try {
        paired_t_test(a, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegeneratePairs);
    }
}

TEST(TTest, KnownValues) {
    // reference statistics from a standard statistics package
    const std::vector<double> a{1, 2, 3, 4, 6}, b{0, 0, 0, 0, 0};
    const auto r = paired_t_test(a, b);
    EXPECT_NEAR(r.t, 3.7199244398022175, 1e-12);
    EXPECT_NEAR(r.p_value, 0.020475874420910676, 1e-12);
    const std::vector<double> c{0.3, 1.2, -0.4, 2.2, 0.9, 1.1, 0.05}, d{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    const auto s = paired_t_test(c, d);
    EXPECT_NEAR(s.t, 1.0920495476765089, 1e-12);
    EXPECT_NEAR(s.p_value, 0.31670918491612826, 1e-12);
}

TEST(TTest, Power) {
    int significant = 0;
    for (std::uint64_t meta = 0; meta < 100; ++meta) {
        Rng rng(meta);
        std::vector<double> a(250), b(250);
        for (std::size_t i = 0; i < 250; ++i) {
            b[i] = rng.normal();
            a[i] = b[i] + 0.5 + rng.normal();
        }
        significant += paired_t_test(a, b).p_value < 0.01;
    }
    EXPECT_GE(significant, 95);
}

TEST(TTest, InputErrors) {
    const std::vector<double> a{1.0}, b{2.0, 3.0};
    EXPECT_THROW(paired_t_test(a, a), Error);
    EXPECT_THROW(paired_t_test(a, b), Error);
}

TEST(PriorSequence, SizeAndOrder) {
    const std::vector<Index> truth{4, 7, 0, 2, 6, 1, 3, 5};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto seq = prior_sequence(truth, 0.5, seed);
        ASSERT_EQ(seq.size(), 4U);
        // the sequence is a subsequence of the true order
        auto it = truth.begin();
        for (Index v : seq) {
            it = std::find(it, truth.end(), v);
            ASSERT_NE(it, truth.end());
            ++it;
        }
    }
    EXPECT_TRUE(prior_sequence(truth, 0.0, 1).empty());
    EXPECT_EQ(prior_sequence(truth, 1.0, 1), truth);
    const std::vector<Index> five{0, 1, 2, 3, 4};
    EXPECT_TRUE(prior_sequence(five, 0.25, 1).empty());
    EXPECT_THROW(prior_sequence(truth, 1.5, 1), Error);
}

TEST(Bench, ValidationRejectsEmptyGrid) {
    BenchConfig c;
    c.trials = 0;
    EXPECT_THROW(c.validate(), Error);
    c = BenchConfig{};
    c.methods.clear();
    EXPECT_THROW(c.validate(), Error);
    c = BenchConfig{};
    c.prior_fracs = {1.2};
    EXPECT_THROW(c.validate(), Error);
}

TEST(Bench, FullPriorGivesZeroError) {
    BenchConfig c;
    c.p_values = {4};
    c.n_values = {200};
    c.trials = 4;
    c.methods = {Method::PlrSpp, Method::PlrDirect, Method::KnnSpp};
    c.confounders = ConfounderMode::Both;
    c.prior_fracs = {1.0};
    const auto run = run_benchmark(c);
    ASSERT_EQ(run.cells.size(), 6U);
    for (const auto& cell : run.cells) {
        EXPECT_TRUE(cell.valid);
        EXPECT_EQ(cell.mean_eo, 0.0);
    }
}

TEST(Bench, CellOrderAndDeterminism) {
    BenchConfig c;
    c.p_values = {3, 4};
    c.n_values = {150};
    c.trials = 5;
    c.confounders = ConfounderMode::Both;
    c.prior_fracs = {0.0, 0.5};
    c.seed = 3;
    const auto a = run_benchmark(c);
    ASSERT_EQ(a.cells.size(), 2U * 2U * 2U * 2U);
    EXPECT_EQ(a.records.size(), a.cells.size() * 5U);
    for (std::size_t i = 1; i < a.cells.size(); ++i) {
        const auto& x = a.cells[i - 1];
        const auto& y = a.cells[i];
        const auto kx = std::make_tuple(x.p, static_cast<int>(x.method), x.confounded, x.prior_frac);
        const auto ky = std::make_tuple(y.p, static_cast<int>(y.method), y.confounded, y.prior_frac);
        EXPECT_LT(kx, ky);
    }
    c.parallelism = 4;
    expect_same_cells(a.cells, run_benchmark(c).cells);
}

TEST(Bench, MethodsSeeTheSameData) {
    BenchConfig c;
    c.p_values = {4};
    c.n_values = {200};
    c.trials = 3;
    const auto run = run_benchmark(c);
    for (const auto& r : run.records)
        EXPECT_EQ(r.data_seed, trial_data_seed(c.seed, r.p, r.n, r.confounded, r.trial));
}

TEST(Bench, FailedTrialsInvalidateCell) {
    // two variables cannot carry two distinct confounders
    BenchConfig c;
    c.p_values = {2};
    c.n_values = {100};
    c.trials = 20;
    c.confounders = ConfounderMode::With;
    const auto run = run_benchmark(c);
    for (const auto& cell : run.cells) {
        EXPECT_GT(cell.failed, 2U);
        EXPECT_FALSE(cell.valid);
        EXPECT_EQ(cell.trials + cell.failed, 20U);
    }
    for (const auto& r : run.records)
        if (!r.ok) EXPECT_FALSE(r.error.empty());
}

TEST(Bench, Names) {
    for (auto m : {Method::PlrSpp, Method::PlrDirect, Method::KnnSpp}) EXPECT_EQ(parse_method(to_string(m)), m);
    for (auto m : {ConfounderMode::Both, ConfounderMode::With, ConfounderMode::Without})
        EXPECT_EQ(parse_confounder_mode(to_string(m)), m);
    EXPECT_THROW(parse_method("lingam"), Error);
}
