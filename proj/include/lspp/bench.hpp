#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lspp/measures.hpp"
#include "lspp/model.hpp"

namespace lspp {

enum class Method { PlrSpp, PlrDirect, KnnSpp };
enum class ConfounderMode { Both, With, Without };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);
std::string_view to_string(ConfounderMode m);
ConfounderMode parse_confounder_mode(std::string_view s);

struct BenchConfig {
    std::vector<std::size_t> p_values{5};
    std::vector<std::size_t> n_values{1000};
    std::size_t trials = 10;
    std::vector<Method> methods{Method::PlrSpp, Method::PlrDirect};
    ConfounderMode confounders = ConfounderMode::Without;
    std::vector<double> prior_fracs{0.0};
    std::uint64_t seed = 0;
    std::size_t parallelism = 1;
    KRule k_rule = KRule::SqrtN;

    void validate() const;
};

struct TrialRecord {
    Method method = Method::PlrSpp;
    std::size_t p = 0;
    std::size_t n = 0;
    bool confounded = false;
    double prior_frac = 0.0;
    std::size_t trial = 0;
    std::uint64_t data_seed = 0;
    bool ok = false;
    std::string error;
    double e_o = 0.0;
    std::chrono::nanoseconds runtime{0};
    std::size_t edges = 0;
};

struct BenchCell {
    Method method = Method::PlrSpp;
    std::size_t p = 0;
    std::size_t n = 0;
    bool confounded = false;
    double prior_frac = 0.0;
    std::size_t trials = 0;   // successful trials
    std::size_t failed = 0;
    bool valid = true;        // false when more than 10% of trials failed
    double mean_eo = 0.0;
    std::chrono::nanoseconds mean_runtime{0};
    double mean_edges = 0.0;
};

struct BenchRun {
    std::vector<BenchCell> cells;
    std::vector<TrialRecord> records;  // cell-major, trials ascending
};

// Seed of the dataset used by every method and prior level of one trial, so
// comparisons across those axes are paired.
std::uint64_t trial_data_seed(std::uint64_t seed, std::size_t p, std::size_t n, bool confounded, std::size_t trial);

// The relative order of round(frac * p) randomly chosen variables, taken from
// the true order.
std::vector<Index> prior_sequence(std::span<const Index> true_order, double frac, std::uint64_t seed);

BenchRun run_benchmark(const BenchConfig& config);

struct TTestResult {
    double t = 0.0;
    double p_value = 1.0;
    double mean_diff = 0.0;
    std::size_t n = 0;
};

// Two-sided paired t-test on a - b.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace lspp
