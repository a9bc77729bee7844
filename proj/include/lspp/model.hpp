#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lspp/error.hpp"

namespace lspp {

using Index = std::size_t;

// Variance convention used throughout the codebase: divide by N, not N - 1.
inline constexpr bool kPopulationVariance = true;

// Dense column-major matrix. Columns are contiguous so per-feature kernels
// can stream over them.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_columns(const std::vector<std::vector<double>>& columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[c * rows_ + r]; }

    std::span<double> column(std::size_t c) noexcept { return {data_.data() + c * rows_, rows_}; }
    std::span<const double> column(std::size_t c) const noexcept { return {data_.data() + c * rows_, rows_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Observations x (N rows, p feature columns). Features are identified by
// column index; names are carried along as labels only.
class Dataset {
public:
    Dataset() = default;
    Dataset(Matrix values, std::vector<std::string> names);

    const Matrix& values() const noexcept { return values_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::size_t n_samples() const noexcept { return values_.rows(); }
    std::size_t n_features() const noexcept { return values_.cols(); }
    std::span<const double> column(Index c) const noexcept { return values_.column(c); }

    static std::vector<std::string> default_names(std::size_t p);

private:
    Matrix values_;
    std::vector<std::string> names_;
};

// Subset of feature indices, p <= 63.
class FeatureSet {
public:
    static constexpr std::size_t kMaxFeatures = 63;

    constexpr FeatureSet() = default;
    constexpr explicit FeatureSet(std::uint64_t bits) : bits_(bits) {}

    static constexpr FeatureSet full(std::size_t p) {
        return FeatureSet(p == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << p) - 1));
    }
    static constexpr FeatureSet single(Index i) { return FeatureSet(std::uint64_t{1} << i); }

    constexpr bool contains(Index i) const { return (bits_ >> i) & 1U; }
    constexpr FeatureSet without(Index i) const { return FeatureSet(bits_ & ~(std::uint64_t{1} << i)); }
    constexpr FeatureSet with(Index i) const { return FeatureSet(bits_ | (std::uint64_t{1} << i)); }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint64_t bits() const { return bits_; }

    std::vector<Index> indices() const;

    constexpr auto operator<=>(const FeatureSet&) const = default;

private:
    std::uint64_t bits_ = 0;
};

struct FeatureSetHash {
    std::size_t operator()(FeatureSet s) const noexcept {
        std::uint64_t z = s.bits() + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<std::size_t>(z ^ (z >> 31));
    }
};

struct CausalOrder {
    std::vector<Index> order;        // earlier position = earlier cause
    std::vector<double> step_costs;  // one per position; the last is always 0
    double total_cost = 0.0;

    // Throws InvalidArgument when the invariants do not hold.
    void validate() const;
    // Builds an order from per-step costs, accumulating the total left to right.
    static CausalOrder from_steps(std::vector<Index> order, std::vector<double> step_costs);
};

// A node of the ordering lattice: the features still to be placed plus their
// residualized columns (column k of residuals belongs to columns[k]).
struct SearchState {
    FeatureSet remaining;
    std::vector<Index> columns;
    Matrix residuals;
    double cost_from_start = 0.0;
};

// Relative ordering knowledge: (a, b) means a precedes b. Stored transitively
// closed, always acyclic.
class PriorKnowledge {
public:
    using Pair = std::pair<Index, Index>;

    PriorKnowledge() = default;
    static PriorKnowledge from_pairs(const std::vector<Pair>& pairs);

    const std::set<Pair>& pairs() const noexcept { return pairs_; }
    bool empty() const noexcept { return pairs_.empty(); }
    bool precedes(Index a, Index b) const { return pairs_.count({a, b}) != 0; }
    Index max_index() const;

    // Feasibility of a permutation under the stored pairs.
    bool admits(std::span<const Index> order) const;

private:
    std::set<Pair> pairs_;
};

struct EdgeConstraints {
    using Edge = std::pair<Index, Index>;  // (cause, effect)
    std::set<Edge> required;
    std::set<Edge> forbidden;

    void validate() const;
};

struct GenParams {
    std::size_t p = 5;
    std::size_t n_samples = 1000;
    double sparsity = 0.5;
    std::size_t n_confounders = 0;
    double confoundedness = 0.0;
    double confounding_strength_exp = 1.0;
    std::string noise_family = "mixed";
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const GenParams&) const = default;
};

// B and Lambda are indexed by dataset column: B(i, j) is the effect of column
// j on column i, Lambda(i, c) the loading of confounder c on column i.
struct GroundTruth {
    Matrix b;
    Matrix lambda;
    std::vector<Index> true_order;
    GenParams params;

    bool b_lower_triangular_in_true_order() const;
    bool lambda_columns_have_two_children() const;
    std::size_t lambda_rank() const;
    // All three invariants.
    bool valid() const;
};

// Column-wise z-scoring with the population variance.
Dataset standardize(const Dataset& data);

// Turns relative orderings such as (1, 2, 3) into all implied ordered pairs,
// closed under transitivity. Throws CyclicPrior on contradictions.
PriorKnowledge expand_prior(const std::vector<std::vector<Index>>& orderings);

bool is_permutation_of_range(std::span<const Index> order, std::size_t p);

}  // namespace lspp
