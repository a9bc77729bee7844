#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "lspp/model.hpp"

namespace lspp {

enum class MeasureKind { Plr, KnnMi };
enum class KRule { Fraction5, Fraction10, SqrtN };

struct MeasureConfig {
    MeasureKind kind = MeasureKind::Plr;
    KRule k_rule = KRule::SqrtN;  // only read for KnnMi
};

std::string_view to_string(MeasureKind kind);
std::string_view to_string(KRule rule);
MeasureKind parse_measure_kind(std::string_view s);
KRule parse_k_rule(std::string_view s);

// Entries(i, j) is the likelihood ratio between candidate i and candidate j;
// antisymmetric with an exactly-zero diagonal.
class PlrMatrix {
public:
    explicit PlrMatrix(std::size_t m) : m_(m), entries_(m * m, 0.0) {}

    std::size_t size() const noexcept { return m_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * m_ + j]; }
    void set(std::size_t i, std::size_t j, double v) noexcept {
        entries_[i * m_ + j] = v;
        entries_[j * m_ + i] = -v;
    }

private:
    std::size_t m_;
    std::vector<double> entries_;
};

namespace measures {

// Constants of the maximum-entropy approximation to differential entropy.
inline constexpr double kEntropyK1 = 79.047;
inline constexpr double kEntropyK2 = 7.4129;
inline constexpr double kEntropyGamma = 0.37457;
// Entropy of a standard Gaussian, (1 + log 2 pi) / 2.
double gaussian_entropy();

// xi minus its least-squares projection on xj.
std::vector<double> residual(std::span<const double> xi, std::span<const double> xj);
void residual_into(std::span<const double> xi, std::span<const double> xj, std::span<double> out);

// Approximate differential entropy of u after z-scoring it.
double approx_entropy(std::span<const double> u);

// Pairwise likelihood ratio R(x, y). Positive values favour x -> y. Both
// inputs are z-scored internally, so R is invariant to positive rescaling.
double plr(std::span<const double> x, std::span<const double> y);

// Likelihood ratios between every pair of columns.
PlrMatrix plr_matrix(const Matrix& columns);

// (1 / (m - 1)) * sum_{j != i} min(0, M(i, j))^2
double plr_step_cost(const PlrMatrix& m, std::size_t local_candidate);
// Same, for a feature index of the state.
double plr_step_cost(Index candidate, const SearchState& state);

// Digamma by upward recurrence to x >= 6 followed by the asymptotic series.
double digamma(double x);

std::size_t knn_k(KRule rule, std::size_t n);

// Kraskov (algorithm 1) estimate of I(X; y) with max-norm neighbourhoods;
// x_block holds one column per dimension of X.
double knn_mi(const Matrix& x_block, std::span<const double> y, std::size_t k);

// Mutual information between the candidate's column and the residuals of the
// other remaining features after regressing out the candidate; clamped at 0.
double knn_step_cost(Index candidate, const SearchState& state, const MeasureConfig& config);

}  // namespace measures

// Step costs of every candidate listed in `candidates` (feature indices of
// the state) under the configured measure. Order follows `candidates`.
std::vector<double> step_costs(const SearchState& state, std::span<const Index> candidates,
                               const MeasureConfig& config);

// Replace every remaining column by its residual on `chosen` and drop `chosen`.
SearchState residualize(const SearchState& state, Index chosen);

// Start state over z-scored columns.
SearchState initial_state(const Dataset& data);

}  // namespace lspp
