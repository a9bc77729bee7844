#pragma once

#include <set>
#include <span>
#include <utility>
#include <vector>

#include "lspp/model.hpp"

namespace lspp {

// b_hat(effect, cause) follows the same convention as GroundTruth::b.
struct WeightedDag {
    Matrix b_hat;
    std::set<std::pair<Index, Index>> edges;  // (cause, effect)
};

struct LassoOptions {
    std::size_t grid_size = 50;
    double grid_ratio = 1e-4;  // smallest penalty relative to the largest
    double zero_threshold = 1e-6;
    double tolerance = 1e-8;
    std::size_t max_sweeps = 10000;
};

// Least squares of y on the columns of x with an intercept. Throws
// SingularDesign when the centered columns are collinear.
std::vector<double> ols(const Matrix& x, std::span<const double> y);

// Adaptive lasso (gamma = 1) at a fixed penalty level on centered data:
// minimizes (1/2N)|y - X b|^2 + lambda * sum_j |b_j| / |b_ols_j|.
std::vector<double> adaptive_lasso(const Matrix& x, std::span<const double> y, double lambda,
                                   const LassoOptions& opts = {});

struct LassoPath {
    std::vector<double> lambdas;
    std::vector<double> bic;
    std::size_t chosen = 0;
    std::vector<double> coef;  // at the chosen penalty, thresholded
};

// Adaptive lasso over a logarithmic penalty grid, selected by
// BIC = N log(RSS / N) + df log N. Ties keep the larger penalty.
LassoPath adaptive_lasso_bic(const Matrix& x, std::span<const double> y, const LassoOptions& opts = {});

// Regresses every feature on its predecessors in `order`. The support comes
// from the BIC-selected adaptive lasso on z-scored columns; the reported
// weights are least-squares refits on that support in the data's own units.
WeightedDag estimate_adjacency(const Dataset& data, const CausalOrder& order, const LassoOptions& opts = {});

}  // namespace lspp
