#include "lspp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lspp/detail/stats.hpp"
#include "lspp/simd/kernels.hpp"

namespace lspp {

std::string_view to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::Plr: return "plr";
        case MeasureKind::KnnMi: return "knn";
    }
    return "unknown";
}

std::string_view to_string(KRule rule) {
    switch (rule) {
        case KRule::Fraction5: return "fraction5";
        case KRule::Fraction10: return "fraction10";
        case KRule::SqrtN: return "sqrt";
    }
    return "unknown";
}

MeasureKind parse_measure_kind(std::string_view s) {
    if (s == "plr") return MeasureKind::Plr;
    if (s == "knn") return MeasureKind::KnnMi;
    fail(ErrorCode::InvalidArgument, "unknown measure '" + std::string(s) + "'");
}

KRule parse_k_rule(std::string_view s) {
    if (s == "fraction5" || s == "5%") return KRule::Fraction5;
    if (s == "fraction10" || s == "10%") return KRule::Fraction10;
    if (s == "sqrt") return KRule::SqrtN;
    fail(ErrorCode::InvalidArgument, "unknown k rule '" + std::string(s) + "'");
}

namespace measures {

namespace {

struct Moments {
    double mean;
    double sd;
};

Moments checked_moments(std::span<const double> x) {
    const auto mv = detail::mean_var(x);
    if (detail::negligible_variance(mv.var, x)) fail(ErrorCode::ZeroVariance, "input has zero variance");
    return {mv.mean, std::sqrt(mv.var)};
}

double entropy_from_sums(const simd::EntropySums& s, std::size_t n) {
    const double inv_n = 1.0 / static_cast<double>(n);
    const double a = s.log_cosh * inv_n - kEntropyGamma;
    const double b = s.gauss * inv_n;
    return gaussian_entropy() - kEntropyK1 * a * a - kEntropyK2 * b * b;
}

// Entropy of the z-scored version of x.
double column_entropy(std::span<const double> x, const Moments& m) {
    const double inv = 1.0 / m.sd;
    return entropy_from_sums(simd::kernels().entropy_sums(x.data(), nullptr, inv, 0.0, -m.mean * inv, x.size()),
                             x.size());
}

// Entropy of (zy - rho * zx) / sqrt(1 - rho^2) where zx, zy are the z-scored
// inputs; the residual has mean 0 and variance 1 - rho^2 exactly.
double residual_entropy(std::span<const double> y, const Moments& my, std::span<const double> x, const Moments& mx,
                        double rho) {
    const double s = 1.0 / std::sqrt(1.0 - rho * rho);
    const double cy = s / my.sd;
    const double cx = -rho * s / mx.sd;
    const double c0 = -my.mean * cy - mx.mean * cx;
    return entropy_from_sums(simd::kernels().entropy_sums(y.data(), x.data(), cy, cx, c0, y.size()), y.size());
}

double correlation(std::span<const double> x, const Moments& mx, std::span<const double> y, const Moments& my) {
    const double cov = simd::kernels().dot_dev(x.data(), mx.mean, y.data(), my.mean, x.size()) /
                       static_cast<double>(x.size());
    return std::clamp(cov / (mx.sd * my.sd), -1.0, 1.0);
}

void check_correlation(double rho) {
    if (1.0 - rho * rho <= 1e-12) fail(ErrorCode::DegenerateCorrelation, "inputs are perfectly correlated");
}

}  // namespace

double gaussian_entropy() { return 0.5 * (1.0 + std::log(2.0 * std::numbers::pi)); }

void residual_into(std::span<const double> xi, std::span<const double> xj, std::span<double> out) {
    require(xi.size() == xj.size() && out.size() == xi.size(), ErrorCode::LengthMismatch, "residual: length mismatch");
    require(xi.size() >= 2, ErrorCode::InvalidArgument, "residual: need at least 2 samples");
    const auto& k = simd::kernels();
    const auto mi = detail::mean_var(xi);
    const auto mj = detail::mean_var(xj);
    if (detail::negligible_variance(mj.var, xj)) fail(ErrorCode::ZeroVariance, "regressor has zero variance");
    const double cov = k.dot_dev(xi.data(), mi.mean, xj.data(), mj.mean, xi.size()) / static_cast<double>(xi.size());
    k.sub_scaled(out.data(), xi.data(), xj.data(), cov / mj.var, xi.size());
}

std::vector<double> residual(std::span<const double> xi, std::span<const double> xj) {
    std::vector<double> out(xi.size());
    residual_into(xi, xj, out);
    return out;
}

double approx_entropy(std::span<const double> u) {
    require(u.size() >= 2, ErrorCode::InvalidArgument, "entropy: need at least 2 samples");
    return column_entropy(u, checked_moments(u));
}

double plr(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorCode::LengthMismatch, "plr: length mismatch");
    require(x.size() >= 2, ErrorCode::InvalidArgument, "plr: need at least 2 samples");
    const Moments mx = checked_moments(x);
    const Moments my = checked_moments(y);
    const double rho = correlation(x, mx, y, my);
    check_correlation(rho);
    // d = y - rho x is the disturbance under x -> y, e = x - rho y under y -> x.
    const double h_x = column_entropy(x, mx);
    const double h_y = column_entropy(y, my);
    const double h_d = residual_entropy(y, my, x, mx, rho);
    const double h_e = residual_entropy(x, mx, y, my, rho);
    return -h_x - h_d + h_y + h_e;
}

PlrMatrix plr_matrix(const Matrix& columns) {
    const std::size_t m = columns.cols();
    std::vector<Moments> mom;
    std::vector<double> h;
    mom.reserve(m);
    h.reserve(m);
    for (std::size_t c = 0; c < m; ++c) {
        mom.push_back(checked_moments(columns.column(c)));
        h.push_back(column_entropy(columns.column(c), mom.back()));
    }
    PlrMatrix out(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto xi = columns.column(i), xj = columns.column(j);
            const double rho = correlation(xi, mom[i], xj, mom[j]);
            check_correlation(rho);
            const double h_d = residual_entropy(xj, mom[j], xi, mom[i], rho);
            const double h_e = residual_entropy(xi, mom[i], xj, mom[j], rho);
            out.set(i, j, -h[i] - h_d + h[j] + h_e);
        }
    }
    return out;
}

double plr_step_cost(const PlrMatrix& m, std::size_t local_candidate) {
    const std::size_t n = m.size();
    require(local_candidate < n, ErrorCode::InvalidArgument, "candidate out of range");
    if (n < 2) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == local_candidate) continue;
        const double v = std::min(0.0, m(local_candidate, j));
        s += v * v;
    }
    return s / static_cast<double>(n - 1);
}

namespace {

std::size_t local_index(const SearchState& state, Index candidate) {
    const auto it = std::lower_bound(state.columns.begin(), state.columns.end(), candidate);
    require(it != state.columns.end() && *it == candidate, ErrorCode::InvalidArgument,
            "feature " + std::to_string(candidate) + " is not in the state");
    return static_cast<std::size_t>(it - state.columns.begin());
}

}  // namespace

double plr_step_cost(Index candidate, const SearchState& state) {
    const std::size_t local = local_index(state, candidate);
    if (state.columns.size() < 2) return 0.0;
    return plr_step_cost(plr_matrix(state.residuals), local);
}

double digamma(double x) {
    require(x > 0.0 && std::isfinite(x), ErrorCode::InvalidArgument, "digamma needs a positive argument");
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Bernoulli-number series: B_2k / (2k x^2k), k = 1..8
    const double series =
        r * (1.0 / 12 -
             r * (1.0 / 120 -
                  r * (1.0 / 252 -
                       r * (1.0 / 240 -
                            r * (1.0 / 132 - r * (691.0 / 32760 - r * (1.0 / 12 - r * 3617.0 / 8160)))))));
    return acc + std::log(x) - 0.5 / x - series;
}

std::size_t knn_k(KRule rule, std::size_t n) {
    const double dn = static_cast<double>(n);
    switch (rule) {
        case KRule::Fraction5: return static_cast<std::size_t>(std::ceil(0.05 * dn));
        case KRule::Fraction10: return static_cast<std::size_t>(std::ceil(0.10 * dn));
        case KRule::SqrtN: return static_cast<std::size_t>(std::ceil(std::sqrt(dn)));
    }
    return 1;
}

double knn_step_cost(Index candidate, const SearchState& state, const MeasureConfig& config) {
    const std::size_t local = local_index(state, candidate);
    const std::size_t m = state.columns.size();
    if (m < 2) return 0.0;
    const std::size_t n = state.residuals.rows();
    const auto y = state.residuals.column(local);
    Matrix block(n, m - 1);
    for (std::size_t j = 0, c = 0; j < m; ++j) {
        if (j == local) continue;
        residual_into(state.residuals.column(j), y, block.column(c++));
    }
    return std::max(0.0, knn_mi(block, y, knn_k(config.k_rule, n)));
}

}  // namespace measures

std::vector<double> step_costs(const SearchState& state, std::span<const Index> candidates,
                               const MeasureConfig& config) {
    std::vector<double> out;
    out.reserve(candidates.size());
    if (state.columns.size() < 2) {
        out.assign(candidates.size(), 0.0);
        return out;
    }
    if (config.kind == MeasureKind::Plr) {
        const PlrMatrix m = measures::plr_matrix(state.residuals);
        for (Index c : candidates) out.push_back(measures::plr_step_cost(m, measures::local_index(state, c)));
    } else {
        for (Index c : candidates) out.push_back(measures::knn_step_cost(c, state, config));
    }
    return out;
}

SearchState residualize(const SearchState& state, Index chosen) {
    const std::size_t local = measures::local_index(state, chosen);
    const std::size_t m = state.columns.size();
    const std::size_t n = state.residuals.rows();
    SearchState next;
    next.remaining = state.remaining.without(chosen);
    next.cost_from_start = state.cost_from_start;
    next.residuals = Matrix(n, m - 1);
    next.columns.reserve(m - 1);
    const auto pivot = state.residuals.column(local);
    for (std::size_t j = 0; j < m; ++j) {
        if (j == local) continue;
        measures::residual_into(state.residuals.column(j), pivot, next.residuals.column(next.columns.size()));
        next.columns.push_back(state.columns[j]);
    }
    return next;
}

SearchState initial_state(const Dataset& data) {
    const Dataset z = standardize(data);
    SearchState s;
    s.remaining = FeatureSet::full(data.n_features());
    s.columns = s.remaining.indices();
    s.residuals = z.values();
    return s;
}

}  // namespace lspp
