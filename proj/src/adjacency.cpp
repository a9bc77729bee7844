#include "lspp/adjacency.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace lspp {

namespace {

struct Centered {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

Centered center(const Matrix& x, std::span<const double> y) {
    require(x.rows() == y.size(), ErrorCode::LengthMismatch, "design and response differ in length");
    require(x.rows() >= 2, ErrorCode::InvalidArgument, "regression needs at least 2 rows");
    const auto n = static_cast<Eigen::Index>(x.rows());
    const auto k = static_cast<Eigen::Index>(x.cols());
    Centered c{Eigen::Map<const Eigen::MatrixXd>(x.data().data(), n, k),
               Eigen::Map<const Eigen::VectorXd>(y.data(), n)};
    c.x.rowwise() -= c.x.colwise().mean();
    c.y.array() -= c.y.mean();
    return c;
}

Eigen::VectorXd solve_ols(const Centered& c) {
    if (c.x.cols() == 0) return {};
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c.x);
    if (qr.rank() < c.x.cols()) fail(ErrorCode::SingularDesign, "predictor columns are collinear");
    return qr.solve(c.y);
}

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

// Coordinate descent for (1/2N)|y - Z g|^2 + lambda |g|_1, warm-started from g.
// Convergence is judged on b = g * w, the coefficients in the original scale.
void lasso_cd(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double lambda,
              const LassoOptions& opts, Eigen::VectorXd& g) {
    const double n = static_cast<double>(z.rows());
    const Eigen::Index k = z.cols();
    Eigen::VectorXd sq(k);
    for (Eigen::Index j = 0; j < k; ++j) sq[j] = z.col(j).squaredNorm() / n;
    Eigen::VectorXd r = y - z * g;
    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (sq[j] == 0.0) {
                g[j] = 0.0;
                continue;
            }
            const double rho = z.col(j).dot(r) / n + sq[j] * g[j];
            const double next = soft_threshold(rho, lambda) / sq[j];
            const double delta = next - g[j];
            if (delta != 0.0) {
                r.noalias() -= delta * z.col(j);
                g[j] = next;
                max_change = std::max(max_change, std::fabs(delta * w[j]));
            }
        }
        if (max_change < opts.tolerance) break;
    }
}

struct Weighted {
    Centered c;
    Eigen::VectorXd w;
    Eigen::MatrixXd z;
};

Weighted weighted_design(const Matrix& x, std::span<const double> y) {
    Weighted out{center(x, y), {}, {}};
    out.w = solve_ols(out.c).cwiseAbs();
    out.z = out.c.x * out.w.asDiagonal();
    return out;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::vector<double> ols(const Matrix& x, std::span<const double> y) { return to_vector(solve_ols(center(x, y))); }

std::vector<double> adaptive_lasso(const Matrix& x, std::span<const double> y, double lambda,
                                   const LassoOptions& opts) {
    require(lambda >= 0.0, ErrorCode::InvalidArgument, "penalty must be nonnegative");
    const Weighted d = weighted_design(x, y);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d.z.cols());
    lasso_cd(d.z, d.c.y, d.w, lambda, opts, g);
    return to_vector(g.cwiseProduct(d.w));
}

LassoPath adaptive_lasso_bic(const Matrix& x, std::span<const double> y, const LassoOptions& opts) {
    require(opts.grid_size >= 1, ErrorCode::InvalidArgument, "penalty grid must not be empty");
    const Weighted d = weighted_design(x, y);
    const Eigen::Index k = d.z.cols();
    const double n = static_cast<double>(d.z.rows());

    LassoPath path;
    path.coef.assign(static_cast<std::size_t>(k), 0.0);
    if (k == 0) return path;

    const double lambda_max = (d.z.transpose() * d.c.y).cwiseAbs().maxCoeff() / n;
    if (!(lambda_max > 0.0)) return path;

    Eigen::VectorXd g = Eigen::VectorXd::Zero(k);
    double best_bic = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < opts.grid_size; ++i) {
        const double frac = opts.grid_size == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(opts.grid_size - 1);
        const double lambda = lambda_max * std::pow(opts.grid_ratio, frac);
        lasso_cd(d.z, d.c.y, d.w, lambda, opts, g);

        Eigen::VectorXd b = g.cwiseProduct(d.w);
        std::size_t df = 0;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (std::fabs(b[j]) < opts.zero_threshold) b[j] = 0.0;
            else ++df;
        }
        const double rss = std::max((d.c.y - d.c.x * b).squaredNorm(), std::numeric_limits<double>::min());
        const double bic = n * std::log(rss / n) + static_cast<double>(df) * std::log(n);
        path.lambdas.push_back(lambda);
        path.bic.push_back(bic);
        if (bic < best_bic) {
            best_bic = bic;
            path.chosen = i;
            path.coef = to_vector(b);
        }
    }
    return path;
}

WeightedDag estimate_adjacency(const Dataset& data, const CausalOrder& order, const LassoOptions& opts) {
    const std::size_t p = data.n_features();
    const std::size_t n = data.n_samples();
    require(is_permutation_of_range(order.order, p), ErrorCode::InvalidArgument,
            "order is not a permutation of the data's features");
    require(n > p, ErrorCode::InvalidArgument, "adjacency estimation needs N > p");
    const Dataset z = standardize(data);

    WeightedDag dag;
    dag.b_hat = Matrix(p, p);
    for (std::size_t pos = 1; pos < p; ++pos) {
        const Index target = order.order[pos];
        Matrix xs(n, pos);
        for (std::size_t j = 0; j < pos; ++j) std::copy_n(z.column(order.order[j]).begin(), n, xs.column(j).begin());
        const LassoPath path = adaptive_lasso_bic(xs, z.column(target), opts);

        std::vector<Index> support;
        for (std::size_t j = 0; j < pos; ++j)
            if (path.coef[j] != 0.0) support.push_back(order.order[j]);
        if (support.empty()) continue;

        Matrix xr(n, support.size());
        for (std::size_t j = 0; j < support.size(); ++j)
            std::copy_n(data.column(support[j]).begin(), n, xr.column(j).begin());
        const auto coef = ols(xr, data.column(target));
        for (std::size_t j = 0; j < support.size(); ++j) {
            if (std::fabs(coef[j]) < opts.zero_threshold) continue;
            dag.b_hat(target, support[j]) = coef[j];
            dag.edges.insert({support[j], target});
        }
    }
    return dag;
}

}  // namespace lspp
