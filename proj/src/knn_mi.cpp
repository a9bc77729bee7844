// Kraskov-Stoegbauer-Grassberger mutual information, first estimator.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lspp/detail/stats.hpp"
#include "lspp/measures.hpp"
#include "lspp/simd/kernels.hpp"

namespace lspp::measures {

namespace {

// Columns rescaled to unit variance; a constant column is left as is.
std::vector<std::vector<double>> scaled_columns(const Matrix& block) {
    std::vector<std::vector<double>> out;
    out.reserve(block.cols());
    for (std::size_t c = 0; c < block.cols(); ++c) {
        const auto col = block.column(c);
        const auto mv = detail::mean_var(col);
        const double inv = detail::negligible_variance(mv.var, col) ? 1.0 : 1.0 / std::sqrt(mv.var);
        std::vector<double> v(col.size());
        for (std::size_t i = 0; i < col.size(); ++i) v[i] = (col[i] - mv.mean) * inv;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

double knn_mi(const Matrix& x_block, std::span<const double> y, std::size_t k) {
    const std::size_t n = y.size();
    require(x_block.rows() == n, ErrorCode::LengthMismatch, "knn_mi: block and target differ in length");
    require(x_block.cols() >= 1, ErrorCode::InvalidArgument, "knn_mi: empty x block");
    if (k < 1 || k >= n) fail(ErrorCode::InvalidK, "k = " + std::to_string(k) + " must satisfy 1 <= k < N");

    const auto& kern = simd::kernels();
    const auto xs = scaled_columns(x_block);
    Matrix ym(n, 1);
    std::copy(y.begin(), y.end(), ym.column(0).begin());
    const auto ys = scaled_columns(ym).front();

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dx(n), dy(n), joint(n);
    std::vector<double> psi_cache(n + 1, std::numeric_limits<double>::quiet_NaN());
    auto psi = [&](std::size_t v) {
        double& slot = psi_cache[v];
        if (std::isnan(slot)) slot = digamma(static_cast<double>(v));
        return slot;
    };

    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(dx.begin(), dx.end(), 0.0);
        for (const auto& col : xs) kern.chebyshev_update(dx.data(), col.data(), col[i], n);
        std::fill(dy.begin(), dy.end(), 0.0);
        kern.chebyshev_update(dy.data(), ys.data(), ys[i], n);
        dx[i] = kInf;
        dy[i] = kInf;
        for (std::size_t j = 0; j < n; ++j) joint[j] = std::max(dx[j], dy[j]);
        std::nth_element(joint.begin(), joint.begin() + static_cast<std::ptrdiff_t>(k - 1), joint.end());
        const double eps = joint[k - 1];
        const std::size_t nx = kern.count_below(dx.data(), eps, n);
        const std::size_t ny = kern.count_below(dy.data(), eps, n);
        acc += psi(nx + 1) + psi(ny + 1);
    }
    return psi(k) + digamma(static_cast<double>(n)) - acc / static_cast<double>(n);
}

}  // namespace lspp::measures
