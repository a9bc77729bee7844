#include "lspp/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include <Eigen/Dense>

#include "lspp/detail/stats.hpp"
#include "lspp/simd/kernels.hpp"

namespace lspp {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ZeroVarianceColumn: return "ZeroVarianceColumn";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::DegenerateCorrelation: return "DegenerateCorrelation";
        case ErrorCode::CyclicPrior: return "CyclicPrior";
        case ErrorCode::PriorUnsatisfiable: return "PriorUnsatisfiable";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::GenerationFailed: return "GenerationFailed";
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::OverlappingTiers: return "OverlappingTiers";
        case ErrorCode::TooManyFeatures: return "TooManyFeatures";
        case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
        case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::DegeneratePairs: return "DegeneratePairs";
    }
    return "Unknown";
}

Matrix Matrix::from_columns(const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) return {};
    Matrix m(columns.front().size(), columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        require(columns[c].size() == m.rows(), ErrorCode::LengthMismatch, "ragged columns");
        std::copy(columns[c].begin(), columns[c].end(), m.column(c).begin());
    }
    return m;
}

Dataset::Dataset(Matrix values, std::vector<std::string> names) : values_(std::move(values)), names_(std::move(names)) {
    require(values_.rows() > 0 && values_.cols() > 0, ErrorCode::InvalidArgument, "dataset must be non-empty");
    require(names_.size() == values_.cols(), ErrorCode::InvalidArgument, "need exactly one name per column");
    std::unordered_set<std::string> seen;
    for (const auto& n : names_)
        require(seen.insert(n).second, ErrorCode::InvalidArgument, "duplicate column name '" + n + "'");
    for (double v : values_.data()) require(std::isfinite(v), ErrorCode::InvalidArgument, "non-finite entry");
}

std::vector<std::string> Dataset::default_names(std::size_t p) {
    std::vector<std::string> names;
    names.reserve(p);
    for (std::size_t i = 0; i < p; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

std::vector<Index> FeatureSet::indices() const {
    std::vector<Index> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<Index>(std::countr_zero(b)));
    return out;
}

bool is_permutation_of_range(std::span<const Index> order, std::size_t p) {
    if (order.size() != p) return false;
    std::vector<bool> seen(p, false);
    for (Index i : order) {
        if (i >= p || seen[i]) return false;
        seen[i] = true;
    }
    return true;
}

void CausalOrder::validate() const {
    const std::size_t p = order.size();
    require(is_permutation_of_range(order, p), ErrorCode::InvalidArgument, "order is not a permutation");
    require(step_costs.size() == p, ErrorCode::InvalidArgument, "need one step cost per position");
    double s = 0.0;
    for (double c : step_costs) {
        require(c >= 0.0, ErrorCode::InvalidArgument, "negative step cost");
        s += c;
    }
    require(p == 0 || step_costs.back() == 0.0, ErrorCode::InvalidArgument, "final step cost must be 0");
    require(std::fabs(s - total_cost) <= 1e-9, ErrorCode::InvalidArgument, "total cost does not match steps");
}

CausalOrder CausalOrder::from_steps(std::vector<Index> order, std::vector<double> step_costs) {
    CausalOrder out;
    out.order = std::move(order);
    out.step_costs = std::move(step_costs);
    for (double c : out.step_costs) out.total_cost += c;
    return out;
}

Index PriorKnowledge::max_index() const {
    Index m = 0;
    for (const auto& [a, b] : pairs_) m = std::max({m, a, b});
    return m;
}

bool PriorKnowledge::admits(std::span<const Index> order) const {
    std::map<Index, std::size_t> pos;
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
    for (const auto& [a, b] : pairs_) {
        auto ia = pos.find(a), ib = pos.find(b);
        if (ia == pos.end() || ib == pos.end()) return false;
        if (ia->second >= ib->second) return false;
    }
    return true;
}

PriorKnowledge PriorKnowledge::from_pairs(const std::vector<Pair>& pairs) {
    // Transitive closure by repeated composition; prior sets are small.
    std::set<Pair> closed(pairs.begin(), pairs.end());
    for (const auto& [a, b] : closed)
        if (a == b) fail(ErrorCode::CyclicPrior, "variable " + std::to_string(a) + " cannot precede itself");
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Pair> added;
        for (const auto& [a, b] : closed) {
            for (auto it = closed.lower_bound({b, 0}); it != closed.end() && it->first == b; ++it) {
                if (!closed.count({a, it->second})) added.emplace_back(a, it->second);
            }
        }
        for (const auto& e : added) grew |= closed.insert(e).second;
    }
    for (const auto& [a, b] : closed) {
        if (a == b || closed.count({b, a}))
            fail(ErrorCode::CyclicPrior, "orderings imply both " + std::to_string(a) + " before " +
                                             std::to_string(b) + " and the reverse");
    }
    PriorKnowledge out;
    out.pairs_ = std::move(closed);
    return out;
}

PriorKnowledge expand_prior(const std::vector<std::vector<Index>>& orderings) {
    std::vector<PriorKnowledge::Pair> pairs;
    for (const auto& seq : orderings) {
        std::set<Index> seen;
        for (Index i : seq)
            require(seen.insert(i).second, ErrorCode::InvalidArgument,
                    "index " + std::to_string(i) + " repeated within one ordering");
        for (std::size_t x = 0; x < seq.size(); ++x)
            for (std::size_t y = x + 1; y < seq.size(); ++y) pairs.emplace_back(seq[x], seq[y]);
    }
    return PriorKnowledge::from_pairs(pairs);
}

void EdgeConstraints::validate() const {
    for (const auto& e : required)
        require(!forbidden.count(e), ErrorCode::InvalidArgument,
                "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ") both required and forbidden");
}

void GenParams::validate() const {
    require(p >= 2, ErrorCode::InvalidArgument, "p must be at least 2");
    require(p <= FeatureSet::kMaxFeatures, ErrorCode::InvalidArgument, "p too large");
    require(n_samples >= 2, ErrorCode::InvalidArgument, "n_samples must be at least 2");
    require(sparsity >= 0.0 && sparsity <= 1.0, ErrorCode::InvalidArgument, "sparsity must lie in [0, 1]");
    require(confoundedness >= 0.0 && confoundedness <= 1.0, ErrorCode::InvalidArgument,
            "confoundedness must lie in [0, 1]");
    require(std::isfinite(confounding_strength_exp), ErrorCode::InvalidArgument, "confounding strength must be finite");
}

bool GroundTruth::b_lower_triangular_in_true_order() const {
    const std::size_t p = b.rows();
    if (b.cols() != p || !is_permutation_of_range(true_order, p)) return false;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j)
            if (b(true_order[i], true_order[j]) != 0.0) return false;
    return true;
}

bool GroundTruth::lambda_columns_have_two_children() const {
    for (std::size_t c = 0; c < lambda.cols(); ++c) {
        const auto col = lambda.column(c);
        if (std::count_if(col.begin(), col.end(), [](double v) { return v != 0.0; }) < 2) return false;
    }
    return true;
}

std::size_t GroundTruth::lambda_rank() const {
    if (lambda.cols() == 0) return 0;
    Eigen::Map<const Eigen::MatrixXd> m(lambda.data().data(), static_cast<Eigen::Index>(lambda.rows()),
                                        static_cast<Eigen::Index>(lambda.cols()));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    return static_cast<std::size_t>(lu.rank());
}

bool GroundTruth::valid() const {
    return b_lower_triangular_in_true_order() && lambda_columns_have_two_children() && lambda_rank() == lambda.cols();
}

Dataset standardize(const Dataset& data) {
    const auto& k = simd::kernels();
    const std::size_t n = data.n_samples();
    Matrix out(n, data.n_features());
    for (std::size_t c = 0; c < data.n_features(); ++c) {
        const auto col = data.column(c);
        const double mean = k.sum(col.data(), n) / static_cast<double>(n);
        const double var = k.sum_sq_dev(col.data(), mean, n) / static_cast<double>(n);
        if (detail::negligible_variance(var, col)) throw ZeroVarianceColumnError(c);
        const double inv_sd = 1.0 / std::sqrt(var);
        auto dst = out.column(c);
        for (std::size_t r = 0; r < n; ++r) dst[r] = (col[r] - mean) * inv_sd;
    }
    return Dataset(std::move(out), data.names());
}

}  // namespace lspp
