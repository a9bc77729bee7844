#include "lspp/simgen.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "lspp/detail/stats.hpp"

namespace lspp {

namespace {

constexpr std::array<std::string_view, kNoiseFamilyCount> kFamilyNames = {
    "uniform",       "exponential_right", "exponential_left", "laplace",
    "student_t3",    "student_t5",        "mixture_bimodal",  "mixture_scale",
    "mixture_skew_right", "mixture_skew_left", "chisquare1", "lognormal",
};

double student_t(Rng& rng, int df) {
    double chi = 0.0;
    for (int i = 0; i < df; ++i) {
        const double z = rng.normal();
        chi += z * z;
    }
    return rng.normal() / std::sqrt(chi / df);
}

double draw_one(NoiseFamily f, Rng& rng) {
    switch (f) {
        case NoiseFamily::Uniform: return rng.uniform() - 0.5;
        case NoiseFamily::ExponentialRight: return -std::log(rng.uniform_open0());
        case NoiseFamily::ExponentialLeft: return std::log(rng.uniform_open0());
        case NoiseFamily::Laplace: {
            const double e = -std::log(rng.uniform_open0());
            return rng.bernoulli(0.5) ? e : -e;
        }
        case NoiseFamily::StudentT3: return student_t(rng, 3);
        case NoiseFamily::StudentT5: return student_t(rng, 5);
        case NoiseFamily::MixtureBimodal: {
            const double m = rng.bernoulli(0.5) ? 1.5 : -1.5;
            return m + 0.5 * rng.normal();
        }
        case NoiseFamily::MixtureScale: {
            const double s = rng.bernoulli(0.8) ? 1.0 : 4.0;
            return s * rng.normal();
        }
        case NoiseFamily::MixtureSkewRight:
            return rng.bernoulli(0.8) ? -0.5 + 0.5 * rng.normal() : 2.0 + rng.normal();
        case NoiseFamily::MixtureSkewLeft:
            return rng.bernoulli(0.8) ? 0.5 + 0.5 * rng.normal() : -2.0 + rng.normal();
        case NoiseFamily::ChiSquare1: {
            const double z = rng.normal();
            return z * z - 1.0;
        }
        case NoiseFamily::LogNormal: return std::exp(0.75 * rng.normal());
    }
    return 0.0;
}

NoiseFamily pick_family(const std::string& spec, Rng& rng) {
    // The family is drawn even for a fixed spec so the stream layout does not
    // depend on it.
    const auto drawn = static_cast<NoiseFamily>(rng.below(kNoiseFamilyCount));
    return spec == "mixed" ? drawn : parse_noise_family(spec);
}

std::size_t rank_of(const Matrix& m) {
    if (m.cols() == 0) return 0;
    Eigen::Map<const Eigen::MatrixXd> e(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                        static_cast<Eigen::Index>(m.cols()));
    return static_cast<std::size_t>(Eigen::FullPivLU<Eigen::MatrixXd>(e).rank());
}

// Lambda in causal-order rows, 0/1 entries.
Matrix build_lambda(std::size_t p, std::size_t q, double confoundedness, Rng& rng) {
    constexpr int kMaxRetries = 1000;
    Matrix lam(p, q);
    for (std::size_t c = 0; c < q; ++c) {
        bool accepted = false;
        for (int attempt = 0; attempt <= kMaxRetries && !accepted; ++attempt) {
            const auto t1 = static_cast<std::size_t>(rng.below(p));
            auto t2 = static_cast<std::size_t>(rng.below(p - 1));
            if (t2 >= t1) ++t2;
            std::vector<double> col(p);
            for (std::size_t i = 0; i < p; ++i) col[i] = rng.bernoulli(confoundedness) ? 1.0 : 0.0;
            col[t1] = col[t2] = 1.0;

            bool duplicate = false;
            for (std::size_t k = 0; k < c && !duplicate; ++k)
                duplicate = std::equal(col.begin(), col.end(), lam.column(k).begin());
            if (duplicate) continue;
            Matrix trial(p, c + 1);
            for (std::size_t k = 0; k < c; ++k) std::copy_n(lam.column(k).begin(), p, trial.column(k).begin());
            std::copy(col.begin(), col.end(), trial.column(c).begin());
            if (rank_of(trial) != c + 1) continue;
            std::copy(col.begin(), col.end(), lam.column(c).begin());
            accepted = true;
        }
        if (!accepted)
            fail(ErrorCode::GenerationFailed, "could not build a full-rank confounder loading matrix with " +
                                                  std::to_string(q) + " columns over " + std::to_string(p) +
                                                  " variables");
    }
    return lam;
}

}  // namespace

std::string_view to_string(NoiseFamily f) { return kFamilyNames[static_cast<std::size_t>(f)]; }

NoiseFamily parse_noise_family(std::string_view s) {
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
        if (kFamilyNames[i] == s) return static_cast<NoiseFamily>(i);
    fail(ErrorCode::InvalidArgument, "unknown noise family '" + std::string(s) + "'");
}

bool is_valid_noise_spec(std::string_view s) {
    if (s == "mixed") return true;
    for (auto name : kFamilyNames)
        if (name == s) return true;
    return false;
}

std::vector<double> draw_family(NoiseFamily f, std::size_t n, Rng& rng) {
    std::vector<double> out(n);
    for (auto& v : out) v = draw_one(f, rng);
    return out;
}

std::vector<double> draw_scaled(NoiseFamily f, std::size_t n, double variance, Rng& rng) {
    auto v = draw_family(f, n, rng);
    const auto mv = detail::mean_var(v);
    const double scale = detail::negligible_variance(mv.var, v) ? 0.0 : std::sqrt(variance / mv.var);
    for (auto& x : v) x = (x - mv.mean) * scale;
    return v;
}

std::pair<Dataset, GroundTruth> generate(const GenParams& params) {
    params.validate();
    require(is_valid_noise_spec(params.noise_family), ErrorCode::InvalidArgument,
            "unknown noise family '" + params.noise_family + "'");
    const std::size_t p = params.p;
    const std::size_t n = params.n_samples;
    const std::size_t q = params.n_confounders;
    Rng rng(params.seed);

    // 1. connection strengths, causal-order basis
    Matrix bt(p, p);
    for (std::size_t i = 1; i < p; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double mag = rng.uniform(0.5, 1.5);
            const bool negative = rng.bernoulli(0.5);
            const bool keep = rng.bernoulli(1.0 - params.sparsity);
            bt(i, j) = keep ? (negative ? -mag : mag) : 0.0;
        }
    }

    // 2. noise
    Matrix e(n, p);
    for (std::size_t i = 0; i < p; ++i) {
        const NoiseFamily fam = pick_family(params.noise_family, rng);
        const double var = rng.uniform(1.0, 3.0);
        const auto v = draw_scaled(fam, n, var, rng);
        std::copy(v.begin(), v.end(), e.column(i).begin());
    }

    // 3. confounders
    const double strength = std::pow(10.0, params.confounding_strength_exp);
    Matrix f(n, q);
    for (std::size_t c = 0; c < q; ++c) {
        const NoiseFamily fam = pick_family(params.noise_family, rng);
        const double var = rng.uniform(1.0, 3.0);
        const auto v = draw_scaled(fam, n, var, rng);
        for (std::size_t r = 0; r < n; ++r) f(r, c) = strength * v[r];
    }

    // 4. loadings
    const Matrix lt = build_lambda(p, q, params.confoundedness, rng);

    // 5. forward substitution in causal order
    Matrix xt(n, p);
    for (std::size_t i = 0; i < p; ++i) {
        auto xi = xt.column(i);
        std::copy_n(e.column(i).begin(), n, xi.begin());
        for (std::size_t j = 0; j < i; ++j) {
            const double b = bt(i, j);
            if (b == 0.0) continue;
            const auto xj = xt.column(j);
            for (std::size_t r = 0; r < n; ++r) xi[r] += b * xj[r];
        }
        for (std::size_t c = 0; c < q; ++c) {
            if (lt(i, c) == 0.0) continue;
            const auto fc = f.column(c);
            for (std::size_t r = 0; r < n; ++r) xi[r] += lt(i, c) * fc[r];
        }
    }

    // 6. column permutation: dataset column k holds causal variable perm[k]
    std::vector<Index> perm(p);
    for (std::size_t i = 0; i < p; ++i) perm[i] = i;
    rng.shuffle(perm.begin(), perm.end());

    GroundTruth truth;
    truth.params = params;
    truth.true_order.assign(p, 0);
    for (std::size_t k = 0; k < p; ++k) truth.true_order[perm[k]] = k;
    Matrix x(n, p);
    truth.b = Matrix(p, p);
    truth.lambda = Matrix(p, q);
    for (std::size_t k = 0; k < p; ++k) {
        std::copy_n(xt.column(perm[k]).begin(), n, x.column(k).begin());
        for (std::size_t l = 0; l < p; ++l) truth.b(k, l) = bt(perm[k], perm[l]);
        for (std::size_t c = 0; c < q; ++c) truth.lambda(k, c) = lt(perm[k], c);
    }
    return {Dataset(std::move(x), Dataset::default_names(p)), std::move(truth)};
}

GenParams sample_benchmark_params(std::size_t p, std::size_t n, bool with_confounders, std::uint64_t seed) {
    Rng rng(seed);
    GenParams g;
    g.p = p;
    g.n_samples = n;
    g.sparsity = rng.uniform();
    g.confounding_strength_exp = rng.uniform(1.0, 2.0);
    const std::size_t q = 1 + static_cast<std::size_t>(rng.below(3));
    const double conf = rng.uniform();
    g.n_confounders = with_confounders ? q : 0;
    g.confoundedness = with_confounders ? conf : 0.0;
    g.noise_family = "mixed";
    g.seed = rng.next_u64();
    return g;
}

}  // namespace lspp
