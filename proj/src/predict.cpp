#include "lspp/predict.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "lspp/metrics.hpp"
#include "lspp/parallel.hpp"
#include "lspp/rng.hpp"
#include "lspp/search.hpp"
#include "lspp/simd/kernels.hpp"
#include "lspp/simgen.hpp"

namespace lspp {

namespace {

constexpr std::array<std::string_view, 7> kTargetNames = {
    "confounder", "sparsity_gt_half", "sparsity_value", "spp_exact", "direct_exact", "spp_eo", "direct_eo",
};

void check_train(const std::vector<LabeledFeatures>& train) {
    if (train.empty()) fail(ErrorCode::EmptyTrainingSet, "training set is empty");
    const std::size_t d = train.front().features.size();
    for (const auto& r : train)
        require(r.features.size() == d, ErrorCode::LengthMismatch, "training rows differ in feature count");
}

}  // namespace

std::string_view to_string(Target t) { return kTargetNames[static_cast<std::size_t>(t)]; }

Target parse_target(std::string_view s) {
    for (std::size_t i = 0; i < kTargetNames.size(); ++i)
        if (kTargetNames[i] == s) return static_cast<Target>(i);
    fail(ErrorCode::InvalidArgument, "unknown target '" + std::string(s) + "'");
}

bool is_binary(Target t) {
    return t == Target::Confounder || t == Target::SparsityGtHalf || t == Target::SppExact ||
           t == Target::DirectExact;
}

Standardizer Standardizer::fit(std::span<const LabeledFeatures> rows) {
    if (rows.empty()) fail(ErrorCode::EmptyTrainingSet, "cannot fit a standardizer on no rows");
    const std::size_t d = rows.front().features.size();
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    const double n = static_cast<double>(rows.size());
    for (std::size_t j = 0; j < d; ++j) {
        double m = 0.0;
        for (const auto& r : rows) m += r.features[j];
        m /= n;
        double v = 0.0;
        for (const auto& r : rows) v += (r.features[j] - m) * (r.features[j] - m);
        v /= n;
        s.mean[j] = m;
        const double sd = std::sqrt(v);
        s.scale[j] = (sd > 0.0 && std::isfinite(sd)) ? sd : 1.0;
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
    require(x.size() == mean.size(), ErrorCode::LengthMismatch, "feature vector has the wrong length");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / scale[j];
    return out;
}

std::size_t default_knn_k(std::size_t n_train) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_train)))));
}

KnnModel::KnnModel(std::vector<LabeledFeatures> train, std::size_t k) : train_(std::move(train)) {
    check_train(train_);
    std_ = Standardizer::fit(train_);
    k_ = k == 0 ? default_knn_k(train_.size()) : k;
    require(k_ <= train_.size(), ErrorCode::InvalidArgument, "k exceeds the training set size");
    for (const auto& r : train_) scaled_.push_back(std_.apply(r.features));
}

KnnModel::KnnModel(std::vector<LabeledFeatures> train, Standardizer standardizer, std::size_t k)
    : train_(std::move(train)), std_(std::move(standardizer)) {
    check_train(train_);
    require(std_.mean.size() == train_.front().features.size(), ErrorCode::LengthMismatch,
            "standardizer does not match the training features");
    k_ = k == 0 ? default_knn_k(train_.size()) : k;
    require(k_ <= train_.size(), ErrorCode::InvalidArgument, "k exceeds the training set size");
    for (const auto& r : train_) scaled_.push_back(std_.apply(r.features));
}

std::vector<std::size_t> KnnModel::neighbours(std::span<const double> query) const {
    const auto q = std_.apply(query);
    const auto& kern = simd::kernels();
    std::vector<std::pair<double, std::size_t>> d(scaled_.size());
    for (std::size_t i = 0; i < scaled_.size(); ++i)
        d[i] = {kern.squared_distance(scaled_[i].data(), q.data(), q.size()), i};
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k_), d.end());
    std::vector<std::size_t> out(k_);
    for (std::size_t i = 0; i < k_; ++i) out[i] = d[i].second;
    return out;
}

double KnnModel::classify(std::span<const double> query) const {
    std::size_t ones = 0;
    for (std::size_t i : neighbours(query)) ones += train_[i].label == 1.0 ? 1 : 0;
    return static_cast<double>(ones) / static_cast<double>(k_);
}

double KnnModel::regress(std::span<const double> query) const {
    double s = 0.0;
    for (std::size_t i : neighbours(query)) s += train_[i].label;
    return s / static_cast<double>(k_);
}

double knn_classify(const std::vector<LabeledFeatures>& train, std::span<const double> query, std::size_t k) {
    check_train(train);
    return KnnModel(train, k).classify(query);
}

double knn_regress(const std::vector<LabeledFeatures>& train, std::span<const double> query, std::size_t k) {
    check_train(train);
    return KnnModel(train, k).regress(query);
}

RocSummary roc_summary(std::span<const ScoredLabel> scores) {
    std::size_t pos = 0;
    for (const auto& s : scores) {
        require(s.label == 0 || s.label == 1, ErrorCode::InvalidArgument, "labels must be 0 or 1");
        require(!std::isnan(s.score), ErrorCode::InvalidArgument, "scores must not be NaN");
        pos += static_cast<std::size_t>(s.label);
    }
    const std::size_t neg = scores.size() - pos;
    if (pos == 0 || neg == 0) fail(ErrorCode::SingleClass, "ROC needs both classes");

    std::vector<ScoredLabel> sorted(scores.begin(), scores.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.score > b.score; });

    const double np = static_cast<double>(pos), nn = static_cast<double>(neg);
    RocSummary out;
    double best_j = -std::numeric_limits<double>::infinity();
    std::size_t tp = 0, fp = 0;
    double prev_tpr = 0.0, prev_fpr = 0.0, auc = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        const double thr = sorted[i].score;
        for (; i < sorted.size() && sorted[i].score == thr; ++i) (sorted[i].label == 1 ? tp : fp) += 1;
        const double tpr = static_cast<double>(tp) / np;
        const double fpr = static_cast<double>(fp) / nn;
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) * 0.5;
        prev_tpr = tpr;
        prev_fpr = fpr;
        const double j = tpr - fpr;
        if (j > best_j) {
            best_j = j;
            out.optimal_threshold = thr;
            out.recall = tpr;
            out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
            out.accuracy = static_cast<double>(tp + (neg - fp)) / static_cast<double>(sorted.size());
        }
    }
    out.auc = std::clamp(auc, 0.0, 1.0);
    return out;
}

RegressionSummary regression_summary(std::span<const double> predicted, std::span<const double> actual) {
    require(predicted.size() == actual.size(), ErrorCode::LengthMismatch, "prediction and truth differ in length");
    require(!actual.empty(), ErrorCode::EmptyTrainingSet, "no rows to evaluate");
    const double n = static_cast<double>(actual.size());
    double mean = 0.0;
    for (double a : actual) mean += a;
    mean /= n;
    double sse = 0.0, sae = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = predicted[i] - actual[i];
        sse += e * e;
        sae += std::fabs(e);
        sst += (actual[i] - mean) * (actual[i] - mean);
    }
    RegressionSummary r;
    r.rmse = std::sqrt(sse / n);
    r.mae = sae / n;
    r.r2 = sst > 0.0 ? 1.0 - sse / sst : 0.0;
    return r;
}

std::vector<TrialDraw> training_draws(const TrainingSpec& spec) {
    std::vector<TrialDraw> out;
    for (std::size_t p : spec.p_values) {
        for (std::size_t t = 0; t < spec.trials_per_p; ++t) {
            const std::uint64_t seed = hash_combine({spec.seed, p, t});
            Rng rng(seed);
            out.push_back({p, seed, rng.bernoulli(spec.confounder_probability)});
        }
    }
    return out;
}

TrialData generate_trial(const TrialDraw& draw, std::size_t n_samples) {
    Rng rng(draw.seed);
    rng.next_u64();  // the confounder coin of training_draws
    TrialData t;
    t.params = sample_benchmark_params(draw.p, n_samples, draw.with_confounders, rng.next_u64());
    auto [data, truth] = generate(t.params);
    t.data = std::move(data);
    t.truth = std::move(truth);
    return t;
}

double target_label(Target target, const TrialData& trial, OrderingLattice& lattice) {
    switch (target) {
        case Target::Confounder: return trial.params.n_confounders > 0 ? 1.0 : 0.0;
        case Target::SparsityGtHalf: return trial.params.sparsity > 0.5 ? 1.0 : 0.0;
        case Target::SparsityValue: return trial.params.sparsity;
        case Target::SppExact:
        case Target::SppEo: {
            const double e = ordering_error(shortest_path_order(lattice).order, trial.truth.true_order).e_o;
            return target == Target::SppEo ? e : (e == 0.0 ? 1.0 : 0.0);
        }
        case Target::DirectExact:
        case Target::DirectEo: {
            const double e = ordering_error(direct_lingam_order(lattice).order, trial.truth.true_order).e_o;
            return target == Target::DirectEo ? e : (e == 0.0 ? 1.0 : 0.0);
        }
    }
    return 0.0;
}

namespace {

LabeledFeatures trial_row(const TrainingSpec& spec, const TrialDraw& draw) {
    const TrialData trial = generate_trial(draw, spec.n_samples);
    OrderingLattice lattice(trial.data, spec.config);
    const PathDistribution dist = spec.path_mode == PathMode::Exhaustive
                                      ? enumerate_paths(lattice)
                                      : sample_paths(lattice, spec.path_samples, hash_combine({draw.seed, 2}));
    LabeledFeatures row;
    row.features = moment_features(dist).moments;
    row.meta = {draw.p, draw.seed, std::string(to_string(spec.target))};
    row.label = target_label(spec.target, trial, lattice);
    return row;
}

}  // namespace

std::vector<LabeledFeatures> build_training_set(
    const TrainingSpec& spec, const std::function<void(const TrialDraw&, const std::string&)>& on_skip) {
    require(!spec.p_values.empty(), ErrorCode::InvalidArgument, "no feature counts given");
    for (std::size_t p : spec.p_values) require(p >= 2, ErrorCode::InvalidArgument, "p must be at least 2");
    require(spec.confounder_probability >= 0.0 && spec.confounder_probability <= 1.0, ErrorCode::InvalidArgument,
            "confounder probability must lie in [0, 1]");
    const auto draws = training_draws(spec);
    std::vector<std::optional<LabeledFeatures>> rows(draws.size());
    std::vector<std::string> errors(draws.size());
    parallel_for(draws.size(), spec.jobs, [&](std::size_t i) {
        try {
            rows[i] = trial_row(spec, draws[i]);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    std::vector<LabeledFeatures> out;
    out.reserve(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        if (rows[i]) out.push_back(std::move(*rows[i]));
        else if (on_skip) on_skip(draws[i], errors[i]);
    }
    return out;
}

}  // namespace lspp
