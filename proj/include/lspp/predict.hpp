#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lspp/measures.hpp"
#include "lspp/pathdist.hpp"
#include "lspp/search.hpp"

namespace lspp {

enum class Target { Confounder, SparsityGtHalf, SparsityValue, SppExact, DirectExact, SppEo, DirectEo };

std::string_view to_string(Target t);
Target parse_target(std::string_view s);
// Classification targets carry 0/1 labels.
bool is_binary(Target t);

struct LabelMeta {
    std::size_t p = 0;
    std::uint64_t seed = 0;
    std::string target;
    bool operator==(const LabelMeta&) const = default;
};

struct LabeledFeatures {
    std::vector<double> features;
    double label = 0.0;
    LabelMeta meta;
    bool operator==(const LabeledFeatures&) const = default;
};

// Per-feature z-scoring fitted on a training set. Constant features get unit
// scale.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(std::span<const LabeledFeatures> rows);
    std::vector<double> apply(std::span<const double> x) const;
};

// k-nearest-neighbour model on standardized features. Distances are
// Euclidean; equal distances are resolved by training-row index.
class KnnModel {
public:
    // k = 0 selects ceil(sqrt(n_train)).
    KnnModel(std::vector<LabeledFeatures> train, std::size_t k = 0);
    KnnModel(std::vector<LabeledFeatures> train, Standardizer standardizer, std::size_t k);

    std::size_t k() const noexcept { return k_; }
    const Standardizer& standardizer() const noexcept { return std_; }
    const std::vector<LabeledFeatures>& train() const noexcept { return train_; }

    // Fraction of the k nearest rows labelled 1.
    double classify(std::span<const double> query) const;
    // Mean label of the k nearest rows.
    double regress(std::span<const double> query) const;

private:
    std::vector<std::size_t> neighbours(std::span<const double> query) const;

    std::vector<LabeledFeatures> train_;
    Standardizer std_;
    std::vector<std::vector<double>> scaled_;
    std::size_t k_;
};

std::size_t default_knn_k(std::size_t n_train);

double knn_classify(const std::vector<LabeledFeatures>& train, std::span<const double> query, std::size_t k);
double knn_regress(const std::vector<LabeledFeatures>& train, std::span<const double> query, std::size_t k);

struct ScoredLabel {
    double score;
    int label;  // 0 or 1
};

struct RocSummary {
    double auc = 0.0;
    double optimal_threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
};

// Trapezoidal AUC with tied scores forming one step; the threshold maximizes
// TPR - FPR (the highest such threshold on ties) and predicts 1 for
// score >= threshold.
RocSummary roc_summary(std::span<const ScoredLabel> scores);

struct RegressionSummary {
    double rmse = 0.0;
    double mae = 0.0;
    double r2 = 0.0;
};

RegressionSummary regression_summary(std::span<const double> predicted, std::span<const double> actual);

struct TrainingSpec {
    Target target = Target::Confounder;
    std::vector<std::size_t> p_values{4, 5, 6};
    std::size_t trials_per_p = 100;
    std::uint64_t seed = 0;
    MeasureConfig config;
    PathMode path_mode = PathMode::Exhaustive;
    std::size_t path_samples = 1000;
    std::size_t n_samples = 1000;
    double confounder_probability = 0.5;
    std::size_t jobs = 1;
};

// One trial's generation inputs; reused by callers that need the same
// datasets under several feature settings.
struct TrialDraw {
    std::size_t p;
    std::uint64_t seed;
    bool with_confounders;
};
std::vector<TrialDraw> training_draws(const TrainingSpec& spec);

struct TrialData {
    GenParams params;
    Dataset data;
    GroundTruth truth;
};
TrialData generate_trial(const TrialDraw& draw, std::size_t n_samples);

// Label of one generated trial; ordering targets run the search on `lattice`.
double target_label(Target target, const TrialData& trial, OrderingLattice& lattice);

// Draws benchmark parameters per trial, computes moment features of the
// path distribution and attaches the requested label. Failing trials are
// skipped and reported through `on_skip`.
std::vector<LabeledFeatures> build_training_set(
    const TrainingSpec& spec, const std::function<void(const TrialDraw&, const std::string&)>& on_skip = {});

}  // namespace lspp
