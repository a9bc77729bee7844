// lspp: command-line front end.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "json_config.hpp"
#include "lspp/adjacency.hpp"
#include "lspp/bench.hpp"
#include "lspp/io.hpp"
#include "lspp/metrics.hpp"
#include "lspp/pathdist.hpp"
#include "lspp/predict.hpp"
#include "lspp/search.hpp"
#include "lspp/simgen.hpp"

namespace fs = std::filesystem;
using lspp::io::Json;

namespace {

enum ExitCode {
    kOk = 0,
    kValidation = 2,
    kInfeasiblePrior = 3,
    kSizeCap = 4,
    kNumeric = 5,
    kEmptyTraining = 6,
    kSingleClass = 7,
};

int exit_code_for(lspp::ErrorCode code) {
    using lspp::ErrorCode;
    switch (code) {
        case ErrorCode::PriorUnsatisfiable: return kInfeasiblePrior;
        case ErrorCode::TooManyFeatures: return kSizeCap;
        case ErrorCode::EmptyTrainingSet: return kEmptyTraining;
        case ErrorCode::SingleClass: return kSingleClass;
        case ErrorCode::ZeroVariance:
        case ErrorCode::DegenerateCorrelation:
        case ErrorCode::GenerationFailed:
        case ErrorCode::SingularDesign:
        case ErrorCode::DegenerateDistribution:
        case ErrorCode::DegeneratePairs: return kNumeric;
        default: return kValidation;
    }
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fnv1a_hex(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Common {
    std::string out_dir = ".";
    bool no_timing = false;
    std::size_t jobs = 1;
};

void add_common(CLI::App* sub, Common& c, bool with_jobs) {
    sub->add_option("-o,--out-dir", c.out_dir, "Directory for output files")->capture_default_str();
    sub->add_flag("--no-timing", c.no_timing, "Zero all timing fields so outputs are byte-stable");
    if (with_jobs)
        sub->add_option("-j,--jobs", c.jobs, "Worker threads")
            ->envname("LSPP_JOBS")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
}

// Collects output files and writes the manifest last.
class Run {
public:
    Run(std::string command, const Common& common, std::string digest)
        : command_(std::move(command)), common_(common), digest_(std::move(digest)),
          started_(common.no_timing ? "" : utc_now()) {}

    fs::path path(const std::string& name) const { return fs::path(common_.out_dir) / name; }

    // Outputs are recorded relative to the output directory.
    void write(const std::string& name, std::string_view content) {
        lspp::io::write_text_atomic(path(name), content);
        outputs_.push_back(name);
    }

    void finish() {
        Json m = {{"command", command_},
                  {"config_digest", digest_},
                  {"tool_version", LSPP_VERSION},
                  {"started", started_},
                  {"finished", common_.no_timing ? "" : utc_now()},
                  {"outputs", outputs_}};
        lspp::io::write_text_atomic(path("manifest.json"), lspp::io::dump(m));
    }

    bool timing() const { return !common_.no_timing; }

private:
    std::string command_;
    const Common& common_;
    std::string digest_;
    std::string started_;
    std::vector<std::string> outputs_;
};

lspp::Dataset load_csv(const std::string& path) { return lspp::io::parse_csv(lspp::io::read_text(path)); }

lspp::MeasureConfig measure_config(const std::string& measure, const std::string& k_rule) {
    lspp::MeasureConfig mc;
    mc.kind = lspp::parse_measure_kind(measure);
    mc.k_rule = lspp::parse_k_rule(k_rule);
    return mc;
}

// --- gen -------------------------------------------------------------------

struct GenOpts {
    lspp::GenParams params;
};

void run_gen(const GenOpts& o, Run& run) {
    const auto [data, truth] = lspp::generate(o.params);
    run.write("data.csv", lspp::io::format_csv(data));
    run.write("truth.json", lspp::io::dump(lspp::io::to_json(truth)));
}

// --- discover --------------------------------------------------------------

struct DiscoverOpts {
    std::string input;
    std::string method = "spp-plr";
    std::string k_rule = "sqrt";
    std::string prior;
    std::string truth;
    std::string constraints;
    std::string out = "result.json";
    bool adjacency = false;
};

void run_discover(const DiscoverOpts& o, Run& run) {
    const lspp::Dataset data = load_csv(o.input);
    lspp::PriorKnowledge prior;
    if (!o.prior.empty())
        prior = lspp::expand_prior(
            lspp::io::orderings_from_json(lspp::io::parse_json(lspp::io::read_text(o.prior), o.prior)));
    const lspp::Method method = lspp::parse_method(o.method);
    lspp::MeasureConfig mc;
    mc.kind = method == lspp::Method::KnnSpp ? lspp::MeasureKind::KnnMi : lspp::MeasureKind::Plr;
    mc.k_rule = lspp::parse_k_rule(o.k_rule);
    const lspp::SearchResult r = method == lspp::Method::PlrDirect ? lspp::direct_lingam_order(data, mc, prior)
                                                                   : lspp::shortest_path_order(data, mc, prior);

    Json j = {{"method", o.method},
              {"order", r.order.order},
              {"step_costs", r.order.step_costs},
              {"total_cost", r.order.total_cost},
              {"edges_evaluated", r.edges_evaluated},
              {"states_expanded", r.states_expanded},
              {"runtime_ms", run.timing() ? std::chrono::duration<double, std::milli>(r.wall_time).count() : 0.0}};
    if (!o.truth.empty()) {
        const auto truth = lspp::io::truth_from_json(lspp::io::parse_json(lspp::io::read_text(o.truth), o.truth));
        const auto err = lspp::ordering_error(r.order, truth.true_order);
        j["e_o"] = err.e_o;
        j["wrong_pairs"] = err.wrong_pairs;
    }
    if (o.adjacency) {
        const lspp::WeightedDag dag = lspp::estimate_adjacency(data, r.order);
        j["b_hat"] = lspp::io::to_json(dag.b_hat);
        Json edges = Json::array();
        for (const auto& [c, e] : dag.edges) edges.push_back({c, e});
        j["edges"] = edges;
        if (!o.constraints.empty()) {
            const auto cons = lspp::io::edge_constraints_from_json(
                lspp::io::parse_json(lspp::io::read_text(o.constraints), o.constraints));
            j["edge_report"] = lspp::io::to_json(lspp::edge_report(dag, cons));
        }
    } else if (!o.constraints.empty()) {
        lspp::fail(lspp::ErrorCode::InvalidArgument, "--constraints needs --adjacency");
    }
    run.write(o.out, lspp::io::dump(j));
}

// --- pathdist / features ----------------------------------------------------

struct PathOpts {
    std::string input;
    std::string pathdist;  // features only: reuse an existing distribution
    std::string mode = "exhaustive";
    std::string measure = "plr";
    std::string k_rule = "sqrt";
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    std::size_t cap = lspp::kDefaultEnumerationCap;
    double log_epsilon = lspp::kDefaultLogEpsilon;
};

lspp::PathDistribution compute_distribution(const PathOpts& o) {
    const lspp::Dataset data = load_csv(o.input);
    const auto mc = measure_config(o.measure, o.k_rule);
    if (lspp::parse_path_mode(o.mode) == lspp::PathMode::Exhaustive) return lspp::enumerate_paths(data, mc, o.cap);
    return lspp::sample_paths(data, mc, o.samples, o.seed);
}

void run_pathdist(const PathOpts& o, Run& run) {
    const auto dist = compute_distribution(o);
    run.write("pathdist.json", lspp::io::dump(lspp::io::to_json(dist)));
    run.write("features.json", lspp::io::dump(lspp::io::to_json(lspp::moment_features(dist, o.log_epsilon))));
}

void run_features(const PathOpts& o, Run& run) {
    if (o.input.empty() == o.pathdist.empty())
        lspp::fail(lspp::ErrorCode::InvalidArgument, "give exactly one of --input or --pathdist");
    const auto dist = o.pathdist.empty() ? compute_distribution(o)
                                         : lspp::io::path_distribution_from_json(
                                               lspp::io::parse_json(lspp::io::read_text(o.pathdist), o.pathdist));
    run.write("features.json", lspp::io::dump(lspp::io::to_json(lspp::moment_features(dist, o.log_epsilon))));
}

// --- train / predict / eval -------------------------------------------------

struct TrainOpts {
    std::string target = "confounder";
    std::vector<std::size_t> p_values{4, 5, 6};
    std::size_t trials = 100;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string mode = "exhaustive";
    std::size_t samples = 1000;
    std::string measure = "plr";
    std::string k_rule = "sqrt";
    double confounder_prob = 0.5;
    std::size_t k = 0;
};

lspp::TrainingSpec training_spec(const TrainOpts& o, std::size_t jobs) {
    lspp::TrainingSpec s;
    s.target = lspp::parse_target(o.target);
    s.p_values = o.p_values;
    s.trials_per_p = o.trials;
    s.seed = o.seed;
    s.config = measure_config(o.measure, o.k_rule);
    s.path_mode = lspp::parse_path_mode(o.mode);
    s.path_samples = o.samples;
    s.n_samples = o.n;
    s.confounder_probability = o.confounder_prob;
    s.jobs = jobs;
    return s;
}

std::vector<lspp::LabeledFeatures> build_rows(const lspp::TrainingSpec& spec) {
    return lspp::build_training_set(spec, [](const lspp::TrialDraw& d, const std::string& why) {
        std::cerr << "warning: skipped trial (p=" << d.p << ", seed=" << d.seed << "): " << why << "\n";
    });
}

struct Model {
    lspp::Target target;
    std::unique_ptr<lspp::KnnModel> knn;
};

Model load_model(const std::string& path) {
    const std::string text = lspp::io::read_text(path);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        lspp::fail(lspp::ErrorCode::EmptyTrainingSet, "model file '" + path + "' is empty");
    const Json j = lspp::io::parse_json(text, path);
    if (!j.is_object() || !j.contains("train") || !j.at("train").is_array() || j.at("train").empty())
        lspp::fail(lspp::ErrorCode::EmptyTrainingSet, "model file '" + path + "' has no training rows");
    std::vector<lspp::LabeledFeatures> rows;
    for (const auto& r : j.at("train")) rows.push_back(lspp::io::labeled_from_json(r));
    Model m;
    m.target = lspp::parse_target(j.value("target", ""));
    m.knn = std::make_unique<lspp::KnnModel>(std::move(rows), lspp::io::standardizer_from_json(j.at("standardizer")),
                                             j.value("k", std::size_t{0}));
    return m;
}

double score(const Model& m, std::span<const double> x) {
    return lspp::is_binary(m.target) ? m.knn->classify(x) : m.knn->regress(x);
}

void run_train(const TrainOpts& o, const Common& c, Run& run) {
    const auto rows = build_rows(training_spec(o, c.jobs));
    if (rows.empty()) lspp::fail(lspp::ErrorCode::EmptyTrainingSet, "every training trial failed");
    const lspp::KnnModel knn(rows, o.k);
    Json model = {{"target", o.target},
                  {"k", knn.k()},
                  {"standardizer", lspp::io::to_json(knn.standardizer())},
                  {"train", Json::array()}};
    for (const auto& r : rows) model["train"].push_back(lspp::io::to_json(r));
    run.write("train.jsonl", lspp::io::format_jsonl(rows));
    run.write("model.json", lspp::io::dump(model));
}

struct PredictOpts {
    std::string model;
    std::string features;
    std::string queries;
    std::string out = "predictions.json";
};

void run_predict(const PredictOpts& o, Run& run) {
    const Model m = load_model(o.model);
    if (o.features.empty() == o.queries.empty())
        lspp::fail(lspp::ErrorCode::InvalidArgument, "give exactly one of --features or --queries");
    Json preds = Json::array();
    if (!o.features.empty()) {
        const auto f = lspp::io::moment_features_from_json(lspp::io::parse_json(lspp::io::read_text(o.features), o.features));
        preds.push_back(score(m, f.moments));
    } else {
        for (const auto& r : lspp::io::parse_jsonl(lspp::io::read_text(o.queries))) preds.push_back(score(m, r.features));
    }
    run.write(o.out,
              lspp::io::dump({{"target", lspp::to_string(m.target)}, {"k", m.knn->k()}, {"predictions", preds}}));
}

struct EvalOpts {
    std::string model;
    std::string test;
    TrainOpts grid;  // used when no --test file is given
    std::string out = "eval.json";
};

void run_eval(const EvalOpts& o, const Common& c, Run& run) {
    const Model m = load_model(o.model);
    std::vector<lspp::LabeledFeatures> test;
    if (!o.test.empty()) {
        test = lspp::io::parse_jsonl(lspp::io::read_text(o.test));
    } else {
        TrainOpts g = o.grid;
        g.target = std::string(lspp::to_string(m.target));
        test = build_rows(training_spec(g, c.jobs));
    }
    if (test.empty()) lspp::fail(lspp::ErrorCode::EmptyTrainingSet, "no test rows");
    Json j = {{"target", lspp::to_string(m.target)}, {"n_test", test.size()}, {"k", m.knn->k()}};
    if (lspp::is_binary(m.target)) {
        std::vector<lspp::ScoredLabel> scored;
        for (const auto& r : test) scored.push_back({score(m, r.features), r.label == 1.0 ? 1 : 0});
        j["roc"] = lspp::io::to_json(lspp::roc_summary(scored));
    } else {
        std::vector<double> pred, actual;
        for (const auto& r : test) {
            pred.push_back(score(m, r.features));
            actual.push_back(r.label);
        }
        j["regression"] = lspp::io::to_json(lspp::regression_summary(pred, actual));
    }
    run.write(o.out, lspp::io::dump(j));
}

// --- bench -----------------------------------------------------------------

struct BenchOpts {
    std::vector<std::size_t> p_values{5};
    std::vector<std::size_t> n_values{1000};
    std::size_t trials = 10;
    std::vector<std::string> methods{"spp-plr", "direct-plr"};
    std::string confounders = "false";
    std::vector<double> prior_fracs{0.0};
    std::uint64_t seed = 0;
    std::string k_rule = "sqrt";
};

void run_bench(const BenchOpts& o, const Common& c, Run& run) {
    lspp::BenchConfig cfg;
    cfg.p_values = o.p_values;
    cfg.n_values = o.n_values;
    cfg.trials = o.trials;
    cfg.methods.clear();
    for (const auto& m : o.methods) cfg.methods.push_back(lspp::parse_method(m));
    cfg.confounders = lspp::parse_confounder_mode(o.confounders);
    cfg.prior_fracs = o.prior_fracs;
    cfg.seed = o.seed;
    cfg.parallelism = c.jobs;
    cfg.k_rule = lspp::parse_k_rule(o.k_rule);

    auto result = lspp::run_benchmark(cfg);
    if (!run.timing())
        for (auto& cell : result.cells) cell.mean_runtime = std::chrono::nanoseconds{0};

    std::printf("%-11s %4s %6s %5s %6s %6s %8s %10s %10s\n", "method", "p", "n", "conf", "prior", "trials", "mean_eo",
                "runtime_ms", "edges");
    for (const auto& cell : result.cells) {
        std::printf("%-11s %4zu %6zu %5s %6.2f %6zu %8.4f %10.3f %10.2f%s\n", std::string(lspp::to_string(cell.method)).c_str(),
                    cell.p, cell.n, cell.confounded ? "yes" : "no", cell.prior_frac, cell.trials, cell.mean_eo,
                    std::chrono::duration<double, std::milli>(cell.mean_runtime).count(), cell.mean_edges,
                    cell.valid ? "" : "  (invalid)");
        if (!cell.valid)
            std::cerr << "warning: cell " << lspp::to_string(cell.method) << " p=" << cell.p << " n=" << cell.n
                      << " has " << cell.failed << " failed trials\n";
    }
    run.write("cells.json", lspp::io::dump(lspp::io::to_json(result.cells)));
    run.write("cells.csv", lspp::io::format_cells_csv(result.cells));
}

std::string find_subcommand(int argc, char** argv, const std::vector<std::string>& names) {
    for (int i = 1; i < argc; ++i)
        for (const auto& n : names)
            if (n == argv[i]) return n;
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app("Causal ordering by shortest-path search over the subset lattice", "lspp");
    app.set_version_flag("--version", LSPP_VERSION);
    auto formatter = std::make_shared<lspp::cli::JsonConfig>();
    app.config_formatter(formatter);
    app.set_config("--config", "", "JSON file with option values; command-line flags take precedence");
    app.require_subcommand(1);

    Common common;

    GenOpts gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset and its ground truth");
    gen_cmd->add_option("--p", gen.params.p, "Number of observed variables")->capture_default_str();
    gen_cmd->add_option("--n", gen.params.n_samples, "Number of samples")->capture_default_str();
    gen_cmd->add_option("--sparsity", gen.params.sparsity, "Probability an edge is absent")->capture_default_str();
    gen_cmd->add_option("--confounders", gen.params.n_confounders, "Number of latent confounders")->capture_default_str();
    gen_cmd->add_option("--confoundedness", gen.params.confoundedness, "Extra-child probability per confounder")
        ->capture_default_str();
    gen_cmd->add_option("--strength-exp", gen.params.confounding_strength_exp, "Confounder scale exponent s (10^s)")
        ->capture_default_str();
    gen_cmd->add_option("--noise", gen.params.noise_family, "Noise family name or 'mixed'")->capture_default_str();
    gen_cmd->add_option("--seed", gen.params.seed, "Random seed")->capture_default_str();
    add_common(gen_cmd, common, false);

    DiscoverOpts disc;
    auto* disc_cmd = app.add_subcommand("discover", "Estimate the causal order of a CSV dataset");
    disc_cmd->add_option("-i,--input", disc.input, "Input CSV")->required();
    disc_cmd->add_option("--method", disc.method, "spp-plr, spp-knn or direct-plr")->capture_default_str();
    disc_cmd->add_option("--k-rule", disc.k_rule, "kNN k rule: fraction5, fraction10 or sqrt")->capture_default_str();
    disc_cmd->add_option("--prior", disc.prior, "JSON list of index sequences giving known relative orders");
    disc_cmd->add_flag("--adjacency", disc.adjacency, "Also estimate edge weights by adaptive lasso");
    disc_cmd->add_option("--constraints", disc.constraints, "JSON required/forbidden edges to score (needs --adjacency)");
    disc_cmd->add_option("--truth", disc.truth, "truth.json to report the ordering error against");
    disc_cmd->add_option("--out", disc.out, "Result file name inside the output directory")->capture_default_str();
    add_common(disc_cmd, common, false);

    PathOpts path;
    auto add_path_opts = [&](CLI::App* sub) {
        sub->add_option("--mode", path.mode, "exhaustive or sample")->capture_default_str();
        sub->add_option("--samples", path.samples, "Sampled orderings")->capture_default_str();
        sub->add_option("--seed", path.seed, "Sampling seed")->capture_default_str();
        sub->add_option("--cap", path.cap, "Largest p for exhaustive enumeration")->capture_default_str();
        sub->add_option("--measure", path.measure, "plr or knn")->capture_default_str();
        sub->add_option("--k-rule", path.k_rule, "kNN k rule")->capture_default_str();
        sub->add_option("--log-epsilon", path.log_epsilon, "Offset added before the log transform")
            ->capture_default_str();
        add_common(sub, common, false);
    };
    auto* pd_cmd = app.add_subcommand("pathdist", "Path-length distribution and its moment features");
    pd_cmd->add_option("-i,--input", path.input, "Input CSV")->required();
    add_path_opts(pd_cmd);
    auto* feat_cmd = app.add_subcommand("features", "Moment features from a CSV or a saved distribution");
    feat_cmd->add_option("-i,--input", path.input, "Input CSV");
    feat_cmd->add_option("--pathdist", path.pathdist, "pathdist.json to reuse");
    add_path_opts(feat_cmd);

    TrainOpts train;
    auto add_grid_opts = [](CLI::App* sub, TrainOpts& t, const std::string& prefix) {
        sub->add_option("--" + prefix + "p-values", t.p_values, "Feature counts")->delimiter(',')->capture_default_str();
        sub->add_option("--" + prefix + "trials", t.trials, "Trials per feature count")->capture_default_str();
        sub->add_option("--" + prefix + "n", t.n, "Samples per dataset")->capture_default_str();
        sub->add_option("--" + prefix + "seed", t.seed, "Seed")->capture_default_str();
        sub->add_option("--" + prefix + "mode", t.mode, "exhaustive or sample")->capture_default_str();
        sub->add_option("--" + prefix + "samples", t.samples, "Sampled orderings per dataset")->capture_default_str();
        sub->add_option("--" + prefix + "measure", t.measure, "plr or knn")->capture_default_str();
        sub->add_option("--" + prefix + "k-rule", t.k_rule, "kNN k rule for the measure")->capture_default_str();
        sub->add_option("--" + prefix + "confounder-prob", t.confounder_prob, "Probability a trial is confounded")
            ->capture_default_str();
    };
    auto* train_cmd = app.add_subcommand("train", "Build a labelled training set and a kNN model");
    train_cmd->add_option("--target", train.target,
                          "confounder, sparsity_gt_half, sparsity_value, spp_exact, direct_exact, spp_eo, direct_eo")
        ->capture_default_str();
    train_cmd->add_option("--k", train.k, "Neighbours (0: ceil(sqrt(n)))")->capture_default_str();
    add_grid_opts(train_cmd, train, "");
    add_common(train_cmd, common, true);

    PredictOpts pred;
    auto* pred_cmd = app.add_subcommand("predict", "Score feature vectors with a trained model");
    pred_cmd->add_option("--model", pred.model, "model.json")->required();
    pred_cmd->add_option("--features", pred.features, "features.json of one dataset");
    pred_cmd->add_option("--queries", pred.queries, "JSONL rows to score");
    pred_cmd->add_option("--out", pred.out, "Output file name")->capture_default_str();
    add_common(pred_cmd, common, false);

    EvalOpts eval;
    eval.grid.p_values = {7};
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on held-out rows");
    eval_cmd->add_option("--model", eval.model, "model.json")->required();
    eval_cmd->add_option("--test", eval.test, "JSONL test rows; otherwise generated from the test-* grid");
    eval_cmd->add_option("--out", eval.out, "Output file name")->capture_default_str();
    add_grid_opts(eval_cmd, eval.grid, "test-");
    add_common(eval_cmd, common, true);

    BenchOpts bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run the simulation benchmark grid");
    bench_cmd->add_option("--p", bench.p_values, "Feature counts")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--n", bench.n_values, "Sample sizes")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--trials", bench.trials, "Trials per cell")->capture_default_str();
    bench_cmd->add_option("--methods", bench.methods, "spp-plr, direct-plr, spp-knn")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--confounders", bench.confounders, "both, true or false")->capture_default_str();
    bench_cmd->add_option("--prior-fracs", bench.prior_fracs, "Prior knowledge fractions")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Seed")->capture_default_str();
    bench_cmd->add_option("--k-rule", bench.k_rule, "kNN k rule")->capture_default_str();
    add_common(bench_cmd, common, true);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
    std::vector<std::string> names;
    for (auto* sub : app.get_subcommands({})) names.push_back(sub->get_name());
    formatter->set_section(find_subcommand(argc, argv, names));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        Json resolved = lspp::io::parse_json(app.config_to_str(false, false), "resolved options");
        resolved.erase("config");
        for (auto& [key, value] : resolved.items())
            if (value.is_object()) value.erase("out-dir");
        Run run(active->get_name(), common, fnv1a_hex(resolved.dump()));

        if (active == gen_cmd) run_gen(gen, run);
        else if (active == disc_cmd) run_discover(disc, run);
        else if (active == pd_cmd) run_pathdist(path, run);
        else if (active == feat_cmd) run_features(path, run);
        else if (active == train_cmd) run_train(train, common, run);
        else if (active == pred_cmd) run_predict(pred, run);
        else if (active == eval_cmd) run_eval(eval, common, run);
        else if (active == bench_cmd) run_bench(bench, common, run);
        run.finish();
    } catch (const lspp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kOk;
}
