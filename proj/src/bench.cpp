#include "lspp/bench.hpp"

#include <algorithm>
#include <array>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <map>
#include <optional>
#include <numeric>
#include <tuple>

#include "lspp/detail/stats.hpp"
#include "lspp/metrics.hpp"
#include "lspp/parallel.hpp"
#include "lspp/rng.hpp"
#include "lspp/search.hpp"
#include "lspp/simgen.hpp"

namespace lspp {

namespace {

constexpr std::array<std::string_view, 3> kMethodNames = {"spp-plr", "direct-plr", "spp-knn"};
constexpr double kMaxFailedFraction = 0.10;

std::vector<bool> confounder_levels(ConfounderMode m) {
    switch (m) {
        case ConfounderMode::Both: return {false, true};
        case ConfounderMode::With: return {true};
        case ConfounderMode::Without: return {false};
    }
    return {false};
}

struct Task {
    std::size_t p;
    std::size_t n;
    bool confounded;
    std::size_t trial;
    std::size_t p_index;
    std::size_t n_index;
};

TrialRecord run_method(Method method, const Dataset& data, const GroundTruth& truth, const PriorKnowledge& prior,
                       KRule k_rule) {
    MeasureConfig mc;
    mc.kind = method == Method::KnnSpp ? MeasureKind::KnnMi : MeasureKind::Plr;
    mc.k_rule = k_rule;
    const SearchResult r = method == Method::PlrDirect ? direct_lingam_order(data, mc, prior)
                                                       : shortest_path_order(data, mc, prior);
    TrialRecord rec;
    rec.ok = true;
    rec.e_o = ordering_error(r.order, truth.true_order).e_o;
    rec.runtime = r.wall_time;
    rec.edges = r.edges_evaluated;
    return rec;
}

}  // namespace

std::string_view to_string(Method m) { return kMethodNames[static_cast<std::size_t>(m)]; }

Method parse_method(std::string_view s) {
    for (std::size_t i = 0; i < kMethodNames.size(); ++i)
        if (kMethodNames[i] == s) return static_cast<Method>(i);
    fail(ErrorCode::InvalidArgument, "unknown method '" + std::string(s) + "'");
}

std::string_view to_string(ConfounderMode m) {
    switch (m) {
        case ConfounderMode::Both: return "both";
        case ConfounderMode::With: return "true";
        case ConfounderMode::Without: return "false";
    }
    return "false";
}

ConfounderMode parse_confounder_mode(std::string_view s) {
    if (s == "both") return ConfounderMode::Both;
    if (s == "true" || s == "with") return ConfounderMode::With;
    if (s == "false" || s == "without") return ConfounderMode::Without;
    fail(ErrorCode::InvalidArgument, "confounder mode must be both, true or false");
}

void BenchConfig::validate() const {
    require(trials >= 1, ErrorCode::InvalidArgument, "trials must be at least 1");
    require(!p_values.empty() && !n_values.empty(), ErrorCode::InvalidArgument, "p and n grids must not be empty");
    require(!methods.empty(), ErrorCode::InvalidArgument, "at least one method is required");
    require(!prior_fracs.empty(), ErrorCode::InvalidArgument, "at least one prior fraction is required");
    for (std::size_t p : p_values)
        require(p >= 2 && p <= FeatureSet::kMaxFeatures, ErrorCode::InvalidArgument, "p out of range");
    for (std::size_t n : n_values) require(n >= 2, ErrorCode::InvalidArgument, "n must be at least 2");
    for (double f : prior_fracs)
        require(f >= 0.0 && f <= 1.0, ErrorCode::InvalidArgument, "prior fractions must lie in [0, 1]");
    require(parallelism >= 1, ErrorCode::InvalidArgument, "parallelism must be at least 1");
}

std::uint64_t trial_data_seed(std::uint64_t seed, std::size_t p, std::size_t n, bool confounded, std::size_t trial) {
    return hash_combine({seed, p, n, confounded ? 1U : 0U, trial});
}

std::vector<Index> prior_sequence(std::span<const Index> true_order, double frac, std::uint64_t seed) {
    require(frac >= 0.0 && frac <= 1.0, ErrorCode::InvalidArgument, "prior fraction must lie in [0, 1]");
    const std::size_t p = true_order.size();
    const auto k = static_cast<std::size_t>(std::llround(frac * static_cast<double>(p)));
    if (k < 2) return {};
    std::vector<std::size_t> positions(p);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(positions.begin(), positions.end());
    positions.resize(k);
    std::sort(positions.begin(), positions.end());
    std::vector<Index> out;
    out.reserve(k);
    for (std::size_t pos : positions) out.push_back(true_order[pos]);
    return out;
}

BenchRun run_benchmark(const BenchConfig& config) {
    config.validate();
    const auto levels = confounder_levels(config.confounders);

    std::vector<Task> tasks;
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi)
        for (std::size_t ni = 0; ni < config.n_values.size(); ++ni)
            for (bool c : levels)
                for (std::size_t t = 0; t < config.trials; ++t)
                    tasks.push_back({config.p_values[pi], config.n_values[ni], c, t, pi, ni});

    const std::size_t per_task = config.methods.size() * config.prior_fracs.size();
    std::vector<TrialRecord> flat(tasks.size() * per_task);
    parallel_for(tasks.size(), config.parallelism, [&](std::size_t ti) {
        const Task& task = tasks[ti];
        const std::uint64_t data_seed = trial_data_seed(config.seed, task.p, task.n, task.confounded, task.trial);
        std::optional<std::pair<Dataset, GroundTruth>> generated;
        std::string gen_error;
        try {
            generated = generate(sample_benchmark_params(task.p, task.n, task.confounded, data_seed));
        } catch (const Error& e) {
            gen_error = e.what();
        }
        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
            for (std::size_t fi = 0; fi < config.prior_fracs.size(); ++fi) {
                const Method method = config.methods[mi];
                const double frac = config.prior_fracs[fi];
                TrialRecord rec;
                if (generated) {
                    try {
                        const auto seq = prior_sequence(generated->second.true_order, frac,
                                                        hash_combine({data_seed, hash_double(frac)}));
                        const PriorKnowledge prior = expand_prior({seq});
                        rec = run_method(method, generated->first, generated->second, prior, config.k_rule);
                    } catch (const Error& e) {
                        rec.ok = false;
                        rec.error = e.what();
                    }
                } else {
                    rec.error = gen_error;
                }
                rec.method = method;
                rec.p = task.p;
                rec.n = task.n;
                rec.confounded = task.confounded;
                rec.prior_frac = frac;
                rec.trial = task.trial;
                rec.data_seed = data_seed;
                flat[ti * per_task + mi * config.prior_fracs.size() + fi] = std::move(rec);
            }
        }
    });

    // Group into cells ordered by (p, n, method, confounded, prior_frac).
    using Key = std::tuple<std::size_t, std::size_t, std::size_t, bool, std::size_t>;
    std::map<Key, std::vector<const TrialRecord*>> groups;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti)
        for (std::size_t mi = 0; mi < config.methods.size(); ++mi)
            for (std::size_t fi = 0; fi < config.prior_fracs.size(); ++fi) {
                const Task& t = tasks[ti];
                const Key key{t.p_index, t.n_index, mi, t.confounded, fi};
                groups[key].push_back(&flat[ti * per_task + mi * config.prior_fracs.size() + fi]);
            }

    BenchRun run;
    for (const auto& [key, recs] : groups) {
        BenchCell cell;
        const TrialRecord& first = *recs.front();
        cell.method = first.method;
        cell.p = first.p;
        cell.n = first.n;
        cell.confounded = first.confounded;
        cell.prior_frac = first.prior_frac;
        double eo = 0.0, edges = 0.0;
        std::chrono::nanoseconds::rep runtime = 0;
        for (const TrialRecord* r : recs) {
            run.records.push_back(*r);
            if (!r->ok) {
                ++cell.failed;
                continue;
            }
            ++cell.trials;
            eo += r->e_o;
            edges += static_cast<double>(r->edges);
            runtime += r->runtime.count();
        }
        if (cell.trials > 0) {
            const double k = static_cast<double>(cell.trials);
            cell.mean_eo = eo / k;
            cell.mean_edges = edges / k;
            cell.mean_runtime = std::chrono::nanoseconds(runtime / static_cast<std::chrono::nanoseconds::rep>(cell.trials));
        }
        cell.valid = cell.trials > 0 &&
                     static_cast<double>(cell.failed) <= kMaxFailedFraction * static_cast<double>(recs.size());
        run.cells.push_back(cell);
    }
    return run;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorCode::LengthMismatch, "paired samples differ in length");
    require(a.size() >= 2, ErrorCode::InvalidArgument, "paired t-test needs at least 2 pairs");
    const std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    const double dn = static_cast<double>(n);
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / dn;
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (dn - 1.0));

    TTestResult r;
    r.n = n;
    r.mean_diff = mean;
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) return r;
    // differences equal up to rounding leave no spread to test against
    if (detail::negligible_variance(ss / dn, d)) fail(ErrorCode::DegeneratePairs, "all paired differences are equal");
    r.t = mean / (sd / std::sqrt(dn));
    const boost::math::students_t dist(dn - 1.0);
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
    return r;
}

}  // namespace lspp
