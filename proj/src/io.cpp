#include "lspp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace lspp::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_number(std::string_view s, std::size_t line) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": '" + std::string(s) + "' is not a number");
    if (!std::isfinite(v))
        fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": non-finite value '" + std::string(s) + "'");
    return v;
}

template <typename T>
T get(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(ErrorCode::ParseError, std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("key '") + key + "': " + e.what());
    }
}

std::vector<Index> index_list(const Json& j) {
    if (!j.is_array()) fail(ErrorCode::ParseError, "expected an array of indices");
    std::vector<Index> out;
    for (const auto& v : j) {
        if (!v.is_number_unsigned()) fail(ErrorCode::ParseError, "indices must be nonnegative integers");
        out.push_back(v.get<Index>());
    }
    return out;
}

Json pairs_to_json(const std::set<EdgeConstraints::Edge>& s) {
    Json a = Json::array();
    for (const auto& [c, e] : s) a.push_back({c, e});
    return a;
}

std::set<EdgeConstraints::Edge> pairs_from_json(const Json& j) {
    std::set<EdgeConstraints::Edge> out;
    if (!j.is_array()) fail(ErrorCode::ParseError, "expected an array of pairs");
    for (const auto& v : j) {
        const auto idx = index_list(v);
        if (idx.size() != 2) fail(ErrorCode::ParseError, "edges must be [cause, effect] pairs");
        out.insert({idx[0], idx[1]});
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) fail(ErrorCode::InvalidArgument, "could not format number");
    return std::string(buf, ptr);
}

Dataset parse_csv(std::string_view text) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    std::size_t line_no = 0;
    std::size_t rows = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (names.empty()) {
            for (auto f : fields) {
                if (f.size() >= 2 && f.front() == '"' && f.back() == '"') f = f.substr(1, f.size() - 2);
                if (f.empty()) fail(ErrorCode::ParseError, "header has an empty column name");
                names.emplace_back(f);
            }
            columns.resize(names.size());
            continue;
        }
        if (fields.size() != names.size())
            fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                            std::to_string(names.size()) + " fields, found " +
                                            std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) columns[c].push_back(parse_number(fields[c], line_no));
        ++rows;
    }
    if (names.empty()) fail(ErrorCode::ParseError, "CSV has no header");
    if (rows == 0) fail(ErrorCode::ParseError, "CSV has no data rows");
    try {
        return Dataset(Matrix::from_columns(columns), names);
    } catch (const Error& e) {
        fail(ErrorCode::ParseError, e.what());
    }
}

std::string format_csv(const Dataset& data) {
    std::string out;
    const auto& names = data.names();
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (c) out += ',';
        out += names[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < data.n_samples(); ++r) {
        for (std::size_t c = 0; c < data.n_features(); ++c) {
            if (c) out += ',';
            out += format_double(data.values()(r, c));
        }
        out += '\n';
    }
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) fail(ErrorCode::InvalidArgument, "write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

Json parse_json(std::string_view text, std::string_view what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::ParseError, std::string(what) + ": " + e.what());
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, std::size_t expected_rows) {
    if (!j.is_array()) fail(ErrorCode::ParseError, "matrix must be an array of rows");
    const std::size_t rows = j.size();
    if (expected_rows != SIZE_MAX && rows != expected_rows)
        fail(ErrorCode::ParseError, "matrix has " + std::to_string(rows) + " rows, expected " +
                                        std::to_string(expected_rows));
    const std::size_t cols = rows == 0 ? 0 : j.front().size();
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) fail(ErrorCode::ParseError, "matrix rows differ in length");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) fail(ErrorCode::ParseError, "matrix entries must be numbers");
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

Json to_json(const GenParams& g) {
    return {{"p", g.p},
            {"n_samples", g.n_samples},
            {"sparsity", g.sparsity},
            {"n_confounders", g.n_confounders},
            {"confoundedness", g.confoundedness},
            {"confounding_strength_exp", g.confounding_strength_exp},
            {"noise_family", g.noise_family},
            {"seed", g.seed}};
}

GenParams gen_params_from_json(const Json& j) {
    GenParams g;
    g.p = get<std::size_t>(j, "p");
    g.n_samples = get<std::size_t>(j, "n_samples");
    g.sparsity = get<double>(j, "sparsity");
    g.n_confounders = get<std::size_t>(j, "n_confounders");
    g.confoundedness = get<double>(j, "confoundedness");
    g.confounding_strength_exp = get<double>(j, "confounding_strength_exp");
    g.noise_family = get<std::string>(j, "noise_family");
    g.seed = get<std::uint64_t>(j, "seed");
    return g;
}

Json to_json(const GroundTruth& t) {
    return {{"B", to_json(t.b)}, {"Lambda", to_json(t.lambda)}, {"true_order", t.true_order}, {"params", to_json(t.params)}};
}

GroundTruth truth_from_json(const Json& j) {
    GroundTruth t;
    t.params = gen_params_from_json(get<Json>(j, "params"));
    t.b = matrix_from_json(get<Json>(j, "B"), t.params.p);
    t.lambda = matrix_from_json(get<Json>(j, "Lambda"), t.params.p);
    t.true_order = index_list(get<Json>(j, "true_order"));
    return t;
}

std::vector<std::vector<Index>> orderings_from_json(const Json& j) {
    if (!j.is_array()) fail(ErrorCode::ParseError, "prior must be a list of index sequences");
    std::vector<std::vector<Index>> out;
    for (const auto& seq : j) out.push_back(index_list(seq));
    return out;
}

Json to_json(const EdgeConstraints& c) {
    return {{"required", pairs_to_json(c.required)}, {"forbidden", pairs_to_json(c.forbidden)}};
}

EdgeConstraints edge_constraints_from_json(const Json& j) {
    EdgeConstraints c;
    if (j.contains("required")) c.required = pairs_from_json(j.at("required"));
    if (j.contains("forbidden")) c.forbidden = pairs_from_json(j.at("forbidden"));
    c.validate();
    return c;
}

Json to_json(const PathDistribution& d) { return {{"mode", to_string(d.mode)}, {"lengths", d.lengths}}; }

PathDistribution path_distribution_from_json(const Json& j) {
    PathDistribution d;
    d.mode = parse_path_mode(get<std::string>(j, "mode"));
    d.lengths = get<std::vector<double>>(j, "lengths");
    d.sample_size = d.lengths.size();
    return d;
}

Json to_json(const MomentFeatures& f) { return {{"log_epsilon", f.log_epsilon}, {"moments", f.moments}}; }

MomentFeatures moment_features_from_json(const Json& j) {
    MomentFeatures f;
    f.log_epsilon = get<double>(j, "log_epsilon");
    f.moments = get<std::vector<double>>(j, "moments");
    if (f.moments.size() != kMomentCount)
        fail(ErrorCode::ParseError, "expected " + std::to_string(kMomentCount) + " moments");
    return f;
}

Json to_json(const LabeledFeatures& r) {
    return {{"features", r.features},
            {"label", r.label},
            {"meta", {{"p", r.meta.p}, {"seed", r.meta.seed}, {"target", r.meta.target}}}};
}

LabeledFeatures labeled_from_json(const Json& j) {
    LabeledFeatures r;
    r.features = get<std::vector<double>>(j, "features");
    r.label = get<double>(j, "label");
    const Json meta = get<Json>(j, "meta");
    r.meta.p = get<std::size_t>(meta, "p");
    r.meta.seed = get<std::uint64_t>(meta, "seed");
    r.meta.target = get<std::string>(meta, "target");
    return r;
}

std::string format_jsonl(const std::vector<LabeledFeatures>& rows) {
    std::string out;
    for (const auto& r : rows) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

std::vector<LabeledFeatures> parse_jsonl(std::string_view text) {
    std::vector<LabeledFeatures> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        const std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        out.push_back(labeled_from_json(parse_json(line, "line " + std::to_string(line_no))));
    }
    return out;
}

Json to_json(const Standardizer& s) { return {{"mean", s.mean}, {"scale", s.scale}}; }

Standardizer standardizer_from_json(const Json& j) {
    Standardizer s;
    s.mean = get<std::vector<double>>(j, "mean");
    s.scale = get<std::vector<double>>(j, "scale");
    if (s.mean.size() != s.scale.size()) fail(ErrorCode::ParseError, "standardizer vectors differ in length");
    return s;
}

Json to_json(const RocSummary& r) {
    return {{"auc", r.auc},
            {"optimal_threshold", r.optimal_threshold},
            {"precision", r.precision},
            {"recall", r.recall},
            {"accuracy", r.accuracy}};
}

Json to_json(const RegressionSummary& r) { return {{"rmse", r.rmse}, {"mae", r.mae}, {"r2", r.r2}}; }

Json to_json(const EdgeReport& r) {
    return {{"required_captured", r.required_captured},
            {"required_total", r.required_total},
            {"forbidden_captured", r.forbidden_captured},
            {"forbidden_total", r.forbidden_total}};
}

Json to_json(const BenchCell& c) {
    return {{"method", to_string(c.method)},   {"p", c.p},
            {"n", c.n},                        {"confounded", c.confounded},
            {"prior_frac", c.prior_frac},      {"trials", c.trials},
            {"failed", c.failed},              {"valid", c.valid},
            {"mean_eo", c.mean_eo},            {"mean_runtime_ns", c.mean_runtime.count()},
            {"mean_edges", c.mean_edges}};
}

BenchCell bench_cell_from_json(const Json& j) {
    BenchCell c;
    c.method = parse_method(get<std::string>(j, "method"));
    c.p = get<std::size_t>(j, "p");
    c.n = get<std::size_t>(j, "n");
    c.confounded = get<bool>(j, "confounded");
    c.prior_frac = get<double>(j, "prior_frac");
    c.trials = get<std::size_t>(j, "trials");
    c.failed = get<std::size_t>(j, "failed");
    c.valid = get<bool>(j, "valid");
    c.mean_eo = get<double>(j, "mean_eo");
    c.mean_runtime = std::chrono::nanoseconds(get<std::int64_t>(j, "mean_runtime_ns"));
    c.mean_edges = get<double>(j, "mean_edges");
    return c;
}

Json to_json(const std::vector<BenchCell>& cells) {
    Json a = Json::array();
    for (const auto& c : cells) a.push_back(to_json(c));
    return a;
}

std::string format_cells_csv(const std::vector<BenchCell>& cells) {
    std::string out = "method,p,n,confounded,prior_frac,trials,failed,valid,mean_eo,mean_runtime_ns,mean_edges\n";
    for (const auto& c : cells) {
        out += std::string(to_string(c.method)) + ',' + std::to_string(c.p) + ',' + std::to_string(c.n) + ',' +
               (c.confounded ? "true" : "false") + ',' + format_double(c.prior_frac) + ',' +
               std::to_string(c.trials) + ',' + std::to_string(c.failed) + ',' + (c.valid ? "true" : "false") +
               ',' + format_double(c.mean_eo) + ',' + std::to_string(c.mean_runtime.count()) + ',' +
               format_double(c.mean_edges) + '\n';
    }
    return out;
}

}  // namespace lspp::io
