#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lspp/adjacency.hpp"
#include "lspp/bench.hpp"
#include "lspp/metrics.hpp"
#include "lspp/model.hpp"
#include "lspp/pathdist.hpp"
#include "lspp/predict.hpp"
#include "lspp/search.hpp"

namespace lspp::io {

using Json = nlohmann::json;

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Comma-separated, header row of names, one row per sample.
Dataset parse_csv(std::string_view text);
std::string format_csv(const Dataset& data);

std::string read_text(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

Json parse_json(std::string_view text, std::string_view what);
// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

Json to_json(const Matrix& m);  // array of rows
Matrix matrix_from_json(const Json& j, std::size_t expected_rows = SIZE_MAX);

Json to_json(const GenParams& g);
GenParams gen_params_from_json(const Json& j);

Json to_json(const GroundTruth& t);
GroundTruth truth_from_json(const Json& j);

std::vector<std::vector<Index>> orderings_from_json(const Json& j);

Json to_json(const EdgeConstraints& c);
EdgeConstraints edge_constraints_from_json(const Json& j);

Json to_json(const PathDistribution& d);
PathDistribution path_distribution_from_json(const Json& j);

Json to_json(const MomentFeatures& f);
MomentFeatures moment_features_from_json(const Json& j);

Json to_json(const LabeledFeatures& r);
LabeledFeatures labeled_from_json(const Json& j);
std::string format_jsonl(const std::vector<LabeledFeatures>& rows);
std::vector<LabeledFeatures> parse_jsonl(std::string_view text);

Json to_json(const Standardizer& s);
Standardizer standardizer_from_json(const Json& j);

Json to_json(const RocSummary& r);
Json to_json(const RegressionSummary& r);
Json to_json(const EdgeReport& r);

Json to_json(const BenchCell& c);
BenchCell bench_cell_from_json(const Json& j);
Json to_json(const std::vector<BenchCell>& cells);
std::string format_cells_csv(const std::vector<BenchCell>& cells);

}  // namespace lspp::io
