#pragma once

// JSON formats shared by the CLI, the harness and the Python bindings.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "distrecon/geometry.hpp"
#include "distrecon/reconstructor.hpp"

namespace distrecon::io {

/// Array of rows, one per point.
nlohmann::json to_json(const PointConfig& p);
PointConfig points_from_json(const nlohmann::json& j);

/// {"n", "entries"}; unknown entries are null.
nlohmann::json to_json(const SquaredDistanceMatrix& d);
SquaredDistanceMatrix distances_from_json(const nlohmann::json& j);

/// Reveal file: {"n", "d", "rounds": [[[i, j, dist2], ...], ...]}.
struct RevealFile {
  int n = 0;
  int d = 0;
  std::vector<DistanceState> rounds;
};
nlohmann::json to_json(const RevealFile& r);
RevealFile reveal_file_from_json(const nlohmann::json& j);

/// One JSON object per line: {"u", "v", "base", "dist2", "round"}.
std::string closure_log_lines(const ClosureLog& log);

/// Pairs known in `state`, with provenance: [[i, j, dist2, "Inferred"], ...].
nlohmann::json known_pairs(const DistanceState& state);

nlohmann::json to_json(const ReductionStep& step);
nlohmann::json to_json(const PipelineResult& result);

std::string read_file(const std::filesystem::path& path);
/// Creates parent directories. Throws Io naming the path.
void write_file(const std::filesystem::path& path, const std::string& text);

/// Fixed formatting used for every floating-point value we print.
std::string format_double(double x);

}  // namespace distrecon::io
