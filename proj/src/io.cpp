#include "distrecon/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace distrecon::io {

using nlohmann::json;

json to_json(const PointConfig& p) {
  json rows = json::array();
  for (int i = 0; i < p.size(); ++i) {
    json row = json::array();
    for (int c = 0; c < p.dim; ++c) row.push_back(p.coords(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

PointConfig points_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::Config, "points: expected a nonempty array of rows");
  const auto dim = j.front().size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != dim) {
      throw Error(ErrorKind::Config, "points[" + std::to_string(r) + "]: expected " + std::to_string(dim) + " numbers");
    }
    for (std::size_t c = 0; c < dim; ++c) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
  }
  return PointConfig(static_cast<int>(dim), std::move(x));
}

json to_json(const SquaredDistanceMatrix& d) {
  json rows = json::array();
  for (int i = 0; i < d.size(); ++i) {
    json row = json::array();
    for (int k = 0; k < d.size(); ++k) row.push_back(d.known(i, k) ? json(d(i, k)) : json(nullptr));
    rows.push_back(std::move(row));
  }
  return {{"n", d.size()}, {"entries", rows}};
}

SquaredDistanceMatrix distances_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const json& rows = j.at("entries");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw Error(ErrorKind::Config, "entries: expected n rows");
  Eigen::MatrixXd e(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw Error(ErrorKind::Config, "entries[" + std::to_string(i) + "]: expected n values");
    for (int k = 0; k < n; ++k) e(i, k) = rows[i][k].is_null() ? SquaredDistanceMatrix::kUnknown : rows[i][k].get<double>();
  }
  return SquaredDistanceMatrix(std::move(e));
}

json to_json(const RevealFile& r) {
  json rounds = json::array();
  for (const auto& s : r.rounds) {
    json pairs = json::array();
    for (const auto& [i, k] : s.graph().edges()) pairs.push_back(json::array({i, k, s.dist2(i, k)}));
    rounds.push_back(std::move(pairs));
  }
  return {{"n", r.n}, {"d", r.d}, {"rounds", rounds}};
}

RevealFile reveal_file_from_json(const json& j) {
  RevealFile r;
  try {
    r.n = j.at("n").get<int>();
    r.d = j.at("d").get<int>();
    if (r.n < 1) throw Error(ErrorKind::Config, "n: must be >= 1");
    if (r.d < 1) throw Error(ErrorKind::Config, "d: must be >= 1");
    const json& rounds = j.at("rounds");
    for (std::size_t k = 0; k < rounds.size(); ++k) {
      DistanceState s(r.n);
      for (const auto& t : rounds[k]) {
        const int a = t.at(0).get<int>();
        const int b = t.at(1).get<int>();
        const double v = t.at(2).get<double>();
        if (a < 0 || b < 0 || a >= r.n || b >= r.n || a == b || !(v >= 0.0)) {
          throw Error(ErrorKind::Config, "rounds[" + std::to_string(k) + "]: bad entry " + t.dump());
        }
        s.set(a, b, v, Provenance::Revealed);
      }
      r.rounds.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("reveal file: ") + e.what());
  }
  return r;
}

std::string closure_log_lines(const ClosureLog& log) {
  std::string out;
  for (const auto& rec : log) {
    json line = {{"u", rec.u}, {"v", rec.v}, {"base", rec.base}, {"dist2", rec.dist2}, {"round", rec.round}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

json known_pairs(const DistanceState& state) {
  json out = json::array();
  for (const auto& [i, k] : state.graph().edges()) {
    out.push_back(json::array({i, k, state.dist2(i, k), to_string(state.provenance(i, k))}));
  }
  return out;
}

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json to_json(const ReductionStep& step) {
  json residuals = json::array();
  for (Eigen::Index k = 0; k < step.residuals.size(); ++k) residuals.push_back(step.residuals(k));
  return {{"round", step.round},
          {"index_set", step.index_set},
          {"subspace_dim", step.subspace_dim},
          {"anchor", {{"members", step.anchor.members}, {"coords", to_json(step.anchor.coords)}}},
          {"projections", matrix_json(step.projections)},
          {"residuals", residuals},
          {"b", matrix_json(step.b)}};
}

json to_json(const PipelineResult& result) {
  json steps = json::array();
  for (const auto& s : result.steps) steps.push_back(to_json(s));
  json inferred = json::array();
  for (std::size_t level = 0; level < result.closure_logs.size(); ++level) {
    for (const auto& rec : result.closure_logs[level]) {
      inferred.push_back({{"level", level}, {"u", rec.u}, {"v", rec.v}, {"dist2", rec.dist2}});
    }
  }
  return {{"index_set", result.index_set},
          {"levels", result.levels},
          {"stalled", result.stalled},
          {"pairs_known_after_closure", result.pairs_known_after_closure},
          {"inferred", inferred},
          {"dist2", matrix_json(result.dist2)},
          {"embedding", to_json(result.embedding)},
          {"steps", steps}};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace distrecon::io
