#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "distrecon/io.hpp"
#include "distrecon/reveal_sim.hpp"

using namespace distrecon;
using nlohmann::json;

TEST_CASE("points round-trip") {
  Eigen::MatrixXd c(3, 2);
  c << 0.1, 2.0, -3.5, 1e-12, 7.0, 0.0;
  const PointConfig p(2, c);
  const PointConfig q = io::points_from_json(json::parse(io::to_json(p).dump()));
  CHECK(q.dim == 2);
  CHECK(q.coords == p.coords);
  CHECK_THROWS_AS(io::points_from_json(json::parse("[[1, 2], [3]]")), Error);
}

TEST_CASE("distance matrices round-trip with unknown entries") {
  SquaredDistanceMatrix d(4);
  d.set(0, 1, 2.5);
  d.set(2, 3, 0.0);
  d.set(1, 3, 1.0 / 3.0);
  const json j = io::to_json(d);
  CHECK(j["n"] == 4);
  CHECK(j["entries"][0][2].is_null());
  const SquaredDistanceMatrix e = io::distances_from_json(json::parse(j.dump()));
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      CHECK(e.known(a, b) == d.known(a, b));
      if (d.known(a, b)) CHECK(e(a, b) == d(a, b));
    }
  }
  CHECK_THROWS_AS(io::distances_from_json(json::parse(R"({"n": 2, "entries": [[0, 1], [2, 0]]})")), Error);
}

TEST_CASE("reveal files round-trip") {
  InstanceSpec spec;
  spec.kind = GeneratorKind::UniformCube;
  spec.n = 12;
  spec.d = 2;
  spec.seed = 4;
  const PointConfig pts = generate(spec);
  RevealPlan plan;
  plan.p = 0.5;
  plan.rounds = 3;
  plan.seed = 8;
  io::RevealFile f{12, 2, reveal(pts, plan)};
  const io::RevealFile g = io::reveal_file_from_json(json::parse(io::to_json(f).dump()));
  CHECK(g.n == 12);
  CHECK(g.d == 2);
  REQUIRE(g.rounds.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(g.rounds[k].known_count() == f.rounds[k].known_count());
    for (int a = 0; a < 12; ++a)
      for (int b = a + 1; b < 12; ++b)
        if (f.rounds[k].known(a, b)) CHECK(g.rounds[k].dist2(a, b) == f.rounds[k].dist2(a, b));
  }
  CHECK_THROWS_AS(io::reveal_file_from_json(json::parse(R"({"n": 3, "d": 1, "rounds": [[[0, 5, 1.0]]]})")),
                  Error);
}

TEST_CASE("pipeline report and closure log") {
  InstanceSpec spec;
  spec.kind = GeneratorKind::UniformCube;
  spec.n = 20;
  spec.d = 2;
  spec.seed = 1;
  RevealPlan plan;
  plan.p = 0.7;
  plan.rounds = 6;
  plan.seed = 2;
  const PipelineResult r = run_pipeline(reveal(generate(spec), plan), 2);
  const json j = io::to_json(r);
  CHECK(j["index_set"].get<std::vector<int>>() == r.index_set);
  CHECK(j["levels"] == r.levels);
  CHECK(j["stalled"] == r.stalled);
  CHECK(j["embedding"].size() == r.index_set.size());

  std::size_t records = 0;
  for (const auto& log : r.closure_logs) records += log.size();
  CHECK(j["inferred"].size() == records);
  REQUIRE(!r.closure_logs.empty());
  std::istringstream lines(io::closure_log_lines(r.closure_logs[0]));
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const json rec = json::parse(line);
    CHECK(rec.contains("base"));
    CHECK(rec["u"] == r.closure_logs[0][count].u);
    ++count;
  }
  CHECK(count == r.closure_logs[0].size());
}

TEST_CASE("known pairs carry provenance") {
  DistanceState s(3);
  s.set(0, 1, 1.0, Provenance::Revealed);
  s.set(1, 2, 4.0, Provenance::Inferred);
  const json j = io::known_pairs(s);
  REQUIRE(j.size() == 2);
  CHECK(j[0][3] == to_string(Provenance::Revealed));
  CHECK(j[1][3] == to_string(Provenance::Inferred));
  CHECK(j[1][2] == 4.0);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "distrecon_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_file(dir / "a.txt", "hello\n");
  CHECK(io::read_file(dir / "a.txt") == "hello\n");
  CHECK_THROWS_WITH_AS(io::read_file(dir / "missing.txt"), doctest::Contains("missing.txt"), Error);
  std::filesystem::remove_all(dir.parent_path());
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0 / 3.0) == "0.3333333333");
}
