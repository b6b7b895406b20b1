#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "distrecon/harness.hpp"
#include "distrecon/io.hpp"
#include "distrecon/percolation.hpp"
#include "distrecon/reconstructor.hpp"
#include "distrecon/reveal_sim.hpp"
#include "distrecon/rng.hpp"
#include "distrecon/thresholds.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace distrecon;

namespace {

constexpr int kConfigError = 2;
constexpr int kUnbracketed = 3;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out = ".";
  std::optional<int> threads;
  bool exact = false;
};

HarnessConfig load_config(const Globals& g) {
  if (g.config.empty()) throw Error(ErrorKind::Config, "--config is required for this command");
  HarnessConfig c = config_from_text(io::read_file(g.config));
  if (g.seed) c.seed = *g.seed;
  if (g.threads) c.threads = *g.threads;
  if (g.exact) c.tol.exact_mode = true;
  return c;
}

Tolerance tolerance(const Globals& g) {
  Tolerance t;
  t.exact_mode = g.exact;
  return t;
}

void write(const Globals& g, const std::string& name, const std::string& text) {
  io::write_file(fs::path(g.out) / name, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_eta(const Globals& g, int d, std::optional<double> n) {
  json out = {{"d", d}, {"eta", eta(d).str()}, {"eta_closed_form", eta_closed_form(d).str()}, {"value", eta(d).value()}};
  if (n) out["p_star"] = {{"n", *n}, {"value", p_star(*n, d)}};
  std::cout << dump(out);
  write(g, "eta.json", dump(out));
  return 0;
}

int cmd_gadget(const Globals& g, int d, int r, bool pollute_first) {
  const GadgetDescriptor gad = build_gadget(d, r);
  PollutionSet pollution(d);
  if (pollute_first) pollution.insert(gad.bases.front());
  const SimpleGraph closed = polluted_closure(gad.graph, d, pollution);
  const bool recovered = closed.has_edge(gad.root.first, gad.root.second);
  json out = {{"d", d},
              {"r", r},
              {"n", gad.graph.order()},
              {"root", {gad.root.first, gad.root.second}},
              {"bases", gad.bases},
              {"removed", gad.removed},
              {"polluted", pollution.members()},
              {"root_recovered", recovered}};
  write(g, "gadget.edges", write_edge_list(gad.graph));
  write(g, "gadget.json", dump(out));
  std::cout << "root edge " << (recovered ? "recovered" : "not recovered") << "\n";
  return 0;
}

int cmd_closure(const Globals& g, const std::string& graph_path, const std::string& reveal_path,
                const std::string& pollution_path, int d, int clique) {
  if (!reveal_path.empty()) {
    const io::RevealFile rf = io::reveal_file_from_json(json::parse(io::read_file(reveal_path)));
    DistanceState merged(rf.n);
    for (const auto& r : rf.rounds) merged.absorb(r);
    const GeometricClosure gc = geometric_closure(merged, d > 0 ? d : rf.d, tolerance(g));
    json out = {{"n", rf.n},
                {"known_before", merged.known_count()},
                {"known_after", gc.state.known_count()},
                {"rounds", gc.stats.rounds},
                {"pairs", io::known_pairs(gc.state)}};
    write(g, "closure.json", dump(out));
    write(g, "closure_log.jsonl", io::closure_log_lines(gc.log));
    std::cout << "inferred " << gc.log.size() << " pairs\n";
    return 0;
  }
  if (graph_path.empty()) throw Error(ErrorKind::Config, "closure: give --graph or --reveal");
  const SimpleGraph g0 = read_edge_list(io::read_file(graph_path));
  ClosureStats stats;
  SimpleGraph closed;
  if (clique > 0) {
    closed = closure(g0, clique, &stats);
  } else {
    if (d < 0) throw Error(ErrorKind::Config, "closure: give --d or --clique");
    PollutionSet pollution(d);
    if (!pollution_path.empty()) pollution = pollution_from_json(io::read_file(pollution_path), d);
    closed = polluted_closure(g0, d, pollution, &stats);
  }
  json out = {{"n", g0.order()},
              {"edges_before", g0.edge_count()},
              {"edges_after", closed.edge_count()},
              {"rounds", stats.rounds},
              {"complete", closed.is_complete()}};
  write(g, "closure.edges", write_edge_list(closed));
  write(g, "closure.json", dump(out));
  std::cout << "edges " << g0.edge_count() << " -> " << closed.edge_count() << "\n";
  return 0;
}

int cmd_reconstruct(const Globals& g, const std::string& reveal_path, double delta, int per_level) {
  if (reveal_path.empty()) throw Error(ErrorKind::Config, "reconstruct: --reveal is required");
  const io::RevealFile rf = io::reveal_file_from_json(json::parse(io::read_file(reveal_path)));
  PipelineOptions opt;
  opt.delta = delta;
  opt.rounds_per_level = per_level;
  const PipelineResult res = run_pipeline(rf.rounds, rf.d, opt, tolerance(g));
  write(g, "report.json", dump(io::to_json(res)));
  std::string log;
  for (const auto& level : res.closure_logs) log += io::closure_log_lines(level);
  write(g, "closure_log.jsonl", log);
  std::cout << "reconstructed " << res.index_set.size() << " of " << rf.n << " points in " << res.levels
            << " level(s)\n";
  return 0;
}

int cmd_generate(const Globals& g) {
  const HarnessConfig c = load_config(g);
  if (!c.instance) throw Error(ErrorKind::Config, "instance: required for generate");
  InstanceSpec spec = *c.instance;
  spec.seed = derive_seed(c.seed, 0);
  const PointConfig points = generate(spec);
  RevealPlan plan = reveal_plan_from_json(c.reveal, points.size(), spec.d);
  plan.seed = derive_seed(c.seed, 1);
  io::RevealFile rf{points.size(), spec.d, reveal(points, plan)};
  write(g, "points.json", dump(io::to_json(points)));
  write(g, "reveal.json", dump(io::to_json(rf)));
  std::cout << "generated " << points.size() << " points\n";
  return 0;
}

int cmd_trials(const Globals& g) {
  const HarnessConfig c = load_config(g);
  const auto reports = run_trials(c);
  write(g, "trials.csv", trials_csv(reports));
  write(g, "trials.json", dump(trials_json(reports)));
  double sum = 0;
  for (const auto& r : reports) sum += r.reconstructible_set_fraction;
  std::cout << reports.size() << " trials, mean reconstructible fraction " << io::format_double(sum / reports.size())
            << "\n";
  return 0;
}

int cmd_scan(const Globals& g) {
  const HarnessConfig c = load_config(g);
  if (!c.scan) throw Error(ErrorKind::Config, "scan: section required");
  const ScanResult r = scan_threshold(*c.scan, c.seed, c.threads);
  write(g, "scan.csv", scan_csv(r));
  write(g, "scan.json", dump(scan_json(r)));
  write(g, "scan.svg", scan_svg(r));
  if (!r.bracketed) {
    std::cerr << "error: p_c not bracketed by the p grid for every n\n";
    return kUnbracketed;
  }
  std::cout << "slope " << io::format_double(r.slope) << " +/- " << io::format_double(r.slope_stderr)
            << " (expected " << io::format_double(-1.0 / eta(c.scan->d).value()) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance reconstruction and graph bootstrap percolation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--exact", g.exact, "Exact rank and definiteness tests");

  auto* eta_cmd = app.add_subcommand("eta", "Percolation exponent eta(d) and p_*(n, d)");
  int eta_d = 1;
  std::optional<double> eta_n;
  eta_cmd->add_option("--d", eta_d)->required();
  eta_cmd->add_option("--n", eta_n);

  auto* gadget_cmd = app.add_subcommand("gadget", "Build H_r and check that its closure recovers the root");
  int gd = 1, gr = 1;
  bool pollute_first = false;
  gadget_cmd->add_option("--d", gd)->required();
  gadget_cmd->add_option("--r", gr)->required();
  gadget_cmd->add_flag("--pollute-first", pollute_first, "Pollute the base of the first copy");

  auto* closure_cmd = app.add_subcommand("closure", "Graph or geometric closure");
  std::string graph_path, reveal_path, pollution_path;
  int cd = -1, clique = 0;
  closure_cmd->add_option("--graph", graph_path, "Edge list");
  closure_cmd->add_option("--reveal", reveal_path, "Reveal file (geometric closure)");
  closure_cmd->add_option("--pollution", pollution_path, "Polluted bases as JSON");
  closure_cmd->add_option("--d", cd, "Dimension");
  closure_cmd->add_option("--clique", clique, "Plain K_s closure");

  auto* rec_cmd = app.add_subcommand("reconstruct", "Run the reconstruction pipeline on a reveal file");
  std::string rec_reveal;
  double delta = 0.1;
  int per_level = 0;
  rec_cmd->add_option("--reveal", rec_reveal)->required();
  rec_cmd->add_option("--delta", delta)->check(CLI::Range(0.0, 1.0));
  rec_cmd->add_option("--rounds-per-level", per_level);

  auto* gen_cmd = app.add_subcommand("generate", "Generate an instance and its reveal rounds");
  auto* trials_cmd = app.add_subcommand("trials", "Run reconstruction trials");
  auto* scan_cmd = app.add_subcommand("scan", "Percolation threshold scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*eta_cmd) return cmd_eta(g, eta_d, eta_n);
    if (*gadget_cmd) return cmd_gadget(g, gd, gr, pollute_first);
    if (*closure_cmd) return cmd_closure(g, graph_path, reveal_path, pollution_path, cd, clique);
    if (*rec_cmd) return cmd_reconstruct(g, rec_reveal, delta, per_level);
    if (*gen_cmd) return cmd_generate(g);
    if (*trials_cmd) return cmd_trials(g);
    if (*scan_cmd) return cmd_scan(g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Config ? kConfigError : 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return 0;
}
