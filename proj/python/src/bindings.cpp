#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>

#include "distrecon/harness.hpp"
#include "distrecon/io.hpp"
#include "distrecon/percolation.hpp"
#include "distrecon/reconstructor.hpp"
#include "distrecon/reveal_sim.hpp"
#include "distrecon/thresholds.hpp"

namespace py = pybind11;
using namespace distrecon;

namespace {

// NaN marks an unknown entry.
SquaredDistanceMatrix to_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "distance matrix must be square");
  SquaredDistanceMatrix d(static_cast<int>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (!std::isnan(m(i, j))) d.set(static_cast<int>(i), static_cast<int>(j), m(i, j));
  return d;
}

Tolerance make_tol(double eps_rel, bool exact) {
  Tolerance t;
  t.eps_rel = eps_rel;
  t.exact_mode = exact;
  t.validate();
  return t;
}

PollutionSet make_pollution(int d, const std::vector<std::vector<int>>& bases) {
  PollutionSet p(d);
  for (const auto& b : bases) p.insert(b);
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distance reconstruction and graph bootstrap percolation";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  m.def(
      "eta",
      [](int d) {
        const Rational r = eta(d);
        return py::make_tuple(r.num, r.den);
      },
      py::arg("d"), "eta(d) as (numerator, denominator)");
  m.def("p_star", &p_star, py::arg("n"), py::arg("d"));

  m.def(
      "is_independent",
      [](const Eigen::MatrixXd& d2, int dim, double eps_rel, bool exact) {
        return is_independent(to_matrix(d2), dim, make_tol(eps_rel, exact));
      },
      py::arg("dist2"), py::arg("dim"), py::arg("eps_rel") = 1e-9, py::arg("exact") = false);
  m.def(
      "embed_from_distances",
      [](const Eigen::MatrixXd& d2, int dim, double eps_rel) {
        return embed_from_distances(to_matrix(d2), dim, make_tol(eps_rel, false)).coords;
      },
      py::arg("dist2"), py::arg("dim"), py::arg("eps_rel") = 1e-9);
  m.def(
      "recover_missing_distance",
      [](const Eigen::MatrixXd& d2, int dim, double eps_rel) -> std::optional<double> {
        const Recovery r = recover_missing_distance(to_matrix(d2), dim, make_tol(eps_rel, false));
        if (!r.determined()) return std::nullopt;
        return r.dist2;
      },
      py::arg("dist2"), py::arg("dim"), py::arg("eps_rel") = 1e-9,
      "Squared distance of the single unknown pair, or None when the base is dependent.");

  m.def(
      "closure",
      [](int n, const std::vector<Edge>& edges, int clique_size) {
        return closure(SimpleGraph(n, edges), clique_size).edges();
      },
      py::arg("n"), py::arg("edges"), py::arg("clique_size"));
  m.def(
      "polluted_closure",
      [](int n, const std::vector<Edge>& edges, int d, const std::vector<std::vector<int>>& pollution) {
        return polluted_closure(SimpleGraph(n, edges), d, make_pollution(d, pollution)).edges();
      },
      py::arg("n"), py::arg("edges"), py::arg("d"), py::arg("pollution") = std::vector<std::vector<int>>{});
  m.def(
      "build_gadget",
      [](int d, int r) {
        const GadgetDescriptor g = build_gadget(d, r);
        py::dict out;
        out["n"] = g.graph.order();
        out["edges"] = g.graph.edges();
        out["root"] = g.root;
        out["bases"] = g.bases;
        out["removed"] = g.removed;
        return out;
      },
      py::arg("d"), py::arg("r"));

  m.def(
      "generate_points",
      [](const std::string& instance_json) {
        return generate(instance_spec_from_json(nlohmann::json::parse(instance_json))).coords;
      },
      py::arg("instance_json"));
  m.def(
      "reconstruct",
      [](const std::string& reveal_json, double delta, int rounds_per_level) {
        const io::RevealFile f = io::reveal_file_from_json(nlohmann::json::parse(reveal_json));
        PipelineOptions opt;
        opt.delta = delta;
        opt.rounds_per_level = rounds_per_level;
        py::gil_scoped_release release;
        return io::to_json(run_pipeline(f.rounds, f.d, opt)).dump();
      },
      py::arg("reveal_json"), py::arg("delta") = 0.1, py::arg("rounds_per_level") = 0,
      "Runs the pipeline on a reveal file and returns the report as JSON text.");
  m.def(
      "run_trials",
      [](const std::string& config_json) {
        const HarnessConfig c = config_from_text(config_json);
        py::gil_scoped_release release;
        return trials_json(run_trials(c)).dump();
      },
      py::arg("config_json"));
  m.def(
      "scan",
      [](const std::string& config_json) {
        const HarnessConfig c = config_from_text(config_json);
        if (!c.scan) throw Error(ErrorKind::Config, "scan: missing");
        ScanResult r;
        {
          py::gil_scoped_release release;
          r = scan_threshold(*c.scan, c.seed, c.threads);
        }
        return py::make_tuple(scan_json(r).dump(), scan_csv(r), r.grid.empty() ? std::string() : scan_svg(r));
      },
      py::arg("config_json"), "Returns (json, csv, svg) text.");
}
