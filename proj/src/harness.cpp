#include "distrecon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "distrecon/io.hpp"
#include "distrecon/percolation.hpp"
#include "distrecon/rng.hpp"

namespace distrecon {

using nlohmann::json;

namespace {

// Runs job(i) for i in [0, count) on `threads` workers. The first exception
// thrown by any job is rethrown after all workers stop.
template <class Job>
void parallel_for(std::size_t count, int threads, Job&& job) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <class T>
T field(const json& j, const char* key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Config, path + key + ": wrong type (got " + j.at(key).dump() + ")");
  }
}

ScanConfig scan_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "scan: expected an object");
  ScanConfig s;
  s.d = field(j, "d", "scan.", 1);
  s.ns = field(j, "n", "scan.", std::vector<int>{});
  s.trials = field(j, "trials", "scan.", 200);
  if (j.contains("p") && j.contains("p_grid")) throw Error(ErrorKind::Config, "scan: give either \"p\" or \"p_grid\"");
  if (j.contains("p")) {
    s.ps = field(j, "p", "scan.", std::vector<double>{});
  } else if (j.contains("p_grid")) {
    const json& g = j.at("p_grid");
    const double lo = field(g, "min", "scan.p_grid.", 0.0);
    const double hi = field(g, "max", "scan.p_grid.", 0.0);
    const int count = field(g, "count", "scan.p_grid.", 0);
    if (!(lo > 0.0 && hi > lo && hi <= 1.0) || count < 2) {
      throw Error(ErrorKind::Config, "scan.p_grid: need 0 < min < max <= 1 and count >= 2");
    }
    for (int k = 0; k < count; ++k) s.ps.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (count - 1)));
  } else {
    throw Error(ErrorKind::Config, "scan: missing \"p\" or \"p_grid\"");
  }
  if (s.d < 1) throw Error(ErrorKind::Config, "scan.d: must be >= 1");
  if (s.ns.empty()) throw Error(ErrorKind::Config, "scan.n: must be a nonempty list");
  for (int n : s.ns)
    if (n < 2) throw Error(ErrorKind::Config, "scan.n: entries must be >= 2");
  if (s.trials < 1) throw Error(ErrorKind::Config, "scan.trials: must be >= 1");
  if (s.ps.empty()) throw Error(ErrorKind::Config, "scan.p: must be nonempty");
  for (std::size_t k = 0; k < s.ps.size(); ++k) {
    if (!(s.ps[k] > 0.0 && s.ps[k] <= 1.0)) throw Error(ErrorKind::Config, "scan.p: entries must lie in (0, 1]");
    if (k > 0 && !(s.ps[k] > s.ps[k - 1])) throw Error(ErrorKind::Config, "scan.p: must be strictly increasing");
  }
  return s;
}

const std::set<std::string> kTopLevelKeys = {"schema", "seed",  "instance", "reveal", "trials",  "delta",
                                             "rounds_per_level", "eps_rel", "exact", "scan", "threads"};

}  // namespace

HarnessConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kTopLevelKeys.count(key)) throw Error(ErrorKind::Config, "config: unknown field \"" + key + "\"");
  }
  if (!j.contains("schema")) throw Error(ErrorKind::Config, "schema: missing (expected 1)");
  if (field(j, "schema", "", 0) != 1) throw Error(ErrorKind::Config, "schema: unsupported version " + j.at("schema").dump());
  HarnessConfig c;
  c.seed = field(j, "seed", "", std::uint64_t{0});
  c.trials = field(j, "trials", "", 1);
  c.pipeline.delta = field(j, "delta", "", 0.1);
  c.pipeline.rounds_per_level = field(j, "rounds_per_level", "", 0);
  c.tol.eps_rel = field(j, "eps_rel", "", 1e-9);
  c.tol.exact_mode = field(j, "exact", "", false);
  c.threads = field(j, "threads", "", 1);
  if (c.trials < 1) throw Error(ErrorKind::Config, "trials: must be >= 1");
  if (!(c.pipeline.delta > 0.0 && c.pipeline.delta < 1.0)) throw Error(ErrorKind::Config, "delta: must lie in (0, 1)");
  if (c.pipeline.rounds_per_level < 0) throw Error(ErrorKind::Config, "rounds_per_level: must be >= 0");
  if (!(c.tol.eps_rel > 0.0)) throw Error(ErrorKind::Config, "eps_rel: must be positive");
  if (j.contains("instance")) {
    c.instance = instance_spec_from_json(j.at("instance"));
    c.reveal = j.value("reveal", json::object());
    reveal_plan_from_json(c.reveal, c.instance->n, c.instance->d);
  } else if (j.contains("reveal")) {
    throw Error(ErrorKind::Config, "reveal: requires an \"instance\"");
  }
  if (j.contains("scan")) c.scan = scan_from_json(j.at("scan"));
  return c;
}

HarnessConfig config_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

TrialReport run_trial(const HarnessConfig& config, std::uint64_t trial_seed) {
  if (!config.instance) throw Error(ErrorKind::Config, "instance: required for trials");
  const auto start = std::chrono::steady_clock::now();
  InstanceSpec spec = *config.instance;
  spec.seed = derive_seed(trial_seed, 0);
  const PointConfig points = generate(spec);
  const int n = points.size();
  const int d = spec.d;
  RevealPlan plan = reveal_plan_from_json(config.reveal, n, d);
  plan.seed = derive_seed(trial_seed, 1);
  const std::vector<DistanceState> rounds = reveal(points, plan);
  const PipelineResult result = run_pipeline(rounds, d, config.pipeline, config.tol);
  const SquaredDistanceMatrix truth = SquaredDistanceMatrix::from_points(points);

  TrialReport r;
  r.seed = trial_seed;
  r.n = n;
  r.d = d;
  r.p = plan.p;
  r.pairs_known_after_closure = result.pairs_known_after_closure;
  r.reconstructible_set_fraction = static_cast<double>(result.index_set.size()) / n;
  r.levels = result.levels;
  r.stalled = result.stalled;

  SimpleGraph hidden(n);
  for (const auto& [u, v] : plan.hidden) hidden.add_edge(u, v);
  std::set<Edge> flagged;
  for (std::size_t level = 0; level < result.closure_logs.size(); ++level) {
    for (const auto& rec : result.closure_logs[level]) {
      if (hidden.has_edge(rec.u, rec.v)) flagged.insert({rec.u, rec.v});
      // Values inferred at a later level live in reduced units.
      double expected = truth(rec.u, rec.v);
      for (std::size_t l = 0; l < level && l < result.steps.size(); ++l) expected -= result.steps[l].b_at(rec.u, rec.v);
      r.max_inferred_error = std::max(r.max_inferred_error, std::abs(rec.dist2 - expected));
    }
  }
  const auto& set = result.index_set;
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t c = a + 1; c < set.size(); ++c) {
      if (hidden.has_edge(set[a], set[c])) flagged.insert({set[a], set[c]});
      const double err = std::abs(result.dist2(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) -
                                  truth(set[a], set[c]));
      r.max_output_error = std::max(r.max_output_error, err);
    }
  }
  r.hidden_pairs_inferred = static_cast<int>(flagged.size());
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<TrialReport> run_trials(const HarnessConfig& config) {
  std::vector<TrialReport> out(static_cast<std::size_t>(config.trials));
  parallel_for(out.size(), config.threads, [&](std::size_t i) {
    out[i] = run_trial(config, derive_seed(config.seed, static_cast<std::uint64_t>(i)));
  });
  return out;
}

double ScanPoint::standard_error() const {
  if (trials == 0) return 0.0;
  const double f = success_fraction();
  return std::sqrt(f * (1.0 - f) / trials);
}

std::optional<double> crossing(const std::vector<double>& ps, const std::vector<double>& fractions) {
  for (std::size_t k = 0; k < ps.size() && k < fractions.size(); ++k) {
    if (fractions[k] < 0.5) continue;
    if (k == 0) return std::nullopt;
    const double f0 = fractions[k - 1], f1 = fractions[k];
    const double l0 = std::log(ps[k - 1]), l1 = std::log(ps[k]);
    return std::exp(l0 + (0.5 - f0) / (f1 - f0) * (l1 - l0));
  }
  return std::nullopt;
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit fit;
  const auto k = x.size();
  if (k < 2 || y.size() != k) {
    fit.slope_stderr = std::nan("");
    return fit;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (k > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      ssr += e * e;
    }
    fit.slope_stderr = std::sqrt(ssr / static_cast<double>(k - 2) / sxx);
  } else {
    fit.slope_stderr = std::nan("");
  }
  return fit;
}

ScanResult scan_threshold(const ScanConfig& scan, std::uint64_t seed, int threads) {
  const int grid = static_cast<int>(scan.ps.size());
  const int clique = scan.d + 3;
  const std::size_t jobs = scan.ns.size() * static_cast<std::size_t>(scan.trials);
  // First grid index at which each (n, trial) sample percolates; `grid` if never.
  std::vector<int> first(jobs, grid);
  parallel_for(jobs, threads, [&](std::size_t job) {
    const int n = scan.ns[job / static_cast<std::size_t>(scan.trials)];
    const auto t = static_cast<std::uint64_t>(job % static_cast<std::size_t>(scan.trials));
    const std::uint64_t s = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(n)), t);
    int lo = 0, hi = grid;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (closure(sample_gnp(n, scan.ps[static_cast<std::size_t>(mid)], s), clique).is_complete()) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    first[job] = lo;
  });

  ScanResult r;
  r.d = scan.d;
  r.ns = scan.ns;
  r.bracketed = true;
  std::vector<double> log_n, log_pc;
  for (std::size_t ni = 0; ni < scan.ns.size(); ++ni) {
    std::vector<double> fractions;
    for (int k = 0; k < grid; ++k) {
      ScanPoint pt;
      pt.n = scan.ns[ni];
      pt.p = scan.ps[static_cast<std::size_t>(k)];
      pt.trials = scan.trials;
      for (int t = 0; t < scan.trials; ++t)
        if (first[ni * static_cast<std::size_t>(scan.trials) + static_cast<std::size_t>(t)] <= k) ++pt.successes;
      fractions.push_back(pt.success_fraction());
      r.grid.push_back(pt);
    }
    const auto pc = crossing(scan.ps, fractions);
    r.p_c.push_back(pc);
    if (pc) {
      log_n.push_back(std::log(scan.ns[ni]));
      log_pc.push_back(std::log(*pc));
    } else {
      r.bracketed = false;
    }
  }
  const LineFit fit = least_squares(log_n, log_pc);
  r.slope = fit.slope;
  r.intercept = fit.intercept;
  r.slope_stderr = fit.slope_stderr;
  return r;
}

std::string scan_csv(const ScanResult& r) {
  std::string out = "n,p,trials,success_fraction,stderr\n";
  for (const auto& pt : r.grid) {
    out += std::to_string(pt.n) + "," + io::format_double(pt.p) + "," + std::to_string(pt.trials) + "," +
           io::format_double(pt.success_fraction()) + "," + io::format_double(pt.standard_error()) + "\n";
  }
  return out;
}

json scan_json(const ScanResult& r) {
  json grid = json::array();
  for (const auto& pt : r.grid) {
    grid.push_back({{"n", pt.n},
                    {"p", pt.p},
                    {"trials", pt.trials},
                    {"successes", pt.successes},
                    {"success_fraction", pt.success_fraction()},
                    {"stderr", pt.standard_error()}});
  }
  json pcs = json::array();
  for (std::size_t i = 0; i < r.ns.size(); ++i) {
    pcs.push_back({{"n", r.ns[i]}, {"p_c", r.p_c[i] ? json(*r.p_c[i]) : json(nullptr)}});
  }
  json fit = nullptr;
  std::size_t crossings = 0;
  for (const auto& pc : r.p_c) crossings += pc ? 1 : 0;
  if (crossings >= 2) fit = {{"slope", r.slope}, {"slope_stderr", r.slope_stderr}, {"intercept", r.intercept}};
  return {{"d", r.d}, {"bracketed", r.bracketed}, {"grid", grid}, {"p_c", pcs}, {"fit", fit}};
}

namespace {

struct Axis {
  double lo, hi;  // data range
  double a, b;    // pixel range
  double map(double v) const { return hi > lo ? a + (v - lo) / (hi - lo) * (b - a) : 0.5 * (a + b); }
};

std::string fmt(double v, int digits = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

void pad(double& lo, double& hi) {
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
}

}  // namespace

std::string scan_svg(const ScanResult& r) {
  if (r.grid.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to plot");
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"400\" font-family=\"sans-serif\" "
       "font-size=\"12\">\n<rect width=\"900\" height=\"400\" fill=\"white\"/>\n";

  // Left: success fraction against log10 p, one curve per n.
  double xlo = 1e300, xhi = -1e300;
  for (const auto& pt : r.grid) {
    xlo = std::min(xlo, std::log10(pt.p));
    xhi = std::max(xhi, std::log10(pt.p));
  }
  pad(xlo, xhi);
  const Axis x{xlo, xhi, 60, 420};
  const Axis y{0.0, 1.0, 350, 40};
  s << "<line x1=\"60\" y1=\"350\" x2=\"420\" y2=\"350\" stroke=\"black\"/>\n"
       "<line x1=\"60\" y1=\"350\" x2=\"60\" y2=\"40\" stroke=\"black\"/>\n"
       "<line x1=\"60\" y1=\""
    << fmt(y.map(0.5)) << "\" x2=\"420\" y2=\"" << fmt(y.map(0.5))
    << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n"
       "<text x=\"240\" y=\"385\" text-anchor=\"middle\">log10 p</text>\n"
       "<text x=\"20\" y=\"195\" text-anchor=\"middle\" transform=\"rotate(-90 20 195)\">P(percolates)</text>\n"
       "<text x=\"60\" y=\"365\" text-anchor=\"middle\">"
    << fmt(xlo) << "</text>\n<text x=\"420\" y=\"365\" text-anchor=\"middle\">" << fmt(xhi) << "</text>\n";
  for (std::size_t ni = 0; ni < r.ns.size(); ++ni) {
    const char* color = kPalette[ni % std::size(kPalette)];
    std::string path;
    for (const auto& pt : r.grid) {
      if (pt.n != r.ns[ni]) continue;
      const double px = x.map(std::log10(pt.p)), py = y.map(pt.success_fraction());
      path += (path.empty() ? "" : " ") + fmt(px) + "," + fmt(py);
      s << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    s << "<polyline points=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\"/>\n";
    s << "<text x=\"70\" y=\"" << 55 + 15 * ni << "\" fill=\"" << color << "\">n = " << r.ns[ni] << "</text>\n";
  }

  // Right: log-log plot of the fitted thresholds.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < r.ns.size(); ++i)
    if (r.p_c[i]) pts.emplace_back(std::log10(r.ns[i]), std::log10(*r.p_c[i]));
  s << "<line x1=\"520\" y1=\"350\" x2=\"860\" y2=\"350\" stroke=\"black\"/>\n"
       "<line x1=\"520\" y1=\"350\" x2=\"520\" y2=\"40\" stroke=\"black\"/>\n"
       "<text x=\"690\" y=\"385\" text-anchor=\"middle\">log10 n</text>\n"
       "<text x=\"480\" y=\"195\" text-anchor=\"middle\" transform=\"rotate(-90 480 195)\">log10 p_c</text>\n";
  if (!pts.empty()) {
    double nlo = 1e300, nhi = -1e300, plo = 1e300, phi = -1e300;
    for (const auto& [a, b] : pts) {
      nlo = std::min(nlo, a);
      nhi = std::max(nhi, a);
      plo = std::min(plo, b);
      phi = std::max(phi, b);
    }
    pad(nlo, nhi);
    pad(plo, phi);
    const Axis xn{nlo, nhi, 540, 840};
    const Axis yp{plo, phi, 330, 60};
    for (const auto& [a, b] : pts) {
      s << "<circle cx=\"" << fmt(xn.map(a)) << "\" cy=\"" << fmt(yp.map(b)) << "\" r=\"3.5\" fill=\"black\"/>\n";
    }
    if (pts.size() >= 2) {
      // The fit is in natural logs; the slope is unchanged in log10.
      const double c = r.intercept / std::log(10.0);
      s << "<line x1=\"" << fmt(xn.map(nlo)) << "\" y1=\"" << fmt(yp.map(c + r.slope * nlo)) << "\" x2=\""
        << fmt(xn.map(nhi)) << "\" y2=\"" << fmt(yp.map(c + r.slope * nhi)) << "\" stroke=\"#d62728\"/>\n";
      s << "<text x=\"850\" y=\"30\" text-anchor=\"end\">slope = " << fmt(r.slope, 3);
      if (std::isfinite(r.slope_stderr)) s << " &#177; " << fmt(r.slope_stderr, 3);
      s << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::string trials_csv(const std::vector<TrialReport>& reports) {
  std::string out =
      "seed,n,d,p,pairs_known_after_closure,reconstructible_set_fraction,levels,stalled,hidden_pairs_inferred,"
      "max_inferred_error,max_output_error\n";
  for (const auto& r : reports) {
    out += std::to_string(r.seed) + "," + std::to_string(r.n) + "," + std::to_string(r.d) + "," +
           io::format_double(r.p) + "," + io::format_double(r.pairs_known_after_closure) + "," +
           io::format_double(r.reconstructible_set_fraction) + "," + std::to_string(r.levels) + "," +
           (r.stalled ? "1" : "0") + "," + std::to_string(r.hidden_pairs_inferred) + "," +
           io::format_double(r.max_inferred_error) + "," + io::format_double(r.max_output_error) + "\n";
  }
  return out;
}

json trials_json(const std::vector<TrialReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    out.push_back({{"seed", r.seed},
                   {"n", r.n},
                   {"d", r.d},
                   {"p", r.p},
                   {"pairs_known_after_closure", r.pairs_known_after_closure},
                   {"reconstructible_set_fraction", r.reconstructible_set_fraction},
                   {"levels", r.levels},
                   {"stalled", r.stalled},
                   {"hidden_pairs_inferred", r.hidden_pairs_inferred},
                   {"max_inferred_error", r.max_inferred_error},
                   {"max_output_error", r.max_output_error}});
  }
  return out;
}

}  // namespace distrecon
