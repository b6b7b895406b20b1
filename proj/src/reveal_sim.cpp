#include "distrecon/reveal_sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "distrecon/exact.hpp"
#include "distrecon/rng.hpp"
#include "distrecon/thresholds.hpp"

namespace distrecon {

const char* to_string(GeneratorKind k) noexcept {
  switch (k) {
    case GeneratorKind::UniformCube: return "UniformCube";
    case GeneratorKind::HyperplaneAdversarial: return "HyperplaneAdversarial";
    case GeneratorKind::SubspaceCluster: return "SubspaceCluster";
    case GeneratorKind::MultisetAtoms: return "MultisetAtoms";
    case GeneratorKind::Lattice: return "Lattice";
    case GeneratorKind::ExplicitPoints: return "ExplicitPoints";
  }
  return "UniformCube";
}

GeneratorKind generator_kind_from_string(const std::string& s) {
  for (auto k : {GeneratorKind::UniformCube, GeneratorKind::HyperplaneAdversarial, GeneratorKind::SubspaceCluster,
                 GeneratorKind::MultisetAtoms, GeneratorKind::Lattice, GeneratorKind::ExplicitPoints}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorKind::Config, "instance.kind: unknown generator \"" + s + "\"");
}

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Calls f(subset) for every k-subset of [0, n) in lexicographic order; stops
// early if f returns false.
template <class F>
void for_each_combination(int n, int k, F&& f) {
  if (k > n || k < 0) return;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[i] = i;
  while (true) {
    if (!f(std::span<const int>(c))) return;
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

Eigen::MatrixXd uniform_cube(Rng& rng, int n, int d) {
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) x(i, c) = rng.uniform();
  return x;
}

bool in_general_position(const PointConfig& p) {
  bool ok = true;
  const int d = p.dim;
  for_each_combination(p.size(), d + 1, [&](std::span<const int> s) {
    Eigen::MatrixXd diffs(d, d);
    for (int a = 1; a <= d; ++a) diffs.row(a - 1) = p.coords.row(s[a]) - p.coords.row(s[0]);
    // Reject near-degenerate subsets too, so the default tolerance agrees.
    ok = exact::rank(diffs) == d && affine_dimension(p.subset(s)) == d;
    return ok;
  });
  return ok;
}

bool is_dependent(const PointConfig& points, std::span<const int> subset, int d, const Tolerance& tol) {
  if (d == 0) return false;
  return affine_dimension(points.subset(subset), tol) < d;
}

}  // namespace

void InstanceSpec::validate() const {
  if (kind == GeneratorKind::ExplicitPoints) {
    if (points.size() < 1 || points.dim < 1) throw Error(ErrorKind::Config, "instance.params.points: need points in R^d, d >= 1");
    return;
  }
  if (kind == GeneratorKind::MultisetAtoms) {
    if (multiplicities.empty()) throw Error(ErrorKind::Config, "instance.params.multiplicities: required");
    int total = 0;
    for (int m : multiplicities) {
      if (m < 1) throw Error(ErrorKind::Config, "instance.params.multiplicities: entries must be >= 1");
      total += m;
    }
    if (n != 0 && n != total) throw Error(ErrorKind::Config, "instance.n: must equal the sum of multiplicities");
  } else if (n < 1) {
    throw Error(ErrorKind::Config, "instance.n: must be >= 1");
  }
  if (d < 1) throw Error(ErrorKind::Config, "instance.d: must be >= 1");
  if (kind == GeneratorKind::HyperplaneAdversarial && n < 2) {
    throw Error(ErrorKind::Config, "instance.n: HyperplaneAdversarial needs n >= 2");
  }
  if (kind == GeneratorKind::SubspaceCluster) {
    if (subspace_dim < 0 || subspace_dim >= d) throw Error(ErrorKind::Config, "instance.params.subspace_dim: must lie in [0, d)");
    if (cluster_size < 0 || cluster_size > n) throw Error(ErrorKind::Config, "instance.params.cluster_size: must lie in [0, n]");
  }
  if (kind == GeneratorKind::Lattice && extent < 1) throw Error(ErrorKind::Config, "instance.params.extent: must be >= 1");
  if (kind == GeneratorKind::HyperplaneAdversarial && !(offset > 0.0)) {
    throw Error(ErrorKind::Config, "instance.params.offset: must be positive");
  }
}

PointConfig generate(const InstanceSpec& spec) {
  spec.validate();
  const int d = spec.d;
  const int n = spec.n;
  Rng rng(spec.seed);
  switch (spec.kind) {
    case GeneratorKind::UniformCube: {
      const bool check = spec.general_position && binomial(n, d + 1) <= 2e5;
      for (std::uint64_t attempt = 0;; ++attempt) {
        Rng local(derive_seed(spec.seed, attempt));
        PointConfig p(d, uniform_cube(local, n, d));
        if (!check || in_general_position(p)) return p;
        if (attempt > 1000) throw Error(ErrorKind::InvalidArgument, "could not sample a configuration in general position");
      }
    }
    case GeneratorKind::HyperplaneAdversarial: {
      // n-2 points on the hyperplane x_d = 0, two points above it.
      Eigen::MatrixXd x = uniform_cube(rng, n, d);
      for (int i = 0; i < n - 2; ++i) x(i, d - 1) = 0.0;
      for (int i = n - 2; i < n; ++i) x(i, d - 1) = spec.offset * (1.0 + rng.uniform());
      return PointConfig(d, std::move(x));
    }
    case GeneratorKind::SubspaceCluster: {
      Eigen::MatrixXd x = uniform_cube(rng, n, d);
      const int k = spec.subspace_dim;
      Eigen::MatrixXd raw(d, std::max(k, 1));
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < raw.cols(); ++c) raw(r, c) = rng.uniform(-1.0, 1.0);
      const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ() *
                                Eigen::MatrixXd::Identity(d, raw.cols());
      const Eigen::VectorXd origin = Eigen::VectorXd::Constant(d, 0.5);
      for (int i = 0; i < spec.cluster_size; ++i) {
        Eigen::VectorXd pt = origin;
        for (int c = 0; c < k; ++c) pt += rng.uniform(-0.5, 0.5) * q.col(c);
        x.row(i) = pt.transpose();
      }
      return PointConfig(d, std::move(x));
    }
    case GeneratorKind::MultisetAtoms: {
      int total = 0;
      for (int m : spec.multiplicities) total += m;
      Eigen::MatrixXd x(total, d);
      int row = 0;
      for (int m : spec.multiplicities) {
        Eigen::RowVectorXd atom(d);
        for (int c = 0; c < d; ++c) atom(c) = rng.uniform();
        for (int r = 0; r < m; ++r) x.row(row++) = atom;
      }
      return PointConfig(d, std::move(x));
    }
    case GeneratorKind::Lattice: {
      Eigen::MatrixXd x(n, d);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) x(i, c) = static_cast<double>(rng.integer(-spec.extent, spec.extent));
      return PointConfig(d, std::move(x));
    }
    case GeneratorKind::ExplicitPoints:
      return spec.points;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown generator");
}

double RevealPlan::per_round() const {
  if (p >= 1.0) return 1.0;
  return 1.0 - std::pow(1.0 - p, 1.0 / rounds);
}

void RevealPlan::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::Config, "reveal.p: must lie in [0, 1]");
  if (rounds < 1) throw Error(ErrorKind::Config, "reveal.rounds: must be >= 1");
}

std::vector<DistanceState> reveal(const PointConfig& points, const RevealPlan& plan) {
  plan.validate();
  const int n = points.size();
  SimpleGraph hidden(n);
  for (const auto& [u, v] : plan.hidden) hidden.add_edge(u, v);
  const double q = plan.per_round();
  std::vector<DistanceState> out;
  out.reserve(static_cast<std::size_t>(plan.rounds));
  for (int k = 0; k < plan.rounds; ++k) {
    DistanceState s(n);
    Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(k)));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        // Draw for every pair so hiding a pair leaves the others unchanged.
        const bool hit = rng.uniform() < q;
        if (hit && !hidden.has_edge(i, j)) {
          s.set(i, j, (points.coords.row(i) - points.coords.row(j)).squaredNorm(), Provenance::Revealed);
        }
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<int>> dependent_families(const PointConfig& points, int d, const Tolerance& tol) {
  if (binomial(points.size(), d + 1) > kEnumerationGuard) {
    throw Error(ErrorKind::TooLarge, "C(n, d+1) exceeds the enumeration guard");
  }
  std::vector<std::vector<int>> out;
  for_each_combination(points.size(), d + 1, [&](std::span<const int> s) {
    if (is_dependent(points, s, d, tol)) out.emplace_back(s.begin(), s.end());
    return true;
  });
  return out;
}

std::uint64_t dependent_family_count(const PointConfig& points, int d, const Tolerance& tol) {
  if (binomial(points.size(), d + 1) > kEnumerationGuard) {
    throw Error(ErrorKind::TooLarge, "C(n, d+1) exceeds the enumeration guard");
  }
  std::uint64_t count = 0;
  for_each_combination(points.size(), d + 1, [&](std::span<const int> s) {
    count += is_dependent(points, s, d, tol) ? 1 : 0;
    return true;
  });
  return count;
}

DenseSubspace find_dense_subspace(const PointConfig& points, double mu, const Tolerance& tol,
                                  std::uint64_t sample_seed) {
  if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorKind::InvalidArgument, "mu must lie in (0, 1)");
  const int n = points.size();
  const int d = points.dim;
  if (n < 1) throw Error(ErrorKind::EmptyInput, "no points");
  const double scale = SquaredDistanceMatrix::from_points(points).scale();
  const double on_flat = tol.eps_rel * std::max(scale, 1e-300);
  bool incomplete = false;

  auto dependents_within = [&](const std::vector<int>& contained, int dim) -> std::uint64_t {
    if (dim == 0) return 0;
    return dependent_family_count(points.subset(contained), dim, tol);
  };

  for (int dim = 0; dim < d; ++dim) {
    const double need = std::pow(static_cast<double>(n), std::pow(mu, d - dim));
    std::vector<std::vector<int>> seen;
    DenseSubspace best;
    bool found = false;

    auto consider = [&](std::span<const int> s) {
      for (const auto& c : seen)
        if (std::includes(c.begin(), c.end(), s.begin(), s.end())) return;
      const PointConfig basis = points.subset(s);
      if (affine_dimension(basis, tol) != dim) return;
      std::vector<int> contained;
      for (int i = 0; i < n; ++i)
        if (project_onto_span(points.point(i), basis, tol).dist2 <= on_flat) contained.push_back(i);
      seen.push_back(contained);
      const double m = static_cast<double>(contained.size());
      if (m < need) return;
      if (found && contained.size() <= best.contained.size()) return;
      const std::uint64_t deps = dependents_within(contained, dim);
      if (static_cast<double>(deps) > d * std::pow(m, dim + mu)) return;
      best.dim = dim;
      best.basis = basis;
      best.contained = contained;
      best.dependent_families = deps;
      found = true;
    };

    if (binomial(n, dim + 1) <= kEnumerationGuard) {
      for_each_combination(n, dim + 1, [&](std::span<const int> s) {
        consider(s);
        return true;
      });
    } else {
      incomplete = true;
      Rng rng(derive_seed(sample_seed, static_cast<std::uint64_t>(dim)));
      for (int t = 0; t < 100000; ++t) {
        std::set<int> pick;
        while (static_cast<int>(pick.size()) < dim + 1) pick.insert(static_cast<int>(rng.integer(0, n - 1)));
        const std::vector<int> s(pick.begin(), pick.end());
        consider(s);
      }
    }
    if (found) {
      best.incomplete = incomplete;
      best.satisfies_bounds = true;
      return best;
    }
  }

  DenseSubspace whole;
  whole.dim = d;
  whole.whole_space = true;
  whole.basis = PointConfig::zeros(0, d);
  whole.contained.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) whole.contained[i] = i;
  whole.incomplete = incomplete;
  if (binomial(n, d + 1) <= kEnumerationGuard) {
    whole.dependent_families = dependent_family_count(points, d, tol);
    whole.satisfies_bounds = static_cast<double>(whole.dependent_families) <= d * std::pow(n, d + mu);
  } else {
    whole.incomplete = true;
  }
  return whole;
}

InstanceSpec instance_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "instance: expected an object");
  InstanceSpec spec;
  try {
    spec.kind = generator_kind_from_string(j.at("kind").get<std::string>());
    spec.d = j.value("d", 0);
    spec.n = j.value("n", 0);
    spec.seed = j.value("seed", std::uint64_t{0});
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    spec.general_position = params.value("general_position", false);
    spec.multiplicities = params.value("multiplicities", std::vector<int>{});
    spec.subspace_dim = params.value("subspace_dim", 1);
    spec.cluster_size = params.value("cluster_size", 0);
    spec.extent = params.value("extent", 10);
    spec.offset = params.value("offset", 0.5);
    if (params.contains("points")) {
      const auto rows = params.at("points").get<std::vector<std::vector<double>>>();
      const int dim = rows.empty() ? spec.d : static_cast<int>(rows.front().size());
      Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), dim);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(rows[r].size()) != dim) throw Error(ErrorKind::Config, "instance.params.points: ragged rows");
        for (int c = 0; c < dim; ++c) x(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
      }
      spec.points = PointConfig(dim, std::move(x));
      spec.n = spec.points.size();
      spec.d = dim;
    }
    if (spec.kind == GeneratorKind::MultisetAtoms && spec.n == 0) {
      for (int m : spec.multiplicities) spec.n += m;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("instance: ") + e.what());
  }
  spec.validate();
  return spec;
}

RevealPlan reveal_plan_from_json(const nlohmann::json& j, int n, int d) {
  if (!j.is_object()) throw Error(ErrorKind::Config, "reveal: expected an object");
  RevealPlan plan;
  try {
    if (j.contains("p") == j.contains("c")) throw Error(ErrorKind::Config, "reveal: give exactly one of \"p\" and \"c\"");
    if (j.contains("p")) {
      plan.p = j.at("p").get<double>();
    } else {
      plan.p = std::min(1.0, j.at("c").get<double>() * std::pow(static_cast<double>(n), -1.0 / eta(d).value()));
    }
    plan.rounds = j.value("rounds", 3 * d);
    for (const auto& pair : j.value("hide", nlohmann::json::array())) {
      const auto uv = pair.get<std::vector<int>>();
      if (uv.size() != 2 || uv[0] == uv[1] || uv[0] < 0 || uv[1] < 0 || uv[0] >= n || uv[1] >= n) {
        throw Error(ErrorKind::Config, "reveal.hide: entries must be pairs of distinct vertices below n");
      }
      plan.hidden.emplace_back(std::min(uv[0], uv[1]), std::max(uv[0], uv[1]));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("reveal: ") + e.what());
  }
  plan.validate();
  return plan;
}

}  // namespace distrecon
