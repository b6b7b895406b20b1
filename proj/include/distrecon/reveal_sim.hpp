#pragma once

// Ground-truth instances, random distance reveals, and structural analysis
// of point configurations. Only tests and the harness use ground truth.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "distrecon/geometry.hpp"
#include "distrecon/reconstructor.hpp"

namespace distrecon {

enum class GeneratorKind { UniformCube, HyperplaneAdversarial, SubspaceCluster, MultisetAtoms, Lattice, ExplicitPoints };

const char* to_string(GeneratorKind k) noexcept;
GeneratorKind generator_kind_from_string(const std::string& s);

struct InstanceSpec {
  GeneratorKind kind = GeneratorKind::UniformCube;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;

  // UniformCube: resample until every (d+1)-subset is independent under
  // exact arithmetic (only when C(n, d+1) is small enough to enumerate).
  bool general_position = false;
  // MultisetAtoms: one atom per entry; n is their sum.
  std::vector<int> multiplicities;
  // SubspaceCluster: cluster_size points on a random subspace_dim-flat.
  int subspace_dim = 1;
  int cluster_size = 0;
  // Lattice: integer coordinates in [-extent, extent].
  int extent = 10;
  // HyperplaneAdversarial: distance of the two off-hyperplane points.
  double offset = 0.5;
  // ExplicitPoints
  PointConfig points;

  void validate() const;
};

/// Deterministic given spec.seed.
PointConfig generate(const InstanceSpec& spec);

struct RevealPlan {
  double p = 0.0;
  int rounds = 1;
  std::uint64_t seed = 0;
  /// Pairs never revealed, in any round.
  std::vector<Edge> hidden;

  /// Per-round probability p' with (1 - p')^rounds = 1 - p.
  double per_round() const;
  void validate() const;
};

/// One DistanceState per round; round k reveals each pair independently with
/// probability per_round(), using stream derive_seed(plan.seed, k).
std::vector<DistanceState> reveal(const PointConfig& points, const RevealPlan& plan);

/// Enumeration limit for subset counting.
inline constexpr double kEnumerationGuard = 1e7;

/// Number of d-dependent (d+1)-subsets. Throws TooLarge beyond the guard.
std::uint64_t dependent_family_count(const PointConfig& points, int d, const Tolerance& tol = {});

/// The d-dependent (d+1)-subsets themselves, sorted.
std::vector<std::vector<int>> dependent_families(const PointConfig& points, int d, const Tolerance& tol = {});

struct DenseSubspace {
  int dim = 0;                    // d'
  PointConfig basis;              // affinely independent points spanning it (all of R^d: empty)
  std::vector<int> contained;     // indices of points on it
  std::uint64_t dependent_families = 0;
  bool whole_space = false;
  bool incomplete = false;        // candidates were sampled, not enumerated
  bool satisfies_bounds = false;  // both inequalities re-checked on return
};

/// Lowest-dimensional (then most populated) subspace holding at least
/// n^(mu^(d-d')) points with at most d * m^(d'+mu) d'-dependent families
/// among its m points; falls back to the whole space.
DenseSubspace find_dense_subspace(const PointConfig& points, double mu, const Tolerance& tol = {},
                                  std::uint64_t sample_seed = 0);

/// {"kind", "n", "d", "seed", "params": {...}}; errors name the offending field.
InstanceSpec instance_spec_from_json(const nlohmann::json& j);
/// {"p" | "c", "rounds", "hide"}: "c" sets p = c * n^(-1/eta(d)); rounds
/// defaults to 3d.
RevealPlan reveal_plan_from_json(const nlohmann::json& j, int n, int d);

}  // namespace distrecon
