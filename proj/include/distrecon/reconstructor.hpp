#pragma once

// Coordinate-free reconstruction from partially revealed squared distances.
// Nothing in here sees ground-truth coordinates.

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "distrecon/bootstrap.hpp"
#include "distrecon/geometry.hpp"
#include "distrecon/graph.hpp"

namespace distrecon {

enum class Provenance : std::uint8_t { Unknown, Revealed, Inferred, Reduced };

const char* to_string(Provenance p) noexcept;

/// Known squared distances over [0, n) with their provenance.
class DistanceState {
 public:
  DistanceState() = default;
  explicit DistanceState(int n);

  int size() const { return n_; }
  bool known(int i, int j) const { return graph_.has_edge(i, j); }
  /// NaN when unknown; 0 on the diagonal.
  double dist2(int i, int j) const { return d2_[index(i, j)]; }
  Provenance provenance(int i, int j) const { return prov_[index(i, j)]; }
  void set(int i, int j, double dist2, Provenance p);
  void forget(int i, int j);
  std::size_t known_count() const { return graph_.edge_count(); }
  /// Graph of known pairs.
  const SimpleGraph& graph() const { return graph_; }
  SquaredDistanceMatrix matrix(std::span<const int> indices) const;
  /// Largest known squared distance.
  double scale() const;
  /// Copies every pair known in `other` and unknown here.
  void absorb(const DistanceState& other);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  SimpleGraph graph_;
  std::vector<double> d2_;
  std::vector<Provenance> prov_;
};

struct ClosureRecord {
  int u = 0;
  int v = 0;
  std::vector<int> base;
  double dist2 = 0.0;
  int round = 0;
};

using ClosureLog = std::vector<ClosureRecord>;

struct GeometricClosure {
  DistanceState state;
  ClosureLog log;
  ClosureStats stats;
};

/// Fixed point of: infer uv whenever some d-independent (d+1)-set T has all
/// distances inside T+u and T+v known. Throws InconsistencyDetected if a
/// base admits no embedding of its neighbours.
GeometricClosure geometric_closure(const DistanceState& state, int d, const Tolerance& tol = {});

/// Re-applies a closure log to the revealed-only state, recomputing each
/// value from its recorded base. Throws if a record is not derivable.
DistanceState replay_closure_log(const DistanceState& revealed, const ClosureLog& log, int d,
                                 const Tolerance& tol = {});

using Partition = std::vector<std::vector<int>>;

/// Components of the graph of known zero distances, sorted by smallest
/// member. `active` restricts the vertex set (all vertices when empty).
Partition merge_duplicates(const DistanceState& state, const Tolerance& tol = {},
                           std::span<const int> active = {});

/// Marks pairs inside a component as coincident and copies every known
/// distance to the other members of the component.
void share_within_components(DistanceState& state, const Partition& parts);

/// Degree-threshold set followed by greedy removal until every pair inside
/// is known. Returns sorted indices.
std::vector<int> extract_reconstructible_clique(const DistanceState& state, double delta,
                                                std::span<const int> active = {});

/// Embedded known clique: members[k] sits at coords.point(k); coords.dim is
/// the affine dimension of the clique.
struct AnchorEmbedding {
  std::vector<int> members;
  PointConfig coords;

  int dim() const { return coords.dim; }
  int position(int v) const;  // -1 if absent
};

/// Projection of v onto the span of the anchor and its squared distance to
/// it, or nullopt when v has no known distances to an independent
/// (dim+1)-subset of the anchor.
std::optional<Projection> recover_projection(const AnchorEmbedding& anchor, const DistanceState& state, int v,
                                             const Tolerance& tol = {});

struct ReductionStep {
  int round = 0;
  std::vector<int> index_set;      // sorted
  int subspace_dim = 0;
  AnchorEmbedding anchor;
  Eigen::MatrixXd projections;     // row k: projection of index_set[k]
  Eigen::VectorXd residuals;       // squared distance of index_set[k] to the subspace
  Eigen::MatrixXd b;               // b(k, l) = |proj_k - proj_l|^2

  double b_at(int i, int j) const;  // by original index
};

struct Reduction {
  ReductionStep step;
  DistanceState state;
};

/// Replaces each known squared distance inside index_set by dist2 - b.
/// Throws NegativeResidual when that is significantly negative.
/// Results within eps_rel * reference_scale of zero snap to zero;
/// reference_scale <= 0 means state.scale().
Reduction reduce_dimension(const DistanceState& state, const std::map<int, Projection>& projections,
                           std::span<const int> index_set, const Tolerance& tol = {},
                           double reference_scale = 0.0);

struct PipelineOptions {
  double delta = 0.1;
  /// Reveal rounds consumed per level (closure, projection, reduction). 0
  /// picks min(3, max(1, rounds / d)).
  int rounds_per_level = 0;
};

struct PipelineResult {
  std::vector<int> index_set;            // surviving indices, sorted
  Eigen::MatrixXd dist2;                 // assembled squared distances over index_set
  PointConfig embedding;                 // rows follow index_set
  std::vector<ReductionStep> steps;
  std::vector<ClosureLog> closure_logs;  // one per level
  double pairs_known_after_closure = 0.0;
  int levels = 0;
  bool stalled = false;                  // stopped before reaching dimension 0
};

PipelineResult run_pipeline(const std::vector<DistanceState>& rounds, int d, const PipelineOptions& options = {},
                            const Tolerance& tol = {});

}  // namespace distrecon
