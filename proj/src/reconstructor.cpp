#include "distrecon/reconstructor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace distrecon {

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Unknown: return "unknown";
    case Provenance::Revealed: return "revealed";
    case Provenance::Inferred: return "inferred";
    case Provenance::Reduced: return "reduced";
  }
  return "unknown";
}

DistanceState::DistanceState(int n)
    : n_(n),
      graph_(n),
      d2_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), SquaredDistanceMatrix::kUnknown),
      prov_(d2_.size(), Provenance::Unknown) {
  for (int i = 0; i < n; ++i) d2_[index(i, i)] = 0.0;
}

void DistanceState::set(int i, int j, double dist2, Provenance p) {
  if (i == j) throw Error(ErrorKind::InvalidArgument, "cannot set a diagonal entry");
  if (!(dist2 >= 0.0)) throw Error(ErrorKind::NegativeEntry, "squared distance must be non-negative");
  graph_.add_edge(i, j);
  d2_[index(i, j)] = d2_[index(j, i)] = dist2;
  prov_[index(i, j)] = prov_[index(j, i)] = p;
}

void DistanceState::forget(int i, int j) {
  if (i == j) return;
  graph_.remove_edge(i, j);
  d2_[index(i, j)] = d2_[index(j, i)] = SquaredDistanceMatrix::kUnknown;
  prov_[index(i, j)] = prov_[index(j, i)] = Provenance::Unknown;
}

SquaredDistanceMatrix DistanceState::matrix(std::span<const int> indices) const {
  const auto k = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd e(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) e(a, b) = dist2(indices[a], indices[b]);
  return SquaredDistanceMatrix(std::move(e));
}

double DistanceState::scale() const {
  double s = 0.0;
  for (double x : d2_)
    if (!std::isnan(x)) s = std::max(s, x);
  return s;
}

void DistanceState::absorb(const DistanceState& other) {
  for (const auto& [i, j] : other.graph().edges()) {
    if (!known(i, j)) set(i, j, other.dist2(i, j), other.provenance(i, j));
  }
}

namespace {

std::vector<int> all_vertices(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<int> resolve_active(const DistanceState& state, std::span<const int> active) {
  if (active.empty()) return all_vertices(state.size());
  std::vector<int> v(active.begin(), active.end());
  std::sort(v.begin(), v.end());
  return v;
}

std::string describe(std::span<const int> base) {
  std::string s = "{";
  for (std::size_t i = 0; i < base.size(); ++i) s += (i ? "," : "") + std::to_string(base[i]);
  return s + "}";
}

// Squared distance matrix over base + {u, v}, with (u, v) unknown.
SquaredDistanceMatrix base_matrix(const DistanceState& s, std::span<const int> base, int u, int v) {
  std::vector<int> idx(base.begin(), base.end());
  idx.push_back(u);
  idx.push_back(v);
  return s.matrix(idx);
}

// Thresholds inside a closure are measured against the whole instance.
Tolerance anchored_to(const Tolerance& tol, const DistanceState& state) {
  Tolerance t = tol;
  t.reference_scale = std::max(t.reference_scale, state.scale());
  return t;
}

}  // namespace

GeometricClosure geometric_closure(const DistanceState& state, int d, const Tolerance& tol) {
  if (d < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
  GeometricClosure out{state, {}, {}};
  SimpleGraph g = state.graph();
  const Tolerance local = anchored_to(tol, state);
  ClosureLog pending;
  int round = 0;
  // Well-conditioned bases first: passes over conditioning tiers ending at
  // the requested tolerance, returning to the strictest tier after any round
  // a looser one completes. Closure is monotone and confluent, so the final
  // mask is that of a single pass while values come from the best-conditioned
  // bases available, which keeps rounding from compounding along long chains.
  std::vector<double> tiers;
  for (double e = 1e-2; e > local.eps_rel; e *= 0.1) tiers.push_back(e);
  tiers.push_back(local.eps_rel);
  Tolerance gate = local;
  std::size_t tier = 0;
  bool yield = false;
  auto accept = [&](int u, int v, std::span<const int> base) {
    if (yield) return false;
    if (gate.eps_rel > local.eps_rel && !is_independent(out.state.matrix(base), d, gate)) return false;
    const SquaredDistanceMatrix m = base_matrix(out.state, base, u, v);
    Recovery r;
    try {
      r = recover_missing_distance(m, d, d + 1, d + 2, local);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InconsistentDistances) throw;
      throw Error(ErrorKind::InconsistencyDetected,
                  "pair (" + std::to_string(u) + "," + std::to_string(v) + ") with base " + describe(base) + ": " +
                      e.what());
    }
    if (!r.determined()) return false;
    pending.push_back({u, v, std::vector<int>(base.begin(), base.end()), r.dist2, round + 1});
    return true;
  };
  auto on_round = [&](std::span<const Edge>) {
    ++round;
    for (auto& rec : pending) out.state.set(rec.u, rec.v, rec.dist2, Provenance::Inferred);
    out.log.insert(out.log.end(), std::make_move_iterator(pending.begin()), std::make_move_iterator(pending.end()));
    pending.clear();
    yield = tier > 0;
  };
  while (tier < tiers.size()) {
    gate.eps_rel = tiers[tier];
    yield = false;
    const ClosureStats pass = bootstrap_closure(g, d + 1, accept, on_round);
    out.stats.rounds += pass.rounds;
    out.stats.added += pass.added;
    out.stats.evaluated += pass.evaluated;
    tier = (pass.added > 0 && tier > 0) ? 0 : tier + 1;
  }
  return out;
}

DistanceState replay_closure_log(const DistanceState& revealed, const ClosureLog& log, int d, const Tolerance& tol) {
  DistanceState s = revealed;
  const Tolerance local = anchored_to(tol, revealed);
  for (const auto& rec : log) {
    if (s.known(rec.u, rec.v)) {
      throw Error(ErrorKind::InvalidArgument, "log infers an already known pair");
    }
    std::vector<int> idx = rec.base;
    idx.push_back(rec.u);
    idx.push_back(rec.v);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (!(a + 2 == idx.size() && b + 1 == idx.size()) && !s.known(idx[a], idx[b]))
          throw Error(ErrorKind::IncompleteMatrix, "log record uses an unknown distance");
    const Recovery r = recover_missing_distance(base_matrix(s, rec.base, rec.u, rec.v), d, d + 1, d + 2, local);
    if (!r.determined() || r.dist2 != rec.dist2) {
      throw Error(ErrorKind::InvalidArgument, "log record does not reproduce");
    }
    s.set(rec.u, rec.v, r.dist2, Provenance::Inferred);
  }
  return s;
}

Partition merge_duplicates(const DistanceState& state, const Tolerance& tol, std::span<const int> active) {
  const std::vector<int> verts = resolve_active(state, active);
  const int n = state.size();
  const double scale = std::max(state.scale(), tol.reference_scale);
  const double zero = tol.eps_rel * scale;
  const double slack = tol.consistency(scale);

  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  VertexSet in_active(n);
  for (int v : verts) in_active.set(v);
  for (int i : verts) {
    VertexSet::for_each_difference_above(state.graph().neighbors(i), VertexSet(n), i, [&](int j) {
      if (in_active.test(j) && state.dist2(i, j) <= zero) {
        const int a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    });
  }

  Partition parts;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int v : verts) {
    const int root = find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(parts.size());
      parts.emplace_back();
    }
    parts[slot[root]].push_back(v);
  }

  for (const auto& part : parts) {
    if (part.size() < 2) continue;
    // Members may sit up to this far apart along a chain of merges.
    const double reach = static_cast<double>(part.size() - 1) * std::sqrt(zero);
    for (std::size_t a = 0; a < part.size(); ++a)
      for (std::size_t b = a + 1; b < part.size(); ++b)
        if (state.known(part[a], part[b]) && state.dist2(part[a], part[b]) > std::max(slack, reach * reach))
          throw Error(ErrorKind::ZeroConflict, "points " + std::to_string(part[a]) + " and " +
                                                   std::to_string(part[b]) + " are both coincident and apart");
    for (int w = 0; w < n; ++w) {
      double lo = INFINITY, hi = -INFINITY;
      for (int m : part) {
        if (m == w || !state.known(m, w)) continue;
        lo = std::min(lo, state.dist2(m, w));
        hi = std::max(hi, state.dist2(m, w));
      }
      if (hi - lo > slack + 2.0 * reach * std::sqrt(hi)) {
        throw Error(ErrorKind::ZeroConflict, "coincident points disagree on their distance to " + std::to_string(w) +
                                                 " (" + std::to_string(lo) + " vs " + std::to_string(hi) + ")");
      }
    }
  }
  return parts;
}

void share_within_components(DistanceState& state, const Partition& parts) {
  const int n = state.size();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < parts.size(); ++c)
    for (int v : parts[c]) comp[v] = static_cast<int>(c);

  for (const auto& part : parts) {
    for (std::size_t a = 0; a < part.size(); ++a)
      for (std::size_t b = a + 1; b < part.size(); ++b) {
        const int i = part[a], j = part[b];
        state.set(i, j, 0.0, state.known(i, j) ? state.provenance(i, j) : Provenance::Inferred);
      }
  }

  // One representative value per pair of components, taken from the first
  // known pair in lexicographic order.
  std::map<std::pair<int, int>, double> shared;
  for (const auto& [i, j] : state.graph().edges()) {
    const int ci = comp[i], cj = comp[j];
    if (ci < 0 || cj < 0 || ci == cj) continue;
    if (parts[ci].size() == 1 && parts[cj].size() == 1) continue;
    shared.try_emplace({std::min(ci, cj), std::max(ci, cj)}, state.dist2(i, j));
  }
  for (const auto& [key, value] : shared) {
    for (int i : parts[key.first])
      for (int j : parts[key.second])
        if (!state.known(i, j)) state.set(i, j, value, Provenance::Inferred);
  }
}

std::vector<int> extract_reconstructible_clique(const DistanceState& state, double delta, std::span<const int> active) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  const std::vector<int> verts = resolve_active(state, active);
  const int n = state.size();
  const double m = static_cast<double>(verts.size());
  VertexSet pool(n);
  for (int v : verts) pool.set(v);

  // Degree counted with the vertex itself, so a fully known set survives
  // for every delta.
  VertexSet chosen(n);
  VertexSet tmp(n);
  for (int v : verts) {
    tmp.assign_and(state.graph().neighbors(v), pool);
    if (tmp.count() + 1 > (1.0 - delta) * m) chosen.set(v);
  }

  while (true) {
    int worst = -1, worst_missing = 0;
    const int size = chosen.count();
    chosen.for_each([&](int v) {
      tmp.assign_and(state.graph().neighbors(v), chosen);
      const int missing = size - 1 - tmp.count();
      if (missing > worst_missing) {
        worst_missing = missing;
        worst = v;
      }
    });
    if (worst < 0) break;
    chosen.reset(worst);
  }
  return chosen.members();
}

int AnchorEmbedding::position(int v) const {
  const auto it = std::lower_bound(members.begin(), members.end(), v);
  if (it == members.end() || *it != v) return -1;
  return static_cast<int>(it - members.begin());
}

std::optional<Projection> recover_projection(const AnchorEmbedding& anchor, const DistanceState& state, int v,
                                             const Tolerance& tol) {
  if (const int pos = anchor.position(v); pos >= 0) return Projection{anchor.coords.point(pos), 0.0};
  const int dim = anchor.dim();
  std::vector<int> reach;  // anchor positions with a known distance to v
  for (std::size_t k = 0; k < anchor.members.size(); ++k)
    if (state.known(v, anchor.members[k])) reach.push_back(static_cast<int>(k));
  if (static_cast<int>(reach.size()) < dim + 1) return std::nullopt;

  // Pick dim+1 reachable anchor points greedily, each farthest from the span
  // of those already picked.
  const Eigen::MatrixXd& xs = anchor.coords.coords;
  double span_scale = tol.reference_scale;
  for (int k : reach) span_scale = std::max(span_scale, (xs.row(k) - xs.row(reach[0])).squaredNorm());
  std::vector<int> picked{reach[0]};
  for (int step = 0; step < dim; ++step) {
    const PointConfig basis = anchor.coords.subset(picked);
    int best = -1;
    double best_dist = 0.0;
    for (int k : reach) {
      const double d2 = project_onto_span(anchor.coords.point(k), basis, tol).dist2;
      if (d2 > best_dist) {
        best_dist = d2;
        best = k;
      }
    }
    // Anchor coordinates carry embedding noise at the consistency level.
    if (best < 0 || best_dist <= tol.consistency(span_scale)) return std::nullopt;
    picked.push_back(best);
  }

  const Eigen::VectorXd origin = anchor.coords.point(picked[0]);
  const double to_origin = state.dist2(v, anchor.members[picked[0]]);
  if (dim == 0) return Projection{origin, to_origin};
  Eigen::MatrixXd w(dim, dim);
  Eigen::VectorXd rhs(dim);
  double scale = std::max(to_origin, tol.reference_scale);
  for (int a = 0; a < dim; ++a) {
    w.row(a) = xs.row(picked[a + 1]) - origin.transpose();
    const double to_a = state.dist2(v, anchor.members[picked[a + 1]]);
    rhs(a) = 0.5 * (to_origin + w.row(a).squaredNorm() - to_a);
    scale = std::max({scale, to_a, w.row(a).squaredNorm()});
  }
  const Eigen::VectorXd y = w.colPivHouseholderQr().solve(rhs);
  double residual = to_origin - y.squaredNorm();
  if (residual < -tol.consistency(scale)) {
    throw Error(ErrorKind::InconsistencyDetected,
                "point " + std::to_string(v) + " cannot be placed against the anchor");
  }
  residual = std::max(residual, 0.0);
  return Projection{origin + y, residual};
}

double ReductionStep::b_at(int i, int j) const {
  const auto pi = std::lower_bound(index_set.begin(), index_set.end(), i) - index_set.begin();
  const auto pj = std::lower_bound(index_set.begin(), index_set.end(), j) - index_set.begin();
  return b(pi, pj);
}

Reduction reduce_dimension(const DistanceState& state, const std::map<int, Projection>& projections,
                           std::span<const int> index_set, const Tolerance& tol, double reference_scale) {
  Reduction out;
  ReductionStep& step = out.step;
  step.index_set.assign(index_set.begin(), index_set.end());
  std::sort(step.index_set.begin(), step.index_set.end());
  const auto k = static_cast<Eigen::Index>(step.index_set.size());
  int dim = 0;
  for (int i : step.index_set) {
    const auto it = projections.find(i);
    if (it == projections.end()) {
      throw Error(ErrorKind::InvalidArgument, "index " + std::to_string(i) + " has no recovered projection");
    }
    dim = static_cast<int>(it->second.point.size());
  }
  step.subspace_dim = dim;
  step.projections.resize(k, dim);
  step.residuals.resize(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const Projection& p = projections.at(step.index_set[a]);
    step.projections.row(a) = p.point.transpose();
    step.residuals(a) = p.dist2;
  }
  step.b.resize(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index c = 0; c < k; ++c) step.b(a, c) = (step.projections.row(a) - step.projections.row(c)).squaredNorm();

  const double ref = std::max(reference_scale > 0.0 ? reference_scale : state.scale(), tol.reference_scale);
  const double zero = tol.eps_rel * ref;
  const double slack = tol.consistency(ref);
  out.state = DistanceState(state.size());
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index c = a + 1; c < k; ++c) {
      const int i = step.index_set[a], j = step.index_set[c];
      if (!state.known(i, j)) continue;
      double r = state.dist2(i, j) - step.b(a, c);
      if (r < -slack) {
        throw Error(ErrorKind::NegativeResidual, "pair (" + std::to_string(i) + "," + std::to_string(j) +
                                                     ") reduces to " + std::to_string(r));
      }
      if (r <= zero) r = 0.0;
      out.state.set(i, j, r, Provenance::Reduced);
    }
  }
  return out;
}

namespace {

class PipelineRun {
 public:
  PipelineRun(const std::vector<DistanceState>& rounds, int d, const PipelineOptions& opt, const Tolerance& tol)
      : rounds_(rounds), d_(d), opt_(opt), tol_(tol), n_(rounds.front().size()) {
    for (const auto& r : rounds_) {
      if (r.size() != n_) throw Error(ErrorKind::InvalidArgument, "reveal rounds disagree on n");
      ref_scale_ = std::max(ref_scale_, r.scale());
    }
    tol_.reference_scale = std::max(tol_.reference_scale, ref_scale_);
    per_level_ = opt_.rounds_per_level > 0
                     ? opt_.rounds_per_level
                     : std::min(3, std::max(1, static_cast<int>(rounds_.size()) / std::max(d_, 1)));
    current_ = DistanceState(n_);
    bsum_ = Eigen::MatrixXd::Zero(n_, n_);
    active_ = all_vertices(n_);
  }

  PipelineResult run() {
    PipelineResult result;
    int dim = d_;
    std::vector<int> final_set;
    bool resolved = false;
    while (dim > 0) {
      const int level = result.levels++;
      consume(level);
      share_within_components(current_, merge_duplicates(current_, tol_, active_));
      GeometricClosure closed = geometric_closure(current_, dim, tol_);
      current_ = std::move(closed.state);
      if (level == 0) {
        const double pairs = 0.5 * n_ * (n_ - 1.0);
        result.pairs_known_after_closure = pairs > 0 ? static_cast<double>(current_.known_count()) / pairs : 1.0;
      }
      result.closure_logs.push_back(std::move(closed.log));

      std::vector<int> clique = extract_reconstructible_clique(current_, opt_.delta, active_);
      if (clique.empty()) {
        result.stalled = true;
        break;
      }
      AnchorEmbedding anchor = embed_anchor(clique, dim);
      if (anchor.dim() == 0 && anchor.members.size() < active_.size()) {
        extend_anchor(clique);
        anchor = embed_anchor(clique, dim);
      }
      if (anchor.dim() == 0) {
        if (anchor.members.size() == active_.size()) {
          resolved = true;
          final_set = active_;
        } else {
          result.stalled = true;
          final_set = anchor.members;
        }
        break;
      }

      if (per_level_ >= 2) consume(level);
      std::map<int, Projection> projections;
      std::vector<int> covered;
      for (int v : active_) {
        if (auto p = recover_projection(anchor, current_, v, tol_)) {
          projections.emplace(v, std::move(*p));
          covered.push_back(v);
        }
      }
      if (per_level_ >= 3) consume(level);

      Reduction red = reduce_dimension(current_, projections, covered, tol_, ref_scale_);
      red.step.round = level;
      red.step.anchor = std::move(anchor);
      for (std::size_t a = 0; a < covered.size(); ++a)
        for (std::size_t c = 0; c < covered.size(); ++c)
          bsum_(covered[a], covered[c]) += red.step.b(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
      dim -= red.step.subspace_dim;
      active_ = covered;
      current_ = std::move(red.state);
      result.steps.push_back(std::move(red.step));
      if (dim == 0) {
        resolved = true;
        final_set = active_;
      }
    }
    if (result.levels == 0) {
      resolved = true;
      final_set = active_;
    }

    result.index_set = final_set;
    const auto k = static_cast<Eigen::Index>(final_set.size());
    result.dist2 = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index c = a + 1; c < k; ++c) {
        const int i = final_set[a], j = final_set[c];
        double value = bsum_(i, j);
        if (!resolved) value += current_.dist2(i, j);
        result.dist2(a, c) = result.dist2(c, a) = value;
      }
    }
    const SquaredDistanceMatrix assembled(result.dist2);
    try {
      result.embedding = embed_from_distances(assembled, d_, tol_);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RankTooHigh && e.kind() != ErrorKind::NonEuclidean) throw;
      result.embedding = truncated_embedding(assembled, d_);
    }
    return result;
  }

 private:
  // Merges the next unconsumed reveal round, in reduced units for pairs
  // inside the active set.
  void consume(int level) {
    if (cursor_ >= rounds_.size()) return;
    const DistanceState& round = rounds_[cursor_++];
    VertexSet in_active(n_);
    for (int v : active_) in_active.set(v);
    const double zero = tol_.eps_rel * ref_scale_;
    const double slack = tol_.consistency(ref_scale_);
    for (const auto& [i, j] : round.graph().edges()) {
      if (!in_active.test(i) || !in_active.test(j) || current_.known(i, j)) continue;
      double r = round.dist2(i, j) - bsum_(i, j);
      if (r < -slack) {
        throw Error(ErrorKind::NegativeResidual, "revealed pair (" + std::to_string(i) + "," + std::to_string(j) +
                                                     ") is shorter than its recovered projection");
      }
      if (r <= zero) r = 0.0;
      current_.set(i, j, r, level == 0 ? Provenance::Revealed : Provenance::Reduced);
    }
  }

  AnchorEmbedding embed_anchor(const std::vector<int>& clique, int dim) const {
    AnchorEmbedding a;
    a.members = clique;
    // Inferred entries carry rounding from their own bases, which adds up
    // across a large clique; use the consistency slack as the spectral cut.
    Tolerance loose = tol_;
    loose.eps_rel = std::sqrt(tol_.eps_rel);
    loose.exact_mode = false;
    const PointConfig full = embed_from_distances(current_.matrix(clique), dim, loose);
    const int rank = affine_dimension(full, loose);
    a.coords = PointConfig(rank, full.coords.leftCols(rank));
    return a;
  }

  // A single-location anchor cannot span anything. Add the vertex known to
  // the whole anchor and at nonzero distance from it that keeps the most
  // other vertices fully connected to the result, then close greedily.
  void extend_anchor(std::vector<int>& clique) const {
    VertexSet members(n_);
    for (int v : clique) members.set(v);
    auto knows_all = [&](int w, const VertexSet& set) {
      VertexSet t(n_);
      t.assign_and(current_.graph().neighbors(w), set);
      return t.count() == set.count() - (set.test(w) ? 1 : 0);
    };
    const double zero = tol_.eps_rel * ref_scale_;
    int best = -1, best_support = -1;
    for (int w : active_) {
      if (members.test(w) || !knows_all(w, members)) continue;
      if (current_.dist2(w, clique.front()) <= zero) continue;
      VertexSet with(members);
      with.set(w);
      int support = 0;
      for (int x : active_)
        if (!with.test(x) && knows_all(x, with)) ++support;
      if (support > best_support) {
        best_support = support;
        best = w;
      }
    }
    if (best < 0) return;
    members.set(best);
    for (int x : active_) {
      if (!members.test(x) && knows_all(x, members)) members.set(x);
    }
    clique = members.members();
  }

  const std::vector<DistanceState>& rounds_;
  int d_;
  PipelineOptions opt_;
  Tolerance tol_;
  int n_;
  int per_level_ = 1;
  std::size_t cursor_ = 0;
  double ref_scale_ = 0.0;
  DistanceState current_;
  Eigen::MatrixXd bsum_;
  std::vector<int> active_;
};

}  // namespace

PipelineResult run_pipeline(const std::vector<DistanceState>& rounds, int d, const PipelineOptions& options,
                            const Tolerance& tol) {
  if (rounds.empty()) throw Error(ErrorKind::InvalidArgument, "at least one reveal round is required");
  if (d < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
  return PipelineRun(rounds, d, options, tol).run();
}

}  // namespace distrecon
