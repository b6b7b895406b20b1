#pragma once

// Round-synchronous worklist engine for K_{b+2} graph bootstrap percolation
// where a candidate base (a b-clique in the common neighbourhood of the
// missing edge) may be vetoed by a caller-supplied predicate.
//
// Round t evaluates every queued non-edge against the frozen graph G_t, then
// adds all accepted edges at once. Only non-edges whose common neighbourhood
// or base cliques gained an edge are re-queued.

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "distrecon/graph.hpp"

namespace distrecon {

struct ClosureStats {
  int rounds = 0;           // rounds that added at least one edge
  std::size_t added = 0;    // edges added in total
  std::size_t evaluated = 0;
};

namespace detail {

// Lexicographic search for a `need`-clique inside `candidates`; stops at the
// first clique for which accept(clique) is true.
template <class Accept>
class CliqueSearch {
 public:
  CliqueSearch(const SimpleGraph& g, int size) : g_(g), size_(size), scratch_(static_cast<std::size_t>(size)) {
    for (auto& s : scratch_) s = VertexSet(g.order());
    stack_.reserve(static_cast<std::size_t>(size));
  }

  bool find(const VertexSet& candidates, Accept& accept) {
    stack_.clear();
    if (size_ == 0) return accept(std::span<const int>(stack_));
    return recurse(candidates, size_, accept);
  }

 private:
  bool recurse(const VertexSet& cand, int need, Accept& accept) {
    if (cand.count() < need) return false;
    bool hit = false;
    VertexSet& next = scratch_[static_cast<std::size_t>(size_ - need)];
    cand.for_each([&](int v) {
      if (hit) return;
      stack_.push_back(v);
      if (need == 1) {
        hit = accept(std::span<const int>(stack_));
      } else {
        next.assign_and_above(cand, g_.neighbors(v), v);
        hit = recurse(next, need - 1, accept);
        // recursion reuses deeper scratch only, so `next` is still ours here
      }
      stack_.pop_back();
    });
    return hit;
  }

  const SimpleGraph& g_;
  int size_;
  std::vector<VertexSet> scratch_;
  std::vector<int> stack_;
};

}  // namespace detail

/// Runs the closure in place. accept(u, v, base) is called with u < v and a
/// sorted base of `base_size` vertices forming a clique in N(u) & N(v); it
/// returns whether the edge uv may be added through that base. on_round(edges)
/// runs after each round's edges have been added to g.
template <class Accept, class OnRound>
ClosureStats bootstrap_closure(SimpleGraph& g, int base_size, Accept&& accept, OnRound&& on_round) {
  const int n = g.order();
  ClosureStats stats;
  std::vector<VertexSet> queued(static_cast<std::size_t>(n), VertexSet(n));
  std::vector<Edge> frontier;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!g.has_edge(u, v)) {
        frontier.emplace_back(u, v);
        queued[u].set(v);
      }
    }
  }

  VertexSet common(n);
  int cu = 0, cv = 0;
  auto base_ok = [&](std::span<const int> base) { return accept(cu, cv, base); };
  detail::CliqueSearch<decltype(base_ok)> search(g, base_size);

  auto enqueue = [&](int a, int b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    if (g.has_edge(a, b) || queued[a].test(b)) return;
    queued[a].set(b);
    frontier.emplace_back(a, b);
  };

  std::vector<Edge> found;
  while (!frontier.empty()) {
    std::sort(frontier.begin(), frontier.end());
    found.clear();
    for (const auto& [u, v] : frontier) {
      queued[u].reset(v);
      ++stats.evaluated;
      common.assign_and(g.neighbors(u), g.neighbors(v));
      cu = u;
      cv = v;
      if (search.find(common, base_ok)) found.emplace_back(u, v);
    }
    frontier.clear();
    if (found.empty()) break;
    ++stats.rounds;
    for (const auto& [u, v] : found) g.add_edge(u, v);
    stats.added += found.size();
    on_round(std::span<const Edge>(found));

    for (const auto& [x, y] : found) {
      // xy joins an endpoint to a base vertex.
      g.neighbors(y).for_each([&](int b) { enqueue(x, b); });
      g.neighbors(x).for_each([&](int b) { enqueue(y, b); });
      // xy lies inside a base.
      if (base_size >= 2) {
        common.assign_and(g.neighbors(x), g.neighbors(y));
        common.for_each([&](int a) {
          VertexSet::for_each_difference_above(common, g.neighbors(a), a, [&](int b) { enqueue(a, b); });
        });
      }
    }
  }
  return stats;
}

template <class Accept>
ClosureStats bootstrap_closure(SimpleGraph& g, int base_size, Accept&& accept) {
  return bootstrap_closure(g, base_size, std::forward<Accept>(accept), [](std::span<const Edge>) {});
}

}  // namespace distrecon
