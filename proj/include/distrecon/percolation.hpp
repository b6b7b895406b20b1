#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "distrecon/bootstrap.hpp"
#include "distrecon/graph.hpp"

namespace distrecon {

/// Family of (d+1)-subsets through which percolation may not spread.
class PollutionSet {
 public:
  explicit PollutionSet(int d = 0) : d_(d) {}

  int d() const { return d_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  /// Stores the sorted subset; throws unless it has d+1 distinct vertices.
  void insert(std::vector<int> subset);
  bool contains(std::span<const int> sorted_subset) const;
  std::vector<std::vector<int>> members() const;  // sorted

 private:
  struct Hash {
    std::size_t operator()(const std::vector<int>& s) const noexcept;
  };
  int d_;
  std::unordered_set<std::vector<int>, Hash> members_;
};

SimpleGraph closure(const SimpleGraph& g, int clique_size, ClosureStats* stats = nullptr);

SimpleGraph polluted_closure(const SimpleGraph& g, int d, const PollutionSet& pollution,
                             ClosureStats* stats = nullptr);

/// The chain H_r of r copies of K_{d+3}: consecutive copies share the two
/// endpoints of a removed edge, and the root edge is removed from copy 1.
struct GadgetDescriptor {
  int d = 0;
  int r = 0;
  SimpleGraph graph;
  Edge root;
  std::vector<std::vector<int>> bases;  // base of copy i, in chain order
  std::vector<Edge> removed;            // e_1 .. e_r
};

GadgetDescriptor build_gadget(int d, int r);

/// G(n, p) with one uniform draw per pair, in lexicographic pair order, so
/// graphs for different p from the same seed are nested.
SimpleGraph sample_gnp(int n, double p, std::uint64_t seed);

/// Fraction of `trials` samples of G(n, p) whose K_s-closure is complete.
/// Trial i uses seed derive_seed(seed, i).
double estimate_percolation_probability(int n, double p, int clique_size, int trials, std::uint64_t seed);

// Edge-list text format: one "u v" pair per line, 0-indexed. An optional
// first line "# n <count>" fixes the vertex count.
SimpleGraph read_edge_list(const std::string& text);
std::string write_edge_list(const SimpleGraph& g);

PollutionSet pollution_from_json(const std::string& text, int d);
std::string pollution_to_json(const PollutionSet& p);

}  // namespace distrecon
