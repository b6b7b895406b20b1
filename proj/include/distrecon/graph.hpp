#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

namespace distrecon {

/// Fixed-capacity bitset over vertices [0, n).
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int n) : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64, 0) {}

  int capacity() const { return n_; }
  bool test(int v) const { return (words_[word(v)] >> bit(v)) & 1u; }
  void set(int v) { words_[word(v)] |= std::uint64_t{1} << bit(v); }
  void reset(int v) { words_[word(v)] &= ~(std::uint64_t{1} << bit(v)); }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  /// *this = a & b
  void assign_and(const VertexSet& a, const VertexSet& b) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = a.words_[i] & b.words_[i];
  }
  /// *this = a & b, restricted to vertices greater than `after`.
  void assign_and_above(const VertexSet& a, const VertexSet& b, int after) {
    const std::size_t first = static_cast<std::size_t>(after + 1) / 64;
    for (std::size_t i = 0; i < first && i < words_.size(); ++i) words_[i] = 0;
    for (std::size_t i = first; i < words_.size(); ++i) words_[i] = a.words_[i] & b.words_[i];
    if (first < words_.size()) {
      const int shift = (after + 1) % 64;
      words_[first] &= ~std::uint64_t{0} << shift;
    }
  }
  VertexSet& operator&=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  VertexSet& operator|=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  bool operator==(const VertexSet&) const = default;

  /// Calls f(v) for each member in increasing order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        const int b = std::countr_zero(w);
        f(static_cast<int>(i * 64) + b);
        w &= w - 1;
      }
    }
  }
  /// Members of a & ~b greater than `after`, in increasing order.
  template <class F>
  static void for_each_difference_above(const VertexSet& a, const VertexSet& b, int after, F&& f) {
    for (std::size_t i = static_cast<std::size_t>(after + 1) / 64; i < a.words_.size(); ++i) {
      std::uint64_t w = a.words_[i] & ~b.words_[i];
      if (i == static_cast<std::size_t>(after + 1) / 64) w &= ~std::uint64_t{0} << ((after + 1) % 64);
      while (w) {
        const int v = static_cast<int>(i * 64) + std::countr_zero(w);
        f(v);
        w &= w - 1;
      }
    }
  }

  std::vector<int> members() const {
    std::vector<int> out;
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

 private:
  static std::size_t word(int v) { return static_cast<std::size_t>(v) >> 6; }
  static int bit(int v) { return v & 63; }

  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

using Edge = std::pair<int, int>;

/// Undirected simple graph on [0, n) with bitset adjacency rows.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(int n);
  SimpleGraph(int n, const std::vector<Edge>& edges);
  static SimpleGraph complete(int n);

  int order() const { return n_; }
  std::size_t edge_count() const { return edges_; }
  bool has_edge(int u, int v) const { return adj_[u].test(v); }
  /// Returns false if the edge was already present. Loops are rejected.
  bool add_edge(int u, int v);
  bool remove_edge(int u, int v);
  const VertexSet& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return adj_[v].count(); }
  bool is_complete() const;
  bool contains(const SimpleGraph& other) const;
  /// Sorted list of (u, v) with u < v.
  std::vector<Edge> edges() const;

  bool operator==(const SimpleGraph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

 private:
  void check_pair(int u, int v) const;

  int n_ = 0;
  std::size_t edges_ = 0;
  std::vector<VertexSet> adj_;
};

}  // namespace distrecon
