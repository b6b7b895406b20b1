#include "distrecon/percolation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

#include "distrecon/error.hpp"
#include "distrecon/rng.hpp"

namespace distrecon {

SimpleGraph::SimpleGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n), VertexSet(n)) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative vertex count");
}

SimpleGraph::SimpleGraph(int n, const std::vector<Edge>& edges) : SimpleGraph(n) {
  for (const auto& [u, v] : edges) add_edge(u, v);
}

SimpleGraph SimpleGraph::complete(int n) {
  SimpleGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

void SimpleGraph::check_pair(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
  if (u == v) throw Error(ErrorKind::InvalidArgument, "loops are not allowed");
}

bool SimpleGraph::add_edge(int u, int v) {
  check_pair(u, v);
  if (adj_[u].test(v)) return false;
  adj_[u].set(v);
  adj_[v].set(u);
  ++edges_;
  return true;
}

bool SimpleGraph::remove_edge(int u, int v) {
  check_pair(u, v);
  if (!adj_[u].test(v)) return false;
  adj_[u].reset(v);
  adj_[v].reset(u);
  --edges_;
  return true;
}

bool SimpleGraph::is_complete() const {
  return 2 * edges_ == static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ > 0 ? n_ - 1 : 0);
}

bool SimpleGraph::contains(const SimpleGraph& other) const {
  if (other.n_ != n_) return false;
  for (int v = 0; v < n_; ++v) {
    VertexSet both(n_);
    both.assign_and(adj_[v], other.adj_[v]);
    if (!(both == other.adj_[v])) return false;
  }
  return true;
}

std::vector<Edge> SimpleGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_);
  for (int u = 0; u < n_; ++u) {
    VertexSet::for_each_difference_above(adj_[u], VertexSet(n_), u, [&](int v) { out.emplace_back(u, v); });
  }
  return out;
}

void PollutionSet::insert(std::vector<int> subset) {
  std::sort(subset.begin(), subset.end());
  if (static_cast<int>(subset.size()) != d_ + 1) {
    throw Error(ErrorKind::InvalidArgument, "pollution member must have " + std::to_string(d_ + 1) + " vertices");
  }
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
    throw Error(ErrorKind::InvalidArgument, "pollution member has a repeated vertex");
  }
  members_.insert(std::move(subset));
}

bool PollutionSet::contains(std::span<const int> sorted_subset) const {
  if (members_.empty()) return false;
  // Lookup key is rebuilt per call; the inner loop of the closure is
  // dominated by the clique search, not by this copy.
  thread_local std::vector<int> key;
  key.assign(sorted_subset.begin(), sorted_subset.end());
  return members_.contains(key);
}

std::vector<std::vector<int>> PollutionSet::members() const {
  std::vector<std::vector<int>> out(members_.begin(), members_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t PollutionSet::Hash::operator()(const std::vector<int>& s) const noexcept {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (int v : s) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
  return static_cast<std::size_t>(h);
}

SimpleGraph closure(const SimpleGraph& g, int clique_size, ClosureStats* stats) {
  if (clique_size < 3) throw Error(ErrorKind::InvalidArgument, "clique size must be at least 3");
  SimpleGraph out = g;
  const ClosureStats s = bootstrap_closure(out, clique_size - 2, [](int, int, std::span<const int>) { return true; });
  if (stats) *stats = s;
  return out;
}

SimpleGraph polluted_closure(const SimpleGraph& g, int d, const PollutionSet& pollution, ClosureStats* stats) {
  if (d < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
  if (!pollution.empty() && pollution.d() != d) {
    throw Error(ErrorKind::InvalidArgument, "pollution set built for a different dimension");
  }
  SimpleGraph out = g;
  const ClosureStats s = bootstrap_closure(
      out, d + 1, [&](int, int, std::span<const int> base) { return !pollution.contains(base); });
  if (stats) *stats = s;
  return out;
}

GadgetDescriptor build_gadget(int d, int r) {
  if (d < 1 || r < 1) throw Error(ErrorKind::InvalidArgument, "gadget needs d >= 1 and r >= 1");
  GadgetDescriptor out;
  out.d = d;
  out.r = r;
  out.graph = SimpleGraph(r * (d + 1) + 2);
  out.root = {0, 1};
  int next = 2;
  Edge shared = out.root;
  for (int i = 0; i < r; ++i) {
    std::vector<int> base;
    for (int k = 0; k < d + 1; ++k) base.push_back(next++);
    // The first two base vertices are the endpoints of the next removed edge.
    const bool last = (i == r - 1);
    const Edge onward{base[0], base[1]};
    std::vector<int> copy = base;
    copy.push_back(shared.first);
    copy.push_back(shared.second);
    std::sort(copy.begin(), copy.end());
    for (std::size_t a = 0; a < copy.size(); ++a) {
      for (std::size_t b = a + 1; b < copy.size(); ++b) {
        const Edge e{copy[a], copy[b]};
        if (e == shared || (!last && e == onward)) continue;
        out.graph.add_edge(e.first, e.second);
      }
    }
    out.removed.push_back(shared);
    out.bases.push_back(base);
    shared = onward;
  }
  return out;
}

SimpleGraph sample_gnp(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in [0, 1]");
  SimpleGraph g(n);
  Rng rng(seed);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform() < p) g.add_edge(u, v);
  return g;
}

double estimate_percolation_probability(int n, double p, int clique_size, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be at least 1");
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    const SimpleGraph g = sample_gnp(n, p, derive_seed(seed, static_cast<std::uint64_t>(t)));
    if (closure(g, clique_size).is_complete()) ++hits;
  }
  return static_cast<double>(hits) / trials;
}

SimpleGraph read_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Edge> edges;
  int n = -1;
  int max_vertex = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream header(line.substr(first + 1));
      std::string key;
      int value = 0;
      if (header >> key >> value && key == "n") n = value;
      continue;
    }
    std::istringstream fields(line);
    int u = 0, v = 0;
    if (!(fields >> u >> v) || u < 0 || v < 0) {
      throw Error(ErrorKind::Config, "edge list line " + std::to_string(line_no) + ": expected \"u v\"");
    }
    edges.emplace_back(u, v);
    max_vertex = std::max({max_vertex, u, v});
  }
  if (n < 0) n = max_vertex + 1;
  if (max_vertex >= n) throw Error(ErrorKind::Config, "edge list mentions a vertex beyond the declared n");
  return SimpleGraph(n, edges);
}

std::string write_edge_list(const SimpleGraph& g) {
  std::ostringstream out;
  out << "# n " << g.order() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

PollutionSet pollution_from_json(const std::string& text, int d) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("pollution file: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorKind::Config, "pollution file must be an array of vertex arrays");
  PollutionSet p(d);
  for (const auto& member : j) p.insert(member.get<std::vector<int>>());
  return p;
}

std::string pollution_to_json(const PollutionSet& p) { return nlohmann::json(p.members()).dump(); }

}  // namespace distrecon
