#pragma once

// Simple undirected graphs with dense edge indexing.
//
// Edges are stored with u < v and indexed in row-major order of the upper
// triangle: (u, v) precedes (u', v') iff u < u', or u == u' and v < v'. Every
// edge-space vector in this library refers to this indexing of its host.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gf2.hpp"
#include "rng.hpp"

namespace cyclespan {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Incidence {
  Vertex to;
  EdgeId edge;
};

/// Position of the pair {u, v} among all C(n, 2) pairs of K_n (row-major).
inline std::uint64_t pair_index(std::size_t n, Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  const std::uint64_t uu = u;
  return uu * n - uu * (uu + 1) / 2 + (v - u - 1);
}

class LabeledGraph {
 public:
  LabeledGraph() : LabeledGraph(0) {}
  explicit LabeledGraph(std::size_t n) : LabeledGraph(n, {}) {}

  LabeledGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), id_(next_id()) {
    for (auto& e : edges_) {
      if (e.u == e.v) throw std::invalid_argument("LabeledGraph: loop at vertex " + std::to_string(e.u));
      if (e.u >= n_ || e.v >= n_) throw std::invalid_argument("LabeledGraph: vertex out of range");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw std::invalid_argument("LabeledGraph: duplicate edge");
    }
    if (edges_.size() > 0xfffffffeu) throw std::length_error("LabeledGraph: too many edges");
    build_adjacency();
  }

  static LabeledGraph complete(std::size_t n) {
    std::vector<Edge> es;
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) es.push_back({u, v});
    }
    return {n, std::move(es)};
  }
  /// C_n on vertices 0..n-1 in cyclic order.
  static LabeledGraph cycle(std::size_t n) {
    if (n < 3) throw std::invalid_argument("LabeledGraph::cycle: need n >= 3");
    std::vector<Edge> es;
    for (Vertex i = 0; i < n; ++i) es.push_back({i, static_cast<Vertex>((i + 1) % n)});
    return {n, std::move(es)};
  }
  /// P_l: l edges on vertices 0..l.
  static LabeledGraph path(std::size_t l) {
    std::vector<Edge> es;
    for (Vertex i = 0; i < l; ++i) es.push_back({i, i + 1});
    return {l + 1, std::move(es)};
  }
  /// K_{1,k} with centre 0.
  static LabeledGraph star(std::size_t k) {
    std::vector<Edge> es;
    for (Vertex i = 1; i <= k; ++i) es.push_back({0, i});
    return {k + 1, std::move(es)};
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }

  /// Incident edges of v sorted by neighbour.
  std::span<const Incidence> neighbors(Vertex v) const {
    check_vertex(v);
    return std::span<const Incidence>(adj_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
  }
  std::size_t degree(Vertex v) const {
    check_vertex(v);
    return offsets_[v + 1] - offsets_[v];
  }

  std::optional<EdgeId> find_edge(Vertex u, Vertex v) const {
    if (u >= n_ || v >= n_ || u == v) return std::nullopt;
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v, [](const Incidence& a, Vertex x) { return a.to < x; });
    if (it != nb.end() && it->to == v) return it->edge;
    return std::nullopt;
  }
  bool has_edge(Vertex u, Vertex v) const { return find_edge(u, v).has_value(); }

  /// Identity used to detect edge subsets applied to the wrong host.
  std::uint64_t id() const noexcept { return id_; }

  void check_vertex(Vertex v) const {
    if (v >= n_) throw std::out_of_range("LabeledGraph: vertex " + std::to_string(v) + " out of range");
  }

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  void build_adjacency() {
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
    adj_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const auto& e = edges_[id];
      adj_[fill[e.u]++] = {e.v, id};
      adj_[fill[e.v]++] = {e.u, id};
    }
    for (std::size_t v = 0; v < n_; ++v) {
      std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
                [](const Incidence& a, const Incidence& b) { return a.to < b.to; });
    }
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> adj_;
  std::uint64_t id_ = 0;
};

// ---------------------------------------------------------------------------
// Edge subsets

struct EdgeSubset {
  std::uint64_t host = 0;
  Gf2Vector vec;

  std::size_t size() const noexcept { return vec.weight(); }
  bool empty() const noexcept { return vec.is_zero(); }
  friend bool operator==(const EdgeSubset&, const EdgeSubset&) = default;
};

inline void check_host(const LabeledGraph& g, const EdgeSubset& s) {
  if (s.host != g.id() || s.vec.size() != g.m()) {
    throw std::invalid_argument("EdgeSubset: subset belongs to a different host graph");
  }
}

inline EdgeSubset empty_subset(const LabeledGraph& g) { return {g.id(), Gf2Vector(g.m())}; }

inline EdgeSubset as_subset(const LabeledGraph& g, Gf2Vector v) {
  if (v.size() != g.m()) throw std::invalid_argument("as_subset: vector length differs from m");
  return {g.id(), std::move(v)};
}

inline EdgeSubset subset_of(const LabeledGraph& g, std::span<const EdgeId> ids) {
  EdgeSubset s = empty_subset(g);
  for (EdgeId e : ids) s.vec.set(e);
  return s;
}

inline EdgeSubset subset_of_pairs(const LabeledGraph& g, std::span<const Edge> pairs) {
  EdgeSubset s = empty_subset(g);
  for (const auto& p : pairs) {
    auto e = g.find_edge(p.u, p.v);
    if (!e) throw std::invalid_argument("subset_of_pairs: pair is not an edge of the host");
    s.vec.set(*e);
  }
  return s;
}

inline EdgeSubset all_edges(const LabeledGraph& g) { return {g.id(), Gf2Vector::ones(g.m())}; }

inline std::vector<Edge> edges_of(const LabeledGraph& g, const EdgeSubset& s) {
  check_host(g, s);
  std::vector<Edge> out;
  for (auto e : s.vec.support()) out.push_back(g.edge(static_cast<EdgeId>(e)));
  return out;
}

/// d_S(v).
inline std::size_t subset_degree(const LabeledGraph& g, const EdgeSubset& s, Vertex v) {
  check_host(g, s);
  std::size_t d = 0;
  for (const auto& inc : g.neighbors(v)) d += s.vec.get(inc.edge);
  return d;
}

/// Re-expresses s (a subset of `from`) in the indexing of `to`; edges of s
/// that are not edges of `to` are dropped. reindex(F, G, G0) is G0 ∩ F.
inline EdgeSubset reindex(const EdgeSubset& s, const LabeledGraph& from, const LabeledGraph& to) {
  check_host(from, s);
  if (from.n() != to.n()) throw std::invalid_argument("reindex: graphs have different vertex sets");
  EdgeSubset out = empty_subset(to);
  for (auto e : s.vec.support()) {
    const Edge& ed = from.edge(static_cast<EdgeId>(e));
    if (auto t = to.find_edge(ed.u, ed.v)) out.vec.set(*t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random generation

/// Per-pair uniform labels realizing the monotone coupling of G(n,q) and
/// G(n,p): slicing at q <= p gives nested graphs. Labels are computed from
/// (master_seed, pair) on demand and never stored.
class CoupledSample {
 public:
  CoupledSample(std::size_t n, std::uint64_t master_seed) : n_(n), seed_(master_seed), key_(mix64(master_seed)) {}

  std::size_t n() const noexcept { return n_; }
  std::uint64_t master_seed() const noexcept { return seed_; }

  double label(Vertex u, Vertex v) const {
    if (u == v || u >= n_ || v >= n_) throw std::out_of_range("CoupledSample::label: bad pair");
    return label_at(pair_index(n_, u, v));
  }
  double label_at(std::uint64_t pair) const noexcept { return to_unit(mix64(key_ ^ mix64(pair))); }

 private:
  std::size_t n_;
  std::uint64_t seed_;
  std::uint64_t key_;
};

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("edge probability must lie in [0, 1]");
}

inline CoupledSample gen_coupled(std::size_t n, std::uint64_t seed) { return {n, seed}; }

/// {e : label_e < p}. p == 1 gives K_n since labels lie in [0, 1).
inline LabeledGraph slice(const CoupledSample& s, double p) {
  check_probability(p);
  const std::size_t n = s.n();
  std::vector<Edge> es;
  std::uint64_t idx = 0;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v, ++idx) {
      if (s.label_at(idx) < p) es.push_back({u, v});
    }
  }
  return {n, std::move(es)};
}

/// G(n, p), reproducible from seed.
inline LabeledGraph gen_gnp(std::size_t n, double p, std::uint64_t seed) {
  check_probability(p);
  return slice(CoupledSample(n, derive_seed({seed, 0x676e70})), p);
}

// ---------------------------------------------------------------------------
// Structure

using VertexSet = std::vector<Vertex>;

struct Components {
  std::size_t count = 0;
  std::vector<std::uint32_t> label;  // component index per vertex, in order of first vertex
};

inline Components components(const LabeledGraph& g) {
  Components c;
  c.label.assign(g.n(), 0xffffffffu);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (c.label[s] != 0xffffffffu) continue;
    const auto id = static_cast<std::uint32_t>(c.count++);
    c.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (const auto& inc : g.neighbors(x)) {
        if (c.label[inc.to] == 0xffffffffu) {
          c.label[inc.to] = id;
          stack.push_back(inc.to);
        }
      }
    }
  }
  return c;
}

inline std::vector<char> membership(const LabeledGraph& g, const VertexSet& a) {
  std::vector<char> in(g.n(), 0);
  for (Vertex v : a) {
    if (v >= g.n()) throw std::invalid_argument("vertex set is not a subset of V");
    in[v] = 1;
  }
  return in;
}

/// ∇(A): edges with exactly one endpoint in A.
inline EdgeSubset cut_vector(const LabeledGraph& g, const VertexSet& a) {
  const auto in = membership(g, a);
  EdgeSubset s = empty_subset(g);
  for (EdgeId e = 0; e < g.m(); ++e) {
    const auto& ed = g.edge(e);
    if (in[ed.u] != in[ed.v]) s.vec.set(e);
  }
  return s;
}

inline std::size_t degree(const LabeledGraph& g, Vertex v) { return g.degree(v); }

struct DensityReport {
  std::size_t cross = 0;   // |∇(S, T)|
  std::size_t inside = 0;  // |G[S]|
};

inline DensityReport density_report(const LabeledGraph& g, const VertexSet& s, const VertexSet& t) {
  const auto in_s = membership(g, s);
  const auto in_t = membership(g, t);
  for (Vertex v = 0; v < g.n(); ++v) {
    if (in_s[v] && in_t[v]) throw std::invalid_argument("density_report: S and T overlap");
  }
  DensityReport r;
  for (const auto& e : g.edges()) {
    if (in_s[e.u] && in_s[e.v]) ++r.inside;
    if ((in_s[e.u] && in_t[e.v]) || (in_t[e.u] && in_s[e.v])) ++r.cross;
  }
  return r;
}

struct SpanningForest {
  std::vector<char> tree_edge;      // per edge
  std::vector<Vertex> parent;       // parent[root] == root
  std::vector<std::uint32_t> depth;
  std::size_t num_components = 0;
};

/// BFS forest; each component is rooted at its highest-degree vertex (lowest
/// index on ties), which keeps the forest shallow on dense graphs.
inline SpanningForest spanning_forest(const LabeledGraph& g) {
  SpanningForest f;
  f.tree_edge.assign(g.m(), 0);
  f.parent.assign(g.n(), 0);
  f.depth.assign(g.n(), 0);
  std::vector<Vertex> order(g.n());
  for (Vertex v = 0; v < g.n(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });
  std::vector<char> seen(g.n(), 0);
  std::vector<Vertex> queue;
  for (Vertex root : order) {
    if (seen[root]) continue;
    ++f.num_components;
    seen[root] = 1;
    f.parent[root] = root;
    queue.assign(1, root);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex x = queue[h];
      for (const auto& inc : g.neighbors(x)) {
        if (seen[inc.to]) continue;
        seen[inc.to] = 1;
        f.parent[inc.to] = x;
        f.depth[inc.to] = f.depth[x] + 1;
        f.tree_edge[inc.edge] = 1;
        queue.push_back(inc.to);
      }
    }
  }
  return f;
}

/// Per-edge flag: removing the edge disconnects its component.
inline std::vector<char> bridges(const LabeledGraph& g) {
  std::vector<char> is_bridge(g.m(), 0);
  std::vector<std::uint32_t> disc(g.n(), 0), low(g.n(), 0);
  std::uint32_t timer = 0;
  struct Frame {
    Vertex v;
    EdgeId via;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (disc[s] != 0) continue;
    disc[s] = low[s] = ++timer;
    stack.push_back({s, 0xffffffffu, 0});
    while (!stack.empty()) {
      Frame& fr = stack.back();
      auto nb = g.neighbors(fr.v);
      if (fr.next < nb.size()) {
        const auto inc = nb[fr.next++];
        if (inc.edge == fr.via) continue;
        if (disc[inc.to] != 0) {
          low[fr.v] = std::min(low[fr.v], disc[inc.to]);
        } else {
          disc[inc.to] = low[inc.to] = ++timer;
          stack.push_back({inc.to, inc.edge, 0});
        }
      } else {
        const Frame done = fr;
        stack.pop_back();
        if (!stack.empty()) {
          Vertex p = stack.back().v;
          low[p] = std::min(low[p], low[done.v]);
          if (low[done.v] > disc[p]) is_bridge[done.via] = 1;
        }
      }
    }
  }
  return is_bridge;
}

inline bool is_bipartite(const LabeledGraph& g) {
  std::vector<int> side(g.n(), -1);
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex x = queue[h];
      for (const auto& inc : g.neighbors(x)) {
        if (side[inc.to] < 0) {
          side[inc.to] = 1 - side[x];
          queue.push_back(inc.to);
        } else if (side[inc.to] == side[x]) {
          return false;
        }
      }
    }
  }
  return true;
}

/// True iff s is a cut ∇(A) of g: 2-colour g so that exactly the s-edges
/// join different colours.
inline bool is_cut(const LabeledGraph& g, const EdgeSubset& s) {
  check_host(g, s);
  std::vector<int> side(g.n(), -1);
  std::vector<Vertex> queue;
  for (Vertex r = 0; r < g.n(); ++r) {
    if (side[r] >= 0) continue;
    side[r] = 0;
    queue.assign(1, r);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex x = queue[h];
      for (const auto& inc : g.neighbors(x)) {
        const int want = side[x] ^ static_cast<int>(s.vec.get(inc.edge));
        if (side[inc.to] < 0) {
          side[inc.to] = want;
          queue.push_back(inc.to);
        } else if (side[inc.to] != want) {
          return false;
        }
      }
    }
  }
  return true;
}

/// Adjacency rows as bitsets, for fast common-neighbour queries.
class AdjacencyBits {
 public:
  explicit AdjacencyBits(const LabeledGraph& g) : words_((g.n() + 63) / 64), bits_(g.n() * words_, 0) {
    for (const auto& e : g.edges()) {
      bits_[e.u * words_ + (e.v >> 6)] |= std::uint64_t{1} << (e.v & 63);
      bits_[e.v * words_ + (e.u >> 6)] |= std::uint64_t{1} << (e.u & 63);
    }
  }

  std::size_t common(Vertex a, Vertex b) const {
    std::size_t c = 0;
    const std::uint64_t* ra = &bits_[a * words_];
    const std::uint64_t* rb = &bits_[b * words_];
    for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(ra[w] & rb[w]));
    return c;
  }

  bool any_common(Vertex a, Vertex b) const {
    const std::uint64_t* ra = &bits_[a * words_];
    const std::uint64_t* rb = &bits_[b * words_];
    for (std::size_t w = 0; w < words_; ++w) {
      if (ra[w] & rb[w]) return true;
    }
    return false;
  }

  /// Calls fn(z) for each common neighbour z of a and b, in increasing order.
  template <class Fn>
  void for_each_common(Vertex a, Vertex b, Fn&& fn) const {
    const std::uint64_t* ra = &bits_[a * words_];
    const std::uint64_t* rb = &bits_[b * words_];
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t x = ra[w] & rb[w];
      while (x) {
        fn(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(x))));
        x &= x - 1;
      }
    }
  }

 private:
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

// ---------------------------------------------------------------------------
// Text format: "n m" on the first line, then m lines "u v" (0-based) in
// index order.

inline void write_graph(std::ostream& os, const LabeledGraph& g) {
  os << g.n() << ' ' << g.m() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

inline LabeledGraph read_graph(std::istream& is) {
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(is, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return;
    }
    throw std::runtime_error(std::string("graph file: unexpected end of input reading ") + what);
  };
  next_line("header");
  std::istringstream hs(line);
  long long n = -1, m = -1;
  if (!(hs >> n >> m) || n < 0 || m < 0) throw std::runtime_error("graph file: bad header '" + line + "'");
  std::vector<Edge> es;
  es.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    next_line("edge");
    std::istringstream ls(line);
    long long u = -1, v = -1;
    if (!(ls >> u >> v) || u < 0 || v < 0) throw std::runtime_error("graph file: bad edge line '" + line + "'");
    es.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  return {static_cast<std::size_t>(n), std::move(es)};
}

inline LabeledGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  return read_graph(in);
}

inline void save_graph(const std::string& path, const LabeledGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file " + path);
  write_graph(out, g);
}

}  // namespace cyclespan
