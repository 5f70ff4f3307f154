#pragma once

// Subspaces of the edge space E(G): cycle space C(G), cut space C⊥(G), even
// space D(G), the H-space C_H(G) spanned by copies of a fixed graph H, and its
// natural value W_H(G). Also the span test T_H, the cover test Q_H, and the
// canonical smallest element F of C_κ⊥(G) \ C⊥(G).

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gf2.hpp"
#include "graph.hpp"

namespace cyclespan {

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultCopyCap = 5'000'000;

enum class SpaceTag { cycle, cut, even, h_space, w_space, h_perp, cycle_perp };

struct SpaceBasis {
  std::uint64_t host = 0;
  EchelonBasis basis;
  SpaceTag tag = SpaceTag::cycle;

  std::size_t dim() const noexcept { return basis.rank(); }
};

inline std::size_t cycle_space_dim(const LabeledGraph& g) {
  return g.m() - g.n() + components(g).count;
}

/// Fundamental cycles of a BFS spanning forest.
inline SpaceBasis cycle_space(const LabeledGraph& g) {
  const auto f = spanning_forest(g);
  EchelonBasis b(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (f.tree_edge[e]) continue;
    Gf2Vector c(g.m());
    c.set(e);
    Vertex a = g.edge(e).u, z = g.edge(e).v;
    auto step = [&](Vertex& x) {
      const Vertex p = f.parent[x];
      c.flip(*g.find_edge(x, p));
      x = p;
    };
    while (f.depth[a] > f.depth[z]) step(a);
    while (f.depth[z] > f.depth[a]) step(z);
    while (a != z) {
      step(a);
      step(z);
    }
    b.insert(c);
  }
  return {g.id(), std::move(b), SpaceTag::cycle};
}

/// Spanned by the vertex stars ∇(v); one star per component is redundant.
inline SpaceBasis cut_space(const LabeledGraph& g) {
  EchelonBasis b(g.m());
  for (Vertex v = 0; v < g.n(); ++v) {
    b.insert(cut_vector(g, {v}).vec);
  }
  return {g.id(), std::move(b), SpaceTag::cut};
}

inline SpaceBasis even_space(const LabeledGraph& g) {
  EchelonBasis b(g.m());
  for (std::size_t i = 0; i + 1 < g.m(); ++i) {
    Gf2Vector v(g.m());
    v.set(i);
    v.set(i + 1);
    b.insert(v);
  }
  return {g.id(), std::move(b), SpaceTag::even};
}

// ---------------------------------------------------------------------------
// Pattern graphs

class HPattern {
 public:
  HPattern(std::size_t vertices, std::vector<Edge> edges, std::string name = {})
      : graph_(vertices, std::move(edges)), name_(std::move(name)) {
    if (graph_.m() == 0) throw std::invalid_argument("HPattern: H must have at least one edge");
  }

  static HPattern cycle(std::size_t k) {
    return {k, LabeledGraph::cycle(k).edges(), "C" + std::to_string(k)};
  }
  static HPattern path(std::size_t l) { return {l + 1, LabeledGraph::path(l).edges(), "P" + std::to_string(l)}; }
  static HPattern complete(std::size_t k) {
    return {k, LabeledGraph::complete(k).edges(), "K" + std::to_string(k)};
  }
  static HPattern star(std::size_t k) { return {k + 1, LabeledGraph::star(k).edges(), "K1," + std::to_string(k)}; }
  static HPattern matching(std::size_t k) {
    std::vector<Edge> es;
    for (Vertex i = 0; i < k; ++i) es.push_back({2 * i, 2 * i + 1});
    return {2 * k, std::move(es), std::to_string(k) + "K2"};
  }

  const LabeledGraph& graph() const noexcept { return graph_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t v_count() const noexcept { return graph_.n(); }
  std::size_t e_count() const noexcept { return graph_.m(); }
  std::size_t parity() const noexcept { return graph_.m() % 2; }

  /// All degrees even; connectivity is not required.
  bool eulerian() const {
    for (Vertex v = 0; v < graph_.n(); ++v) {
      if (graph_.degree(v) % 2 != 0) return false;
    }
    return true;
  }

  /// k when H is the cycle C_k (connected and 2-regular), else 0.
  std::size_t cycle_length() const {
    for (Vertex v = 0; v < graph_.n(); ++v) {
      if (graph_.degree(v) != 2) return 0;
    }
    return components(graph_).count == 1 ? graph_.n() : 0;
  }

 private:
  LabeledGraph graph_;
  std::string name_;
};

/// Parses pattern names: K<k>, C<k>, P<l>, <k>K2, K1,<k> (or K1<k>),
/// "K3+K2" (triangle plus a disjoint edge) and "bowtie" (two triangles
/// sharing a vertex).
inline HPattern h_from_name(const std::string& name) {
  auto number = [&](std::size_t pos) -> std::size_t {
    if (pos >= name.size()) throw std::invalid_argument("unknown pattern '" + name + "'");
    std::size_t used = 0;
    const unsigned long v = std::stoul(name.substr(pos), &used);
    if (pos + used != name.size()) throw std::invalid_argument("unknown pattern '" + name + "'");
    return v;
  };
  if (name == "bowtie") return {5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {0, 4}}, name};
  if (name == "K3+K2") return {5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}}, name};
  if (name.size() > 2 && name.ends_with("K2") && std::isdigit(static_cast<unsigned char>(name[0]))) {
    const std::size_t k = std::stoul(name.substr(0, name.size() - 2));
    return HPattern::matching(k);
  }
  if (name.starts_with("K1,")) return HPattern::star(number(3));
  if (name.starts_with("K1") && name.size() > 2) return HPattern::star(number(2));
  try {
    if (name.starts_with("K")) return HPattern::complete(number(1));
    if (name.starts_with("C")) {
      const auto k = number(1);
      if (k < 3) throw std::invalid_argument("cycle length must be at least 3");
      return HPattern::cycle(k);
    }
    if (name.starts_with("P")) return HPattern::path(number(1));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("unknown pattern '" + name + "'");
  }
  throw std::invalid_argument("unknown pattern '" + name + "'");
}

/// The pattern set used for the exhaustive K_n classification check.
inline std::vector<HPattern> default_h_library() {
  std::vector<HPattern> lib;
  for (const char* nm : {"K2", "P2", "2K2", "P3", "K3", "C4", "C5", "K4", "K1,3", "K3+K2", "bowtie"}) {
    lib.push_back(h_from_name(nm));
  }
  return lib;
}

enum class HClass { full_cycle, even_cycle, full_edge, even_edge };

inline std::string to_string(HClass c) {
  switch (c) {
    case HClass::full_cycle: return "C";
    case HClass::even_cycle: return "C∩D";
    case HClass::full_edge: return "E";
    case HClass::even_edge: return "D";
  }
  return "?";
}

inline HClass classify_h(const HPattern& h) {
  const bool odd = h.parity() == 1;
  if (h.eulerian()) return odd ? HClass::full_cycle : HClass::even_cycle;
  return odd ? HClass::full_edge : HClass::even_edge;
}

/// dim W(G) for the given class, from closed forms.
inline std::size_t w_dimension(const LabeledGraph& g, HClass cls) {
  switch (cls) {
    case HClass::full_cycle: return cycle_space_dim(g);
    case HClass::even_cycle: return cycle_space_dim(g) - (is_bipartite(g) ? 0 : 1);
    case HClass::full_edge: return g.m();
    case HClass::even_edge: return g.m() == 0 ? 0 : g.m() - 1;
  }
  return 0;
}

inline SpaceBasis w_space(const LabeledGraph& g, const HPattern& h) {
  switch (classify_h(h)) {
    case HClass::full_cycle: return {g.id(), cycle_space(g).basis, SpaceTag::w_space};
    case HClass::even_cycle:
      return {g.id(), intersect(cycle_space(g).basis, even_space(g).basis), SpaceTag::w_space};
    case HClass::full_edge: {
      EchelonBasis b(g.m());
      for (std::size_t i = 0; i < g.m(); ++i) b.insert(Gf2Vector::from_support(g.m(), std::vector<std::size_t>{i}));
      return {g.id(), std::move(b), SpaceTag::w_space};
    }
    case HClass::even_edge: return {g.id(), even_space(g).basis, SpaceTag::w_space};
  }
  throw std::logic_error("w_space: bad class");
}

// ---------------------------------------------------------------------------
// Copy enumeration

/// Calls fn(edge ids) once per k-cycle of g. Each cycle is rooted at its
/// least vertex and emitted in the orientation whose second vertex is smaller
/// than its last. Returns true when stopped early at `cap` cycles.
template <class Fn>
bool for_each_cycle(const LabeledGraph& g, std::size_t k, std::size_t cap, Fn&& fn) {
  if (k < 3) throw std::invalid_argument("for_each_cycle: cycle length must be at least 3");
  if (g.n() < k) return false;
  std::vector<Vertex> path;
  std::vector<EdgeId> eids;
  std::vector<char> on_path(g.n(), 0);
  std::size_t found = 0;
  bool stopped = false;

  std::function<void(Vertex)> extend = [&](Vertex root) {
    if (stopped) return;
    const Vertex x = path.back();
    if (path.size() == k) {
      if (path[1] > path.back()) return;
      if (auto closing = g.find_edge(x, root)) {
        if (found == cap) {
          stopped = true;
          return;
        }
        eids.push_back(*closing);
        fn(std::span<const EdgeId>(eids));
        eids.pop_back();
        ++found;
      }
      return;
    }
    for (const auto& inc : g.neighbors(x)) {
      if (inc.to <= root || on_path[inc.to]) continue;
      on_path[inc.to] = 1;
      path.push_back(inc.to);
      eids.push_back(inc.edge);
      extend(root);
      eids.pop_back();
      path.pop_back();
      on_path[inc.to] = 0;
      if (stopped) return;
    }
  };

  for (Vertex r = 0; r < g.n() && !stopped; ++r) {
    path.assign(1, r);
    on_path[r] = 1;
    extend(r);
    on_path[r] = 0;
  }
  return stopped;
}

/// Calls fn(sorted edge ids) once per copy of h in g (distinct edge sets).
/// Returns true when stopped early at `cap` copies.
template <class Fn>
bool for_each_copy(const LabeledGraph& g, const HPattern& h, std::size_t cap, Fn&& fn) {
  if (const std::size_t k = h.cycle_length(); k != 0) {
    std::vector<EdgeId> sorted;
    return for_each_cycle(g, k, cap, [&](std::span<const EdgeId> ids) {
      sorted.assign(ids.begin(), ids.end());
      std::sort(sorted.begin(), sorted.end());
      fn(std::span<const EdgeId>(sorted));
    });
  }
  const LabeledGraph& hg = h.graph();
  if (g.n() < hg.n()) return false;

  // Map non-isolated pattern vertices in BFS order so that each one after the
  // first of its component has an already-mapped neighbour.
  std::vector<Vertex> order;
  {
    std::vector<char> seen(hg.n(), 0);
    for (Vertex s = 0; s < hg.n(); ++s) {
      if (seen[s] || hg.degree(s) == 0) continue;
      seen[s] = 1;
      std::size_t head = order.size();
      order.push_back(s);
      while (head < order.size()) {
        Vertex x = order[head++];
        for (const auto& inc : hg.neighbors(x)) {
          if (!seen[inc.to]) {
            seen[inc.to] = 1;
            order.push_back(inc.to);
          }
        }
      }
    }
  }
  std::vector<Vertex> image(hg.n(), 0);
  std::vector<char> mapped(hg.n(), 0);
  std::vector<char> used(g.n(), 0);
  std::set<std::vector<EdgeId>> seen_sets;
  std::vector<EdgeId> ids;
  bool stopped = false;

  std::function<void(std::size_t)> place = [&](std::size_t depth) {
    if (stopped) return;
    if (depth == order.size()) {
      ids.clear();
      for (const auto& e : hg.edges()) ids.push_back(*g.find_edge(image[e.u], image[e.v]));
      std::sort(ids.begin(), ids.end());
      if (seen_sets.contains(ids)) return;
      if (seen_sets.size() == cap) {
        stopped = true;
        return;
      }
      seen_sets.insert(ids);
      fn(std::span<const EdgeId>(ids));
      return;
    }
    const Vertex hv = order[depth];
    const std::size_t need = hg.degree(hv);
    Vertex anchor = hv;
    for (const auto& inc : hg.neighbors(hv)) {
      if (mapped[inc.to]) {
        anchor = inc.to;
        break;
      }
    }
    auto try_vertex = [&](Vertex gv) {
      if (used[gv] || g.degree(gv) < need) return;
      for (const auto& inc : hg.neighbors(hv)) {
        if (mapped[inc.to] && !g.has_edge(gv, image[inc.to])) return;
      }
      used[gv] = 1;
      mapped[hv] = 1;
      image[hv] = gv;
      place(depth + 1);
      mapped[hv] = 0;
      used[gv] = 0;
    };
    if (anchor != hv) {
      for (const auto& inc : g.neighbors(image[anchor])) {
        try_vertex(inc.to);
        if (stopped) return;
      }
    } else {
      for (Vertex gv = 0; gv < g.n(); ++gv) {
        try_vertex(gv);
        if (stopped) return;
      }
    }
  };
  place(0);
  return stopped;
}

struct CopyList {
  std::uint64_t host = 0;
  std::vector<EdgeSubset> copies;
  bool truncated = false;
};

inline CopyList enumerate_copies(const LabeledGraph& g, const HPattern& h, std::size_t cap = kDefaultCopyCap) {
  if (cap == 0) throw std::invalid_argument("enumerate_copies: cap must be positive");
  CopyList out{g.id(), {}, false};
  out.truncated = for_each_copy(g, h, cap, [&](std::span<const EdgeId> ids) { out.copies.push_back(subset_of(g, ids)); });
  return out;
}

/// Span of the copies of h, as an explicit basis. Refuses truncated input.
inline SpaceBasis h_space(const LabeledGraph& g, const HPattern& h, std::size_t cap = kDefaultCopyCap) {
  EchelonBasis b(g.m());
  const bool truncated = for_each_copy(g, h, cap, [&](std::span<const EdgeId> ids) {
    if (b.rank() == g.m()) return;
    Gf2Vector v(g.m());
    for (auto e : ids) v.set(e);
    b.insert(v);
  });
  if (truncated) throw TruncationError("h_space: copy enumeration exceeded the cap of " + std::to_string(cap));
  return {g.id(), std::move(b), SpaceTag::h_space};
}

namespace detail {

/// Coordinates of the non-tree edges of a spanning forest. Restriction to
/// these coordinates is an isomorphism from C(G) onto GF(2)^(m-n+c).
struct CycleCoordinates {
  SpanningForest forest;
  std::vector<std::uint32_t> coord;  // per edge; kNoCoord for tree edges
  std::vector<EdgeId> edge_of;       // per coordinate
  static constexpr std::uint32_t kNoCoord = 0xffffffffu;

  explicit CycleCoordinates(const LabeledGraph& g) : forest(spanning_forest(g)), coord(g.m(), kNoCoord) {
    for (EdgeId e = 0; e < g.m(); ++e) {
      if (!forest.tree_edge[e]) {
        coord[e] = static_cast<std::uint32_t>(edge_of.size());
        edge_of.push_back(e);
      }
    }
  }
  std::size_t size() const noexcept { return edge_of.size(); }

  void project(std::span<const EdgeId> ids, std::vector<std::uint32_t>& out) const {
    out.clear();
    for (auto e : ids) {
      if (coord[e] != kNoCoord) out.push_back(coord[e]);
    }
  }
};

}  // namespace detail

/// dim C_H(G), computed with the peeling solver. Copies of an Eulerian H lie
/// in C(G) and are projected onto cycle coordinates first.
inline std::size_t h_space_rank(const LabeledGraph& g, const HPattern& h, std::size_t cap = kDefaultCopyCap) {
  bool truncated = false;
  std::size_t r = 0;
  if (h.eulerian()) {
    detail::CycleCoordinates cc(g);
    PeelingRank solver(cc.size());
    std::vector<std::uint32_t> row;
    truncated = for_each_copy(g, h, cap, [&](std::span<const EdgeId> ids) {
      cc.project(ids, row);
      solver.add_row(row);
    });
    if (!truncated) r = solver.rank();
  } else {
    PeelingRank solver(g.m());
    truncated = for_each_copy(g, h, cap, [&](std::span<const EdgeId> ids) { solver.add_row(ids); });
    if (!truncated) r = solver.rank();
  }
  if (truncated) throw TruncationError("h_space_rank: copy enumeration exceeded the cap of " + std::to_string(cap));
  return r;
}

/// G ∈ T_H: the copies of H span W_H(G).
inline bool in_T(const LabeledGraph& g, const HPattern& h, std::size_t cap = kDefaultCopyCap) {
  const std::size_t rank = h_space_rank(g, h, cap);
  const std::size_t wdim = w_dimension(g, classify_h(h));
  if (rank > wdim) throw std::logic_error("in_T: C_H(G) is larger than W_H(G)");
  return rank == wdim;
}

inline bool in_T(const LabeledGraph& g, std::size_t kappa, std::size_t cap = kDefaultCopyCap) {
  return in_T(g, HPattern::cycle(kappa), cap);
}

/// Edges of g lying on no κ-cycle, in index order.
inline std::vector<EdgeId> uncovered_edges(const LabeledGraph& g, std::size_t kappa) {
  if (kappa < 3) throw std::invalid_argument("uncovered_edges: kappa must be at least 3");
  std::vector<EdgeId> out;
  if (kappa == 3) {
    const AdjacencyBits bits(g);
    for (EdgeId e = 0; e < g.m(); ++e) {
      if (!bits.any_common(g.edge(e).u, g.edge(e).v)) out.push_back(e);
    }
    return out;
  }
  // Search for a (κ-1)-edge path from u to v with distinct vertices, pruned by
  // truncated BFS distance to v.
  const std::size_t len = kappa - 1;
  std::vector<std::uint32_t> dist(g.n());
  std::vector<Vertex> queue;
  std::vector<char> on_path(g.n(), 0);
  const std::uint32_t far = 0xffffffffu;

  std::function<bool(Vertex, Vertex, std::size_t)> reach = [&](Vertex x, Vertex target, std::size_t left) -> bool {
    if (left == 1) return g.has_edge(x, target);
    for (const auto& inc : g.neighbors(x)) {
      const Vertex y = inc.to;
      if (y == target || on_path[y] || dist[y] == far || dist[y] > left - 1) continue;
      on_path[y] = 1;
      const bool ok = reach(y, target, left - 1);
      on_path[y] = 0;
      if (ok) return true;
    }
    return false;
  };

  std::vector<char> covered(g.m(), 0);
  for (Vertex v = 0; v < g.n(); ++v) {
    bool any = false;
    for (const auto& inc : g.neighbors(v)) any |= inc.to < v;
    if (!any) continue;
    std::fill(dist.begin(), dist.end(), far);
    dist[v] = 0;
    queue.assign(1, v);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex x = queue[h];
      if (dist[x] + 1 > len - 1) continue;
      for (const auto& inc : g.neighbors(x)) {
        if (dist[inc.to] == far) {
          dist[inc.to] = dist[x] + 1;
          queue.push_back(inc.to);
        }
      }
    }
    for (const auto& inc : g.neighbors(v)) {
      const Vertex u = inc.to;
      if (u > v) continue;
      on_path[u] = 1;
      on_path[v] = 1;
      covered[inc.edge] = reach(u, v, len);
      on_path[u] = 0;
      on_path[v] = 0;
    }
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!covered[e]) out.push_back(e);
  }
  return out;
}

/// G ∈ Q_κ: G is nonempty and every edge lies on a κ-cycle.
inline bool in_Q(const LabeledGraph& g, std::size_t kappa) {
  return g.m() > 0 && uncovered_edges(g, kappa).empty();
}

/// G ∈ Q_H: nonempty, every edge in a copy of H, and (for non-Eulerian H)
/// every non-isolated vertex of odd degree in some copy.
inline bool in_Q(const LabeledGraph& g, const HPattern& h, std::size_t cap = kDefaultCopyCap) {
  if (g.m() == 0) return false;
  if (const std::size_t k = h.cycle_length(); k != 0) return in_Q(g, k);
  std::vector<char> edge_cov(g.m(), 0);
  std::vector<char> odd_vertex(g.n(), 0);
  const bool need_odd = !h.eulerian();
  std::vector<std::uint32_t> deg(g.n(), 0);
  const bool truncated = for_each_copy(g, h, cap, [&](std::span<const EdgeId> ids) {
    for (auto e : ids) edge_cov[e] = 1;
    if (!need_odd) return;
    for (auto e : ids) {
      ++deg[g.edge(e).u];
      ++deg[g.edge(e).v];
    }
    for (auto e : ids) {
      for (Vertex x : {g.edge(e).u, g.edge(e).v}) {
        if (deg[x] % 2 == 1) odd_vertex[x] = 1;
      }
    }
    for (auto e : ids) deg[g.edge(e).u] = deg[g.edge(e).v] = 0;
  });
  if (truncated) throw TruncationError("in_Q: copy enumeration exceeded the cap of " + std::to_string(cap));
  if (std::find(edge_cov.begin(), edge_cov.end(), 0) != edge_cov.end()) return false;
  if (need_odd) {
    for (Vertex v = 0; v < g.n(); ++v) {
      if (g.degree(v) > 0 && !odd_vertex[v]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// The canonical minimizer F

struct FOptions {
  std::size_t exact_dim_cap = 24;
  std::size_t copy_cap = kDefaultCopyCap;
  std::size_t restarts = 64;
  std::uint64_t seed = 0x5eed;
};

struct FResult {
  EdgeSubset F;
  bool certified = false;
  bool in_T = false;
  /// dim C_κ⊥(G) - dim C⊥(G) = dim C(G) - dim C_κ(G).
  std::size_t quotient_dim = 0;
};

namespace detail {

/// Every nontrivial coset of C⊥ in C_κ⊥ is L + C⊥ for a nonzero combination L
/// of the representatives; enumerate all members of all such cosets.
inline Gf2Vector exact_min_outside(std::span<const Gf2Vector> reps, const EchelonBasis& cuts) {
  const std::size_t d = reps.size();
  Gf2Vector outer(cuts.ambient());
  Gf2Vector best;
  std::size_t best_w = static_cast<std::size_t>(-1);
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << d); ++i) {
    outer ^= reps[static_cast<std::size_t>(std::countr_zero(i))];
    auto r = coset_min_weight(cuts, outer, CosetOptions{.exact_dim_cap = cuts.rank()});
    keep_if_lighter(best, best_w, r.vector);
  }
  return best;
}

}  // namespace detail

/// F(G) for odd κ: empty when G ∈ T_κ, otherwise a lightest element of
/// C_κ⊥(G) \ C⊥(G), ties broken by least support sequence. Certified when the
/// whole difference set was enumerated or a weight-1 element exists.
inline FResult find_F(const LabeledGraph& g, std::size_t kappa, const FOptions& opt = {}) {
  if (kappa < 3 || kappa % 2 == 0) {
    throw std::invalid_argument("find_F: kappa must be odd and at least 3 (use the W-space workflow for even kappa)");
  }
  FResult res{empty_subset(g), true, false, 0};
  detail::CycleCoordinates cc(g);
  PeelingRank solver(cc.size());
  std::vector<char> covered(g.m(), 0);
  std::vector<std::uint32_t> row;
  const bool truncated = for_each_cycle(g, kappa, opt.copy_cap, [&](std::span<const EdgeId> ids) {
    for (auto e : ids) covered[e] = 1;
    cc.project(ids, row);
    solver.add_row(row);
  });
  if (truncated) throw TruncationError("find_F: cycle enumeration exceeded the cap of " + std::to_string(opt.copy_cap));

  const std::size_t rank = solver.rank();
  if (rank == cc.size()) {
    res.in_T = true;
    return res;
  }
  res.quotient_dim = cc.size() - rank;

  // A single edge on no κ-cycle that is not a bridge is itself in
  // C_κ⊥ \ C⊥, and nothing lighter than weight 1 exists.
  const auto is_bridge = bridges(g);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!covered[e] && !is_bridge[e]) {
      res.F.vec.set(e);
      return res;
    }
  }

  std::vector<Gf2Vector> reps;
  for (const auto& f : solver.annihilator()) {
    Gf2Vector lifted(g.m());
    for (auto c : f.support()) lifted.set(cc.edge_of[c]);
    reps.push_back(std::move(lifted));
  }
  const SpaceBasis cuts = cut_space(g);
  const std::size_t k = cuts.dim();
  const std::size_t d = reps.size();

  if (d + k <= opt.exact_dim_cap) {
    res.F.vec = detail::exact_min_outside(reps, cuts.basis);
    return res;
  }

  res.certified = false;
  std::vector<Gf2Vector> stars;
  stars.reserve(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    if (g.degree(v) > 0) stars.push_back(cut_vector(g, {v}).vec);
  }
  CosetOptions copt{.exact_dim_cap = k <= 16 ? k : 0, .restarts = opt.restarts, .seed = opt.seed, .moves = stars};
  Gf2Vector best;
  std::size_t best_w = static_cast<std::size_t>(-1);
  auto consider = [&](const Gf2Vector& l) {
    auto r = coset_min_weight(cuts.basis, l, copt);
    detail::keep_if_lighter(best, best_w, r.vector);
  };
  if (d <= 10) {
    Gf2Vector outer(g.m());
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << d); ++i) {
      outer ^= reps[static_cast<std::size_t>(std::countr_zero(i))];
      consider(outer);
    }
  } else {
    for (const auto& l : reps) consider(l);
  }
  res.F.vec = std::move(best);
  return res;
}

}  // namespace cyclespan
