#pragma once

// Path statistics between vertex pairs: τ^l (path counts), σ^l (maximum
// internally disjoint packings, via the conflict graph), S-central packings,
// the light-pair and R(S) sets, and (S,t)-rope counts with the walk bound.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace cyclespan {

inline constexpr std::size_t kDefaultSigmaNodeCap = 2000;
inline constexpr std::size_t kDefaultPathCap = 1'000'000;

using VertexPair = std::pair<Vertex, Vertex>;

struct PathList {
  Vertex x = 0, y = 0;
  std::size_t l = 0;
  std::vector<std::vector<Vertex>> paths;
  bool truncated = false;
};

namespace detail {

inline void check_pair(const LabeledGraph& g, Vertex x, Vertex y, std::size_t l) {
  g.check_vertex(x);
  g.check_vertex(y);
  if (x == y) throw std::invalid_argument("path endpoints must differ");
  if (l == 0) throw std::invalid_argument("path length must be at least 1");
}

/// BFS distances to `to`, not expanded past `limit`; unreached = max.
inline std::vector<std::uint32_t> bounded_distances(const LabeledGraph& g, Vertex to, std::size_t limit) {
  constexpr auto far = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(g.n(), far);
  std::vector<Vertex> queue{to};
  dist[to] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const Vertex v = queue[h];
    if (dist[v] >= limit) continue;
    for (const auto& inc : g.neighbors(v)) {
      if (dist[inc.to] == far) {
        dist[inc.to] = dist[v] + 1;
        queue.push_back(inc.to);
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Calls fn(vertex sequence) for every l-edge path from x to y with distinct
/// vertices, in lexicographic order of the internal vertices. Stops after
/// `cap` paths; returns true if stopped early.
template <class Fn>
bool for_each_path(const LabeledGraph& g, Vertex x, Vertex y, std::size_t l, std::uint64_t cap, Fn&& fn) {
  detail::check_pair(g, x, y, l);
  const auto dist = detail::bounded_distances(g, y, l - 1);
  std::vector<Vertex> seq{x};
  std::vector<char> on(g.n(), 0);
  on[x] = 1;
  std::uint64_t found = 0;
  bool stopped = false;
  std::function<void()> go = [&] {
    const Vertex v = seq.back();
    const std::size_t left = l - (seq.size() - 1);
    if (left == 1) {
      if (g.has_edge(v, y)) {
        if (found == cap) {
          stopped = true;
          return;
        }
        seq.push_back(y);
        fn(std::span<const Vertex>(seq));
        seq.pop_back();
        ++found;
      }
      return;
    }
    for (const auto& inc : g.neighbors(v)) {
      const Vertex w = inc.to;
      if (w == y || on[w] || dist[w] > left - 1) continue;
      on[w] = 1;
      seq.push_back(w);
      go();
      seq.pop_back();
      on[w] = 0;
      if (stopped) return;
    }
  };
  go();
  return stopped;
}

inline PathList enumerate_paths(const LabeledGraph& g, Vertex x, Vertex y, std::size_t l,
                                std::uint64_t cap = kDefaultPathCap) {
  PathList out{x, y, l, {}, false};
  out.truncated = for_each_path(g, x, y, l, cap,
                                [&](std::span<const Vertex> p) { out.paths.emplace_back(p.begin(), p.end()); });
  return out;
}

struct TauResult {
  std::uint64_t count = 0;
  bool truncated = false;
};

inline TauResult tau(const LabeledGraph& g, Vertex x, Vertex y, std::size_t l,
                     std::uint64_t cap = std::numeric_limits<std::uint64_t>::max()) {
  TauResult r;
  r.truncated = for_each_path(g, x, y, l, cap, [&](std::span<const Vertex>) { ++r.count; });
  return r;
}

// ---------------------------------------------------------------------------
// Conflict graph and maximum independent set

class ConflictGraph {
 public:
  /// P ~ Q iff the internal vertex sets of P and Q intersect.
  explicit ConflictGraph(std::span<const std::vector<Vertex>> paths) : n_(paths.size()), words_((n_ + 63) / 64) {
    adj_.assign(n_, std::vector<std::uint64_t>(words_, 0));
    std::vector<std::vector<std::size_t>> through;
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& p = paths[i];
      for (std::size_t j = 1; j + 1 < p.size(); ++j) {
        if (p[j] >= through.size()) through.resize(p[j] + 1);
        through[p[j]].push_back(i);
      }
    }
    for (const auto& group : through) {
      for (std::size_t a = 0; a < group.size(); ++a) {
        for (std::size_t b = a + 1; b < group.size(); ++b) {
          set(group[a], group[b]);
          set(group[b], group[a]);
        }
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  bool adjacent(std::size_t i, std::size_t j) const { return (adj_[i][j / 64] >> (j % 64)) & 1u; }
  std::size_t degree(std::size_t i) const {
    std::size_t d = 0;
    for (auto w : adj_[i]) d += static_cast<std::size_t>(std::popcount(w));
    return d;
  }
  std::span<const std::uint64_t> row(std::size_t i) const { return adj_[i]; }
  std::size_t words() const noexcept { return words_; }

 private:
  void set(std::size_t i, std::size_t j) { adj_[i][j / 64] |= std::uint64_t{1} << (j % 64); }

  std::size_t n_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> adj_;
};

struct IndependentSet {
  std::vector<std::size_t> nodes;  // ascending
  bool certified = false;
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline std::size_t bits_count(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

template <class Fn>
void bits_for_each(const Bits& b, Fn&& fn) {
  for (std::size_t w = 0; w < b.size(); ++w) {
    for (std::uint64_t x = b[w]; x != 0; x &= x - 1) fn(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
  }
}

class MaxIndependentSet {
 public:
  MaxIndependentSet(const ConflictGraph& g, std::uint64_t budget) : g_(g), budget_(budget) {}

  /// Exact α restricted to `cand` unless the node budget runs out.
  std::vector<std::size_t> solve(const Bits& cand, bool& exhausted) {
    best_.clear();
    cur_.clear();
    greedy(cand);
    branch(cand);
    exhausted = spent_ > budget_;
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  std::size_t deg_in(std::size_t v, const Bits& cand) const {
    std::size_t d = 0;
    const auto row = g_.row(v);
    for (std::size_t w = 0; w < cand.size(); ++w) d += static_cast<std::size_t>(std::popcount(row[w] & cand[w]));
    return d;
  }

  void remove_closed(Bits& cand, std::size_t v) const {
    const auto row = g_.row(v);
    for (std::size_t w = 0; w < cand.size(); ++w) cand[w] &= ~row[w];
    cand[v / 64] &= ~(std::uint64_t{1} << (v % 64));
  }

  void greedy(Bits cand) {
    std::vector<std::size_t> pick;
    while (true) {
      std::size_t best_v = g_.size(), best_d = std::numeric_limits<std::size_t>::max();
      bits_for_each(cand, [&](std::size_t v) {
        const auto d = deg_in(v, cand);
        if (d < best_d) {
          best_d = d;
          best_v = v;
        }
      });
      if (best_v == g_.size()) break;
      pick.push_back(best_v);
      remove_closed(cand, best_v);
    }
    if (pick.size() > best_.size()) best_ = std::move(pick);
  }

  /// Clique-cover bound: a partition of cand into conflict cliques.
  std::size_t cover_bound(const Bits& cand) const {
    std::vector<Bits> cliques;
    bits_for_each(cand, [&](std::size_t v) {
      const auto row = g_.row(v);
      for (auto& c : cliques) {
        bool all = true;
        for (std::size_t w = 0; w < c.size() && all; ++w) all = (c[w] & ~row[w]) == 0;
        if (all) {
          c[v / 64] |= std::uint64_t{1} << (v % 64);
          return;
        }
      }
      Bits c(cand.size(), 0);
      c[v / 64] |= std::uint64_t{1} << (v % 64);
      cliques.push_back(std::move(c));
    });
    return cliques.size();
  }

  void branch(Bits cand) {
    if (++spent_ > budget_) return;
    // Vertices of degree 0 or 1 can always be taken.
    std::size_t forced = 0;
    for (bool changed = true; changed;) {
      changed = false;
      bits_for_each(cand, [&](std::size_t v) {
        if (changed || !((cand[v / 64] >> (v % 64)) & 1u)) return;
        if (deg_in(v, cand) <= 1) {
          cur_.push_back(v);
          ++forced;
          remove_closed(cand, v);
          changed = true;
        }
      });
    }
    const std::size_t left = bits_count(cand);
    if (left == 0) {
      if (cur_.size() > best_.size()) best_ = cur_;
    } else if (cur_.size() + left > best_.size() && cur_.size() + cover_bound(cand) > best_.size()) {
      std::size_t pivot = 0, pivot_d = 0;
      bits_for_each(cand, [&](std::size_t v) {
        const auto d = deg_in(v, cand);
        if (d > pivot_d) {
          pivot_d = d;
          pivot = v;
        }
      });
      Bits with = cand;
      remove_closed(with, pivot);
      cur_.push_back(pivot);
      branch(std::move(with));
      cur_.pop_back();
      cand[pivot / 64] &= ~(std::uint64_t{1} << (pivot % 64));
      branch(std::move(cand));
    }
    cur_.resize(cur_.size() - forced);
  }

  const ConflictGraph& g_;
  std::uint64_t budget_;
  std::uint64_t spent_ = 0;
  std::vector<std::size_t> best_;
  std::vector<std::size_t> cur_;
};

inline std::vector<std::size_t> greedy_independent(const ConflictGraph& g) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> deg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) deg[i] = g.degree(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deg[a] < deg[b]; });
  std::vector<char> blocked(g.size(), 0);
  std::vector<std::size_t> pick;
  for (auto v : order) {
    if (blocked[v]) continue;
    pick.push_back(v);
    bits_for_each(Bits(g.row(v).begin(), g.row(v).end()), [&](std::size_t u) { blocked[u] = 1; });
  }
  std::sort(pick.begin(), pick.end());
  return pick;
}

}  // namespace detail

/// Maximum independent set of the conflict graph: exact branch-and-bound per
/// connected component when the graph has at most node_cap nodes (and the
/// search budget suffices), else greedy by ascending degree.
inline IndependentSet max_independent_set(const ConflictGraph& g, std::size_t node_cap = kDefaultSigmaNodeCap,
                                          std::uint64_t budget = 2'000'000) {
  if (g.size() > node_cap) return {detail::greedy_independent(g), false};
  IndependentSet out{{}, true};
  std::vector<char> seen(g.size(), 0);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    detail::Bits comp(g.words(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      comp[v / 64] |= std::uint64_t{1} << (v % 64);
      detail::bits_for_each(detail::Bits(g.row(v).begin(), g.row(v).end()), [&](std::size_t u) {
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      });
    }
    detail::MaxIndependentSet mis(g, budget);
    bool exhausted = false;
    auto part = mis.solve(comp, exhausted);
    out.certified = out.certified && !exhausted;
    out.nodes.insert(out.nodes.end(), part.begin(), part.end());
  }
  std::sort(out.nodes.begin(), out.nodes.end());
  return out;
}

struct PathStats {
  std::uint64_t tau = 0;
  std::size_t sigma = 0;
  bool sigma_certified = false;
  bool truncated = false;
  std::vector<std::vector<Vertex>> packing;
};

inline PathStats packing_of(PathList list, std::size_t node_cap) {
  PathStats st;
  st.tau = list.paths.size();
  st.truncated = list.truncated;
  const ConflictGraph cg(list.paths);
  auto mis = max_independent_set(cg, node_cap);
  st.sigma = mis.nodes.size();
  st.sigma_certified = mis.certified && !list.truncated;
  for (auto i : mis.nodes) st.packing.push_back(std::move(list.paths[i]));
  return st;
}

/// σ^l(x,y) together with τ^l(x,y).
inline PathStats sigma(const LabeledGraph& g, Vertex x, Vertex y, std::size_t l,
                       std::size_t node_cap = kDefaultSigmaNodeCap, std::uint64_t path_cap = kDefaultPathCap) {
  return packing_of(enumerate_paths(g, x, y, l, path_cap), node_cap);
}

/// An odd number of S-edges, at least one of them internal (not incident to
/// either endpoint). For l ≤ 2 no edge is internal.
inline bool is_central(const LabeledGraph& g, const EdgeSubset& s, std::span<const Vertex> path) {
  std::size_t hits = 0;
  bool internal = false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto e = g.find_edge(path[i], path[i + 1]);
    if (!e || !s.vec.get(*e)) continue;
    ++hits;
    if (i > 0 && i + 2 < path.size()) internal = true;
  }
  return hits % 2 == 1 && internal;
}

/// σ(x,y;S): packing of S-central l-edge paths.
inline PathStats sigma_central(const LabeledGraph& g, Vertex x, Vertex y, const EdgeSubset& s, std::size_t l,
                               std::size_t node_cap = kDefaultSigmaNodeCap,
                               std::uint64_t path_cap = kDefaultPathCap) {
  check_host(g, s);
  PathList list{x, y, l, {}, false};
  if (s.empty()) {
    detail::check_pair(g, x, y, l);
    return {0, 0, true, false, {}};
  }
  list.truncated = for_each_path(g, x, y, l, path_cap, [&](std::span<const Vertex> p) {
    if (is_central(g, s, p)) list.paths.emplace_back(p.begin(), p.end());
  });
  return packing_of(std::move(list), node_cap);
}

struct PairSet {
  std::vector<VertexPair> pairs;      // ascending, x < y
  std::vector<VertexPair> uncertain;  // membership decided without a certified σ
};

/// L(γ) = {{x,y} : σ^{κ-1}(x,y) < γΛ}, Λ = n^{κ-2} p^{κ-1}. Pairs whose σ is
/// only a greedy lower bound below the threshold are kept and flagged.
inline PairSet light_pairs(const LabeledGraph& g, double p, std::size_t kappa, double gamma,
                           std::size_t node_cap = kDefaultSigmaNodeCap) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("light_pairs: gamma must lie in (0,1)");
  if (kappa < 3) throw std::invalid_argument("light_pairs: kappa must be at least 3");
  check_probability(p);
  const double thr = gamma * std::pow(double(g.n()), double(kappa - 2)) * std::pow(p, double(kappa - 1));
  PairSet out;
  for (Vertex x = 0; x < g.n(); ++x) {
    for (Vertex y = x + 1; y < g.n(); ++y) {
      const auto st = sigma(g, x, y, kappa - 1, node_cap);
      if (double(st.sigma) >= thr) continue;
      out.pairs.emplace_back(x, y);
      if (!st.sigma_certified && double(st.tau) >= thr) out.uncertain.emplace_back(x, y);
    }
  }
  return out;
}

/// R(S) = {{x,y} : σ₀(x,y;S) > 0.25 n^{κ-2} q^{κ-1}} in G0. Pairs whose greedy
/// packing stays at or below the threshold but whose central path count
/// exceeds it are left out and flagged.
inline PairSet r_set(const LabeledGraph& g0, double q, const EdgeSubset& s, std::size_t kappa,
                     std::size_t node_cap = kDefaultSigmaNodeCap) {
  check_host(g0, s);
  if (kappa < 3) throw std::invalid_argument("r_set: kappa must be at least 3");
  check_probability(q);
  PairSet out;
  if (s.empty()) return out;
  const double thr = 0.25 * std::pow(double(g0.n()), double(kappa - 2)) * std::pow(q, double(kappa - 1));
  for (Vertex x = 0; x < g0.n(); ++x) {
    for (Vertex y = x + 1; y < g0.n(); ++y) {
      const auto st = sigma_central(g0, x, y, s, kappa - 1, node_cap);
      if (double(st.sigma) > thr) {
        out.pairs.emplace_back(x, y);
      } else if (!st.sigma_certified && double(st.tau) > thr) {
        out.uncertain.emplace_back(x, y);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ropes

struct RopeCount {
  std::uint64_t count = 0;
  bool truncated = false;
};

/// Number of t-edge paths (distinct vertices) whose two terminal edges lie
/// in S; each path counted once.
inline RopeCount count_ropes(const LabeledGraph& g0, const EdgeSubset& s, std::size_t t,
                             std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() / 2) {
  check_host(g0, s);
  if (t < 2) throw std::invalid_argument("count_ropes: t must be at least 2");
  std::uint64_t directed = 0;
  bool stopped = false;
  std::vector<char> on(g0.n(), 0);
  std::function<void(Vertex, std::size_t)> go = [&](Vertex v, std::size_t left) {
    for (const auto& inc : g0.neighbors(v)) {
      if (on[inc.to]) continue;
      if (left == 1) {
        if (s.vec.get(inc.edge)) {
          if (directed == 2 * cap) {
            stopped = true;
            return;
          }
          ++directed;
        }
        continue;
      }
      on[inc.to] = 1;
      go(inc.to, left - 1);
      on[inc.to] = 0;
      if (stopped) return;
    }
  };
  for (auto e : s.vec.support()) {
    const Edge ed = g0.edge(static_cast<EdgeId>(e));
    for (auto [a, b] : {std::pair{ed.u, ed.v}, std::pair{ed.v, ed.u}}) {
      on[a] = on[b] = 1;
      go(b, t - 1);
      on[a] = on[b] = 0;
      if (stopped) return {directed / 2, true};
    }
  }
  return {directed / 2, false};
}

/// f·A^{t-2}·fᵀ with f = (d_S(x))_x, by t-2 matrix-free adjacency
/// applications. Counts walks, so it bounds the rope count.
inline double rope_bound(const LabeledGraph& g0, double q, const EdgeSubset& s, std::size_t t) {
  check_host(g0, s);
  check_probability(q);
  if (t < 3) throw std::invalid_argument("rope_bound: t must be at least 3");
  std::vector<double> f(g0.n(), 0.0);
  for (auto e : s.vec.support()) {
    f[g0.edge(static_cast<EdgeId>(e)).u] += 1.0;
    f[g0.edge(static_cast<EdgeId>(e)).v] += 1.0;
  }
  std::vector<double> x = f, y(g0.n());
  for (std::size_t k = 0; k + 2 < t; ++k) {
    for (Vertex v = 0; v < g0.n(); ++v) {
      double acc = 0.0;
      for (const auto& inc : g0.neighbors(v)) acc += x[inc.to];
      y[v] = acc;
    }
    std::swap(x, y);
  }
  return std::inner_product(f.begin(), f.end(), x.begin(), 0.0);
}

/// max{β² n^{t+1} q^t, β n^{t/2+2} q^{t/2+1}} with |S| = β n² q / 2.
inline double rope_max_term(std::size_t n, double q, std::size_t s_size, std::size_t t) {
  if (n == 0 || q <= 0.0) throw std::invalid_argument("rope_max_term: need n > 0 and q > 0");
  const double nn = double(n);
  const double beta = 2.0 * double(s_size) / (nn * nn * q);
  const double td = double(t);
  const double a = beta * beta * std::pow(nn, td + 1) * std::pow(q, td);
  const double b = beta * std::pow(nn, td / 2 + 2) * std::pow(q, td / 2 + 1);
  return std::max(a, b);
}

}  // namespace cyclespan
