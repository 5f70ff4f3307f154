#include <gtest/gtest.h>

#include <cmath>

#include "cyclespan/paths.hpp"
#include "oracles.hpp"

using namespace cyclespan;

namespace {

std::vector<std::vector<Vertex>> all_paths(const LabeledGraph& g, Vertex x, Vertex y, std::size_t l) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> cur{x};
  std::function<void()> go = [&] {
    if (cur.size() == l + 1) {
      if (cur.back() == y) out.push_back(cur);
      return;
    }
    for (Vertex w = 0; w < g.n(); ++w) {
      if (std::find(cur.begin(), cur.end(), w) != cur.end() || !g.has_edge(cur.back(), w)) continue;
      if (w == y && cur.size() != l) continue;
      cur.push_back(w);
      go();
      cur.pop_back();
    }
  };
  go();
  return out;
}

bool disjoint_inside(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    for (std::size_t j = 1; j + 1 < b.size(); ++j) {
      if (a[i] == b[j]) return false;
    }
  }
  return true;
}

// Largest pairwise internally disjoint subfamily, by trying all subsets.
std::size_t brute_packing(const std::vector<std::vector<Vertex>>& ps) {
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ps.size()); ++mask) {
    const auto c = static_cast<std::size_t>(std::popcount(mask));
    if (c <= best) continue;
    bool ok = true;
    for (std::size_t i = 0; i < ps.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < ps.size() && ok; ++j) {
        if ((mask >> i & 1u) && (mask >> j & 1u)) ok = disjoint_inside(ps[i], ps[j]);
      }
    }
    if (ok) best = c;
  }
  return best;
}

bool central_brute(const LabeledGraph& g, const EdgeSubset& s, const std::vector<Vertex>& p) {
  std::size_t hits = 0;
  bool internal = false;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (!s.vec.get(*g.find_edge(p[i], p[i + 1]))) continue;
    ++hits;
    if (p[i] != p.front() && p[i + 1] != p.back()) internal = true;
  }
  return hits % 2 == 1 && internal;
}

// Two disjoint 3-paths 0-2-3-1 and 0-4-5-1 with S-middles, a 2-path 0-6-1
// and chords that create further non-central paths.
LabeledGraph rope_gadget() {
  return LabeledGraph(7, {{0, 2}, {2, 3}, {3, 1}, {0, 4}, {4, 5}, {5, 1}, {0, 6}, {6, 1}, {3, 4}, {2, 6}});
}

}  // namespace

TEST(Tau, Examples) {
  const auto g = LabeledGraph(4, {{0, 1}, {1, 2}});
  EXPECT_EQ(tau(g, 0, 1, 1).count, 1u);
  EXPECT_EQ(tau(g, 0, 2, 1).count, 0u);
  EXPECT_EQ(tau(LabeledGraph::complete(4), 0, 1, 2).count, 2u);
  EXPECT_EQ(tau(LabeledGraph::complete(5), 0, 1, 3).count, 6u);
  EXPECT_THROW(tau(g, 1, 1, 2), std::invalid_argument);
  EXPECT_THROW(tau(g, 0, 1, 0), std::invalid_argument);
  const auto t = tau(LabeledGraph::complete(7), 0, 1, 3, 5);
  EXPECT_TRUE(t.truncated);
  EXPECT_EQ(t.count, 5u);
}

TEST(Tau, SymmetricAndMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto g = gen_gnp(9, 0.45, seed);
    for (Vertex x = 0; x < 4; ++x) {
      for (Vertex y = x + 1; y < 9; ++y) {
        for (std::size_t l = 1; l <= 5; ++l) {
          const auto a = tau(g, x, y, l).count;
          EXPECT_EQ(a, tau(g, y, x, l).count);
          EXPECT_EQ(a, oracle::count_paths(g, x, y, l));
        }
      }
    }
  }
}

TEST(Tau, EnumerationIsLexicographic) {
  const auto list = enumerate_paths(LabeledGraph::complete(6), 0, 1, 3);
  ASSERT_EQ(list.paths.size(), 12u);
  EXPECT_TRUE(std::is_sorted(list.paths.begin(), list.paths.end()));
  const auto first = enumerate_paths(LabeledGraph::complete(6), 0, 1, 3, 4);
  EXPECT_TRUE(first.truncated);
  EXPECT_EQ(first.paths, std::vector<std::vector<Vertex>>(list.paths.begin(), list.paths.begin() + 4));
}

TEST(Sigma, Examples) {
  const auto k5 = LabeledGraph::complete(5);
  for (Vertex y = 1; y < 5; ++y) EXPECT_EQ(sigma(k5, 0, y, 2).sigma, 3u);
  const auto c5 = LabeledGraph::cycle(5);
  const auto st = sigma(c5, 0, 1, 4);
  EXPECT_EQ(st.sigma, 1u);
  EXPECT_TRUE(st.sigma_certified);
  const auto none = sigma(LabeledGraph::path(3), 0, 3, 2);
  EXPECT_EQ(none.tau, 0u);
  EXPECT_EQ(none.sigma, 0u);
}

TEST(Sigma, ExactMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = gen_gnp(8, 0.5, seed);
    for (std::size_t l : {2u, 3u, 4u}) {
      const auto ps = all_paths(g, 0, 1, l);
      if (ps.size() > 20) continue;
      const auto st = sigma(g, 0, 1, l);
      ASSERT_TRUE(st.sigma_certified);
      EXPECT_EQ(st.sigma, brute_packing(ps)) << seed << ' ' << l;
      EXPECT_LE(st.sigma, st.tau);
      ASSERT_EQ(st.packing.size(), st.sigma);
      for (std::size_t i = 0; i < st.packing.size(); ++i) {
        for (std::size_t j = i + 1; j < st.packing.size(); ++j) {
          EXPECT_TRUE(disjoint_inside(st.packing[i], st.packing[j]));
        }
      }
    }
  }
}

TEST(Sigma, GreedyBeyondNodeCap) {
  const auto k8 = LabeledGraph::complete(8);
  const auto st = sigma(k8, 0, 1, 3, 10);
  EXPECT_FALSE(st.sigma_certified);
  EXPECT_EQ(st.tau, 30u);
  EXPECT_GE(st.sigma, 1u);
  EXPECT_LE(st.sigma, 3u);
  EXPECT_EQ(sigma(k8, 0, 1, 3).sigma, 3u);
}

TEST(SigmaCentral, Examples) {
  const auto k7 = LabeledGraph::complete(7);
  EXPECT_EQ(sigma_central(k7, 0, 1, empty_subset(k7), 4).sigma, 0u);
  EXPECT_EQ(sigma_central(k7, 0, 1, all_edges(k7), 4).sigma, 0u);
  const auto c5 = LabeledGraph::cycle(5);
  // Path 0-4-3-2-1; its middle edge is {3,4}.
  const std::vector<Edge> mid{{3, 4}};
  const auto st = sigma_central(c5, 0, 1, subset_of_pairs(c5, mid), 4);
  EXPECT_EQ(st.sigma, 1u);
  // l ≤ 2 has no internal edges.
  EXPECT_EQ(sigma_central(k7, 0, 1, all_edges(k7), 2).sigma, 0u);
}

TEST(SigmaCentral, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = gen_gnp(8, 0.55, seed);
    EdgeSubset s = empty_subset(g);
    for (std::size_t e = 0; e < g.m(); ++e) s.vec.set(e, rng() % 3 == 0);
    for (std::size_t l : {3u, 4u}) {
      std::vector<std::vector<Vertex>> ps;
      for (auto& p : all_paths(g, 2, 5, l)) {
        if (central_brute(g, s, p)) ps.push_back(p);
      }
      if (ps.size() > 20) continue;
      EXPECT_EQ(sigma_central(g, 2, 5, s, l).sigma, brute_packing(ps));
    }
  }
}

TEST(LightPairs, Examples) {
  const auto g = LabeledGraph::complete(10);
  EXPECT_TRUE(light_pairs(g, 0.5, 3, 1e-9).pairs.empty());
  EXPECT_EQ(light_pairs(LabeledGraph(6), 0.5, 3, 0.5).pairs.size(), 15u);
  EXPECT_TRUE(light_pairs(LabeledGraph::complete(6), 1.0, 3, 0.5).pairs.empty());
  EXPECT_THROW(light_pairs(g, 0.5, 3, 1.5), std::invalid_argument);
}

TEST(RSet, Examples) {
  const auto g = rope_gadget();
  EXPECT_TRUE(r_set(g, 0.5, empty_subset(g), 4).pairs.empty());
  const std::vector<Edge> mids{{2, 3}, {4, 5}};
  const auto s = subset_of_pairs(g, mids);
  // 0.25 n^2 q^3 = m makes the threshold unreachable.
  const double q_big = std::cbrt(double(g.m()) / (0.25 * 49));
  EXPECT_TRUE(r_set(g, std::min(q_big, 1.0), s, 4).pairs.empty());
  // Threshold 1.5.
  const double q = std::cbrt(1.5 / (0.25 * 49));
  const auto r = r_set(g, q, s, 4);
  EXPECT_EQ(r.pairs, (std::vector<VertexPair>{{0, 1}}));
  EXPECT_TRUE(r.uncertain.empty());
  // Same answer by exhaustive enumeration.
  std::vector<VertexPair> brute;
  for (Vertex x = 0; x < 7; ++x) {
    for (Vertex y = x + 1; y < 7; ++y) {
      std::vector<std::vector<Vertex>> ps;
      for (auto& p : all_paths(g, x, y, 3)) {
        if (central_brute(g, s, p)) ps.push_back(p);
      }
      if (double(brute_packing(ps)) > 1.5) brute.emplace_back(x, y);
    }
  }
  EXPECT_EQ(r.pairs, brute);
}

TEST(Ropes, Examples) {
  const auto star = LabeledGraph::star(3);
  EXPECT_EQ(count_ropes(star, empty_subset(star), 2).count, 0u);
  EXPECT_EQ(count_ropes(star, all_edges(star), 2).count, 3u);
  const auto p4 = LabeledGraph::path(4);
  const std::vector<Edge> ends{{0, 1}, {3, 4}};
  EXPECT_EQ(count_ropes(p4, subset_of_pairs(p4, ends), 4).count, 1u);
  const auto k3 = LabeledGraph::complete(3);
  // A 3-edge path needs four vertices, so K3 has no ropes of length 3.
  EXPECT_EQ(count_ropes(k3, all_edges(k3), 3).count, 0u);
  EXPECT_DOUBLE_EQ(rope_bound(k3, 1.0, all_edges(k3), 3), 24.0);
  EXPECT_DOUBLE_EQ(rope_bound(k3, 1.0, empty_subset(k3), 3), 0.0);
  EXPECT_THROW(rope_bound(k3, 1.0, all_edges(k3), 2), std::invalid_argument);
  EXPECT_THROW(count_ropes(k3, all_edges(k3), 1), std::invalid_argument);
}

TEST(Ropes, CountMatchesBruteForceAndBound) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = gen_gnp(9, 0.4, seed);
    EdgeSubset s = empty_subset(g);
    for (std::size_t e = 0; e < g.m(); ++e) s.vec.set(e, rng() % 2 == 0);
    for (std::size_t t = 2; t <= 5; ++t) {
      std::uint64_t brute = 0;
      for (Vertex x = 0; x < g.n(); ++x) {
        for (Vertex y = x + 1; y < g.n(); ++y) {
          for (const auto& p : all_paths(g, x, y, t)) {
            brute += s.vec.get(*g.find_edge(p[0], p[1])) && s.vec.get(*g.find_edge(p[t - 1], p[t]));
          }
        }
      }
      const auto c = count_ropes(g, s, t);
      EXPECT_EQ(c.count, brute) << seed << ' ' << t;
      if (t >= 3) {
        EXPECT_LE(double(c.count), rope_bound(g, 0.4, s, t));
      }
    }
  }
}

TEST(PathStatistics, TwoPathCountsConcentrate) {
  const std::size_t n = 400;
  const double np2 = 40 * std::log(double(n));
  const double p = std::sqrt(np2 / double(n));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = gen_gnp(n, p, seed);
    for (Vertex i = 0; i < 20; ++i) {
      const Vertex x = (i * 37 + static_cast<Vertex>(seed)) % n;
      const Vertex y = (x + 1 + i * 11) % n;
      const double t = double(tau(g, x, y, 2).count);
      EXPECT_GT(t, 0.75 * np2);
      EXPECT_LT(t, 1.25 * np2);
    }
  }
}

TEST(PathStatistics, PackingGapStaysSmallWhenSparse) {
  // Three-edge paths with n^3 p^5 = n^-0.25: the packing loses O(1) paths.
  const std::size_t n = 1000;
  const double p = std::pow(double(n), -0.65);
  std::uint64_t worst = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = gen_gnp(n, p, seed);
    for (Vertex x = 0; x < 30; ++x) {
      const auto st = sigma(g, x, x + 100, 3);
      ASSERT_TRUE(st.sigma_certified);
      worst = std::max<std::uint64_t>(worst, st.tau - st.sigma);
    }
  }
  RecordProperty("max_gap", static_cast<int>(worst));
  EXPECT_LE(worst, 3u);
}
