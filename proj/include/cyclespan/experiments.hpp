#pragma once

// Orchestration: exact K_n verification, Monte Carlo sweeps over multiples of
// p*, coupling runs, the logistic threshold fit, and the Q \ T audit. Trials
// run on a worker pool; results are folded in (point, trial) order so output
// does not depend on the number of workers.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "bounds.hpp"
#include "graph.hpp"
#include "paths.hpp"
#include "rng.hpp"
#include "subspace.hpp"

namespace cyclespan {

// ---------------------------------------------------------------------------
// Workers

inline std::size_t worker_count() {
  if (const char* env = std::getenv("CYCLESPAN_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on `workers` threads. The first exception
/// thrown by any task is rethrown after all threads have joined.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t workers = worker_count()) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      (void)w;
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------------------
// Statistics

struct Interval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval at 95%.
inline Interval wilson(std::size_t k, std::size_t n, double z = 1.959963984540054) {
  if (n == 0) return {0.0, 0.0, 1.0};
  const double nn = double(n), ph = double(k) / nn, z2 = z * z;
  const double den = 1.0 + z2 / nn;
  const double centre = (ph + z2 / (2.0 * nn)) / den;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / den;
  return {ph, k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

inline std::vector<double> default_grid() { return {0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.4, 1.7}; }

// ---------------------------------------------------------------------------
// Exact K_n verification

struct VerifyRow {
  std::string h;
  std::size_t n = 0;
  std::string cls;
  std::size_t dim = 0;
  std::size_t expected = 0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });
  }
};

/// dim C_H(K_n) against the classification dimension. Cycles C_κ (κ in
/// `kappas`) run for max(n_min, κ) ≤ n ≤ n_max; library patterns for
/// max(n_min, v_H + 2, 5) ≤ n ≤ n_max.
inline VerifyReport verify_kn(std::size_t n_min, std::size_t n_max, const std::vector<HPattern>& library,
                              const std::vector<std::size_t>& kappas = {3, 5, 7}) {
  if (n_max > 12) throw std::invalid_argument("verify_kn: n_max above 12 is outside exact enumeration range");
  struct Job {
    const HPattern* h;
    std::size_t n;
  };
  std::vector<HPattern> cycles;
  for (auto k : kappas) cycles.push_back(HPattern::cycle(k));
  std::vector<Job> jobs;
  for (const auto& c : cycles) {
    for (std::size_t n = std::max(n_min, c.v_count()); n <= n_max; ++n) jobs.push_back({&c, n});
  }
  for (const auto& h : library) {
    if (n_max > 10) throw std::invalid_argument("verify_kn: general patterns need n_max ≤ 10");
    for (std::size_t n = std::max({n_min, h.v_count() + 2, std::size_t{5}}); n <= n_max; ++n) jobs.push_back({&h, n});
  }
  VerifyReport rep;
  rep.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto& [h, n] = jobs[i];
    const auto kn = LabeledGraph::complete(n);
    const auto cls = classify_h(*h);
    VerifyRow r{h->name(), n, to_string(cls), h_space_rank(kn, *h), w_dimension(kn, cls), false};
    r.pass = r.dim == r.expected;
    rep.rows[i] = r;
  });
  return rep;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepMode { exact, heuristic };

struct SweepSpec {
  std::size_t n = 0;
  std::size_t kappa = 3;
  std::vector<double> grid = default_grid();  // multiples of p*_κ(n)
  std::size_t trials = 1;
  std::uint64_t master_seed = 1;
  SweepMode mode = SweepMode::exact;

  void validate() const {
    if (n < 3) throw std::invalid_argument("sweep: n must be at least 3");
    if (kappa < 3) throw std::invalid_argument("sweep: kappa must be at least 3");
    if (trials == 0) throw std::invalid_argument("sweep: trials must be at least 1");
    if (grid.empty()) throw std::invalid_argument("sweep: grid is empty");
    for (double g : grid) {
      if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("sweep: grid multiples must be nonnegative");
    }
  }
};

struct TrialRecord {
  std::size_t point = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t kappa = 0;
  double p = 0.0;
  std::size_t m = 0;
  bool in_Q = false;
  bool in_T = false;
  std::size_t F_weight = 0;
  bool F_certified = true;
  double alpha = 0.0;  // |F| = α n² p / 2
  bool acyclic = false;
  double wall_time_ms = 0.0;
  std::string error;
};

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t point, std::size_t trial) {
  return derive_seed({master, point, trial});
}

inline double alpha_of(std::size_t weight, std::size_t n, double p) {
  return p > 0.0 ? 2.0 * double(weight) / (double(n) * double(n) * p) : 0.0;
}

/// One trial: Q, T and (for odd κ) the canonical F.
inline TrialRecord evaluate_graph(const LabeledGraph& g, std::size_t kappa, double p, SweepMode mode,
                                  std::uint64_t seed) {
  TrialRecord r;
  r.n = g.n();
  r.kappa = kappa;
  r.p = p;
  r.m = g.m();
  r.acyclic = cycle_space_dim(g) == 0;
  r.in_Q = in_Q(g, kappa);
  if (kappa % 2 == 1) {
    FOptions opt;
    opt.seed = derive_seed({seed, 0xf});
    if (mode == SweepMode::heuristic) {
      opt.exact_dim_cap = 0;
      opt.restarts = 8;
    }
    const auto f = find_F(g, kappa, opt);
    r.in_T = f.in_T;
    r.F_weight = f.F.size();
    r.F_certified = f.certified;
  } else {
    r.in_T = in_T(g, kappa);
    r.F_certified = false;
  }
  r.alpha = alpha_of(r.F_weight, r.n, p);
  return r;
}

struct SweepPoint {
  std::size_t index = 0;
  double multiple = 0.0;
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t q = 0;
  std::size_t t = 0;
  std::size_t q_not_t = 0;
  std::size_t uncertified = 0;
  std::size_t acyclic = 0;
  std::size_t errors = 0;
  double mean_F_weight = 0.0;

  Interval pr_q() const { return wilson(q, trials - errors); }
  Interval pr_t() const { return wilson(t, trials - errors); }
  Interval pr_q_not_t() const { return wilson(q_not_t, trials - errors); }
};

struct SweepResult {
  SweepSpec spec;
  double pstar = 0.0;
  std::vector<SweepPoint> points;
  std::vector<TrialRecord> trials;  // point-major
};

inline SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepResult res{spec, pstar(spec.kappa, spec.n), {}, {}};
  const std::size_t total = spec.grid.size() * spec.trials;
  res.trials.resize(total);
  parallel_for(total, [&](std::size_t i) {
    const std::size_t pt = i / spec.trials, tr = i % spec.trials;
    const double p = std::min(1.0, spec.grid[pt] * res.pstar);
    const std::uint64_t seed = trial_seed(spec.master_seed, pt, tr);
    const auto t0 = std::chrono::steady_clock::now();
    TrialRecord r;
    try {
      const auto g = gen_gnp(spec.n, p, seed);
      r = evaluate_graph(g, spec.kappa, p, spec.mode, seed);
    } catch (const std::exception& e) {
      r = TrialRecord{};
      r.n = spec.n;
      r.kappa = spec.kappa;
      r.p = p;
      r.error = e.what();
    }
    r.point = pt;
    r.trial = tr;
    r.seed = seed;
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.trials[i] = std::move(r);
  });
  for (std::size_t pt = 0; pt < spec.grid.size(); ++pt) {
    SweepPoint s;
    s.index = pt;
    s.multiple = spec.grid[pt];
    s.p = std::min(1.0, spec.grid[pt] * res.pstar);
    s.trials = spec.trials;
    double wsum = 0.0;
    for (std::size_t tr = 0; tr < spec.trials; ++tr) {
      const auto& r = res.trials[pt * spec.trials + tr];
      if (!r.error.empty()) {
        ++s.errors;
        continue;
      }
      s.q += r.in_Q;
      s.t += r.in_T;
      s.q_not_t += r.in_Q && !r.in_T;
      s.uncertified += !r.F_certified;
      s.acyclic += r.acyclic;
      wsum += double(r.F_weight);
    }
    s.mean_F_weight = s.trials > s.errors ? wsum / double(s.trials - s.errors) : 0.0;
    res.points.push_back(s);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Threshold fit

struct ThresholdFit {
  double p_half = 0.0;  // as a multiple of p*
  double slope = 0.0;
  double intercept = 0.0;
};

struct BinomialPoint {
  double x = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
};

/// Logistic regression logit Pr = a + b x by Newton's method on the binomial
/// likelihood, with a small ridge on b so separable data stay finite.
inline ThresholdFit fit_threshold(const std::vector<BinomialPoint>& data, double ridge = 1e-3) {
  std::size_t used = 0, succ = 0, tot = 0;
  for (const auto& d : data) {
    if (d.trials == 0) continue;
    if (d.successes > d.trials) throw std::invalid_argument("fit_threshold: successes exceed trials");
    ++used;
    succ += d.successes;
    tot += d.trials;
  }
  if (used < 4) throw std::invalid_argument("fit_threshold: need at least 4 grid points");
  if (succ == 0 || succ == tot) throw std::invalid_argument("fit_threshold: degenerate data (all 0s or all 1s)");
  double xm = 0.0;
  for (const auto& d : data) xm += d.x * double(d.trials);
  xm /= double(tot);
  double a = 0.0, b = 0.0;  // logit = a + b (x - xm)
  for (int it = 0; it < 200; ++it) {
    double ga = 0.0, gb = -ridge * b, haa = 1e-12, hab = 0.0, hbb = ridge;
    for (const auto& d : data) {
      if (d.trials == 0) continue;
      const double u = d.x - xm;
      const double pr = 1.0 / (1.0 + std::exp(-(a + b * u)));
      const double nn = double(d.trials);
      ga += double(d.successes) - nn * pr;
      gb += (double(d.successes) - nn * pr) * u;
      const double w = nn * pr * (1.0 - pr);
      haa += w;
      hab += w * u;
      hbb += w * u * u;
    }
    const double det = haa * hbb - hab * hab;
    const double da = (hbb * ga - hab * gb) / det, db = (haa * gb - hab * ga) / det;
    a += da;
    b += db;
    if (std::abs(da) + std::abs(db) < 1e-12) break;
  }
  ThresholdFit f;
  f.slope = b;
  f.intercept = a - b * xm;
  f.p_half = b != 0.0 ? xm - a / b : std::numeric_limits<double>::quiet_NaN();
  return f;
}

inline std::vector<BinomialPoint> q_points(const SweepResult& r) {
  std::vector<BinomialPoint> out;
  for (const auto& s : r.points) out.push_back({s.multiple, s.q, s.trials - s.errors});
  return out;
}

// ---------------------------------------------------------------------------
// Coupling

enum class CouplingRule { canonical, half_cut };

struct CoupleRecord {
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::size_t n = 0;
  std::size_t kappa = 0;
  double p = 0.0;
  double theta = 0.0;  // q / p
  std::size_t F_weight = 0;
  std::size_t F0_weight = 0;
  bool F_certified = true;
  double alpha = 0.0;
  double alpha0 = 0.0;  // |F0| = α0 n² q / 2
  double ratio = std::numeric_limits<double>::quiet_NaN();  // |F0| / (ϑ|F|)
  bool F0_in_Ckperp_of_G0 = true;
  bool low_degree_ok = true;  // d_F0(v) < 3 log n where d_F(v) ≤ (log n)/ϑ
  double max_degree_dev = std::numeric_limits<double>::quiet_NaN();
};

/// Every κ-cycle of g0 meets f0 evenly.
inline bool in_cycle_perp(const LabeledGraph& g0, const EdgeSubset& f0, std::size_t kappa,
                          std::size_t cap = kDefaultCopyCap) {
  check_host(g0, f0);
  bool ok = true;
  const bool truncated = for_each_cycle(g0, kappa, cap, [&](std::span<const EdgeId> ids) {
    std::size_t hits = 0;
    for (auto e : ids) hits += f0.vec.get(e);
    ok = ok && hits % 2 == 0;
  });
  if (truncated) throw TruncationError("in_cycle_perp: cycle enumeration exceeded the cap");
  return ok;
}

/// Couples G = G_{n,p} and G0 = G_{n,ϑp} through shared labels and thins F to
/// F0 = G0 ∩ F. Per-trial graphs depend only on (master_seed, trial), so all
/// ϑ values see the same G. A κ-cycle of G0 missing F0 parity is a hard error.
inline std::vector<CoupleRecord> run_coupling(std::size_t n, std::size_t kappa, double p,
                                              const std::vector<double>& thetas, std::size_t trials,
                                              std::uint64_t master_seed,
                                              CouplingRule rule = CouplingRule::canonical) {
  check_probability(p);
  if (kappa < 3) throw std::invalid_argument("run_coupling: kappa must be at least 3");
  if (rule == CouplingRule::canonical && kappa % 2 == 0) {
    throw std::invalid_argument("run_coupling: the canonical rule needs odd kappa");
  }
  for (double t : thetas) {
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("run_coupling: theta must lie in (0,1]");
  }
  std::vector<CoupleRecord> out(thetas.size() * trials);
  parallel_for(trials, [&](std::size_t tr) {
    const std::uint64_t seed = derive_seed({master_seed, 0xc0, tr});
    const auto sample = gen_coupled(n, seed);
    const auto g = slice(sample, p);
    EdgeSubset f = empty_subset(g);
    bool certified = true;
    if (rule == CouplingRule::canonical) {
      auto res = find_F(g, kappa, FOptions{.seed = derive_seed({seed, 0xf})});
      f = std::move(res.F);
      certified = res.certified;
    } else {
      VertexSet half;
      for (Vertex v = 0; v < n / 2; ++v) half.push_back(v);
      f = cut_vector(g, half);
    }
    const double logn = std::log(double(n));
    for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
      const double theta = thetas[ti];
      const auto g0 = slice(sample, theta * p);
      const auto f0 = reindex(f, g, g0);
      CoupleRecord r;
      r.seed = seed;
      r.trial = tr;
      r.n = n;
      r.kappa = kappa;
      r.p = p;
      r.theta = theta;
      r.F_weight = f.size();
      r.F0_weight = f0.size();
      r.F_certified = certified;
      r.alpha = alpha_of(r.F_weight, n, p);
      r.alpha0 = alpha_of(r.F0_weight, n, theta * p);
      if (r.F_weight > 0) r.ratio = double(r.F0_weight) / (theta * double(r.F_weight));
      r.F0_in_Ckperp_of_G0 = in_cycle_perp(g0, f0, kappa);
      if (!r.F0_in_Ckperp_of_G0) {
        throw std::logic_error("run_coupling: F0 is not orthogonal to the kappa-cycles of G0 (seed " +
                               std::to_string(seed) + ", theta " + std::to_string(theta) + ")");
      }
      double dev = -1.0;
      for (Vertex v = 0; v < n; ++v) {
        const double dF = double(subset_degree(g, f, v)), dF0 = double(subset_degree(g0, f0, v));
        if (dF <= logn / theta) {
          r.low_degree_ok = r.low_degree_ok && dF0 < 3.0 * logn;
        } else {
          dev = std::max(dev, std::abs(dF0 / (theta * dF) - 1.0));
        }
      }
      if (dev >= 0.0) r.max_degree_dev = dev;
      out[ti * trials + tr] = r;
    }
  });
  return out;
}

struct CoupleSummary {
  double theta = 0.0;
  std::size_t trials = 0;
  std::size_t nonempty = 0;
  std::size_t uncertified = 0;  // nonempty F, excluded from ratio statistics
  std::size_t qualifying = 0;   // certified, |F| ≥ min_weight
  std::size_t in_band = 0;      // qualifying with ratio in [lo, hi]
  std::size_t perp_ok = 0;
  std::size_t low_degree_ok = 0;
};

inline std::vector<CoupleSummary> summarize_coupling(const std::vector<CoupleRecord>& recs,
                                                     std::size_t min_weight = 0, double lo = 0.7,
                                                     double hi = 1.3) {
  std::map<double, CoupleSummary> by;
  std::vector<double> order;
  for (const auto& r : recs) {
    auto [it, fresh] = by.try_emplace(r.theta);
    if (fresh) order.push_back(r.theta);
    auto& s = it->second;
    s.theta = r.theta;
    ++s.trials;
    s.perp_ok += r.F0_in_Ckperp_of_G0;
    s.low_degree_ok += r.low_degree_ok;
    if (r.F_weight == 0) continue;
    ++s.nonempty;
    if (!r.F_certified) {
      ++s.uncertified;
      continue;
    }
    if (r.F_weight < min_weight) continue;
    ++s.qualifying;
    s.in_band += r.ratio >= lo && r.ratio <= hi;
  }
  std::vector<CoupleSummary> out;
  for (double t : order) out.push_back(by[t]);
  return out;
}

// ---------------------------------------------------------------------------
// Q \ T audit

struct WitnessCheck {
  std::size_t n = 0;
  std::size_t point = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t F_weight = 0;
  bool F_certified = false;
  bool degree_ok = false;  // d_F(v) ≤ d_G(v)/2 everywhere
  bool xy_ok = false;      // |F| ≥ σ^{κ-1}(x,y) + 1 for every xy ∈ F
  bool sigma_certified = true;
  std::size_t weight_lower_bound = 0;  // 1 + min over edges of σ^{κ-1}
  bool weight_optimal = false;
};

struct AuditReport {
  std::size_t kappa = 0;
  std::vector<double> grid;
  std::vector<SweepResult> sweeps;  // one per n
  std::vector<WitnessCheck> witnesses;
  double max_rate = 0.0;
  Interval max_rate_ci;
  std::size_t max_n = 0;
  double max_multiple = 0.0;

  bool witnesses_ok() const {
    return std::all_of(witnesses.begin(), witnesses.end(),
                       [](const WitnessCheck& w) { return w.degree_ok && w.xy_ok && w.F_weight > 0; });
  }
};

/// Checks the two structural properties of a nonempty F ∈ C_κ⊥(G) \ C⊥(G).
inline WitnessCheck check_witness(const LabeledGraph& g, const EdgeSubset& f, std::size_t kappa) {
  WitnessCheck w;
  w.F_weight = f.size();
  w.degree_ok = true;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (2 * subset_degree(g, f, v) > g.degree(v)) w.degree_ok = false;
  }
  w.xy_ok = true;
  for (const auto& e : edges_of(g, f)) {
    const auto st = sigma(g, e.u, e.v, kappa - 1);
    w.sigma_certified = w.sigma_certified && st.sigma_certified;
    if (f.size() < st.sigma + 1) w.xy_ok = false;
  }
  return w;
}

/// Every nonempty F ∈ C_κ⊥(G) has |F| ≥ 1 + σ^{κ-1}(x,y) for each xy ∈ F, so
/// 1 + min over edges of σ bounds |F| from below. Greedy σ values are lower
/// bounds on σ and keep the bound valid.
inline std::size_t f_weight_lower_bound(const LabeledGraph& g, std::size_t kappa) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& e : g.edges()) {
    best = std::min(best, sigma(g, e.u, e.v, kappa - 1).sigma);
    if (best == 0) break;
  }
  return g.m() == 0 ? 0 : best + 1;
}

inline AuditReport audit_main_theorem(const std::vector<std::size_t>& n_list, std::size_t kappa,
                                      const std::vector<double>& grid, std::size_t trials,
                                      std::uint64_t master_seed) {
  if (kappa % 2 == 0) throw std::invalid_argument("audit: kappa must be odd");
  AuditReport rep;
  rep.kappa = kappa;
  rep.grid = grid;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    SweepSpec spec{n_list[ni], kappa, grid, trials, derive_seed({master_seed, n_list[ni]}), SweepMode::exact};
    auto sw = run_sweep(spec);
    for (const auto& s : sw.points) {
      const auto ci = s.pr_q_not_t();
      if (rep.max_n == 0 || ci.estimate > rep.max_rate) {
        rep.max_rate = ci.estimate;
        rep.max_rate_ci = ci;
        rep.max_n = spec.n;
        rep.max_multiple = s.multiple;
      }
    }
    for (const auto& r : sw.trials) {
      if (!r.error.empty() || !r.in_Q || r.in_T) continue;
      const auto g = gen_gnp(r.n, r.p, r.seed);
      FOptions opt;
      opt.seed = derive_seed({r.seed, 0xf});
      const auto f = find_F(g, kappa, opt);
      auto w = check_witness(g, f.F, kappa);
      w.n = r.n;
      w.point = r.point;
      w.trial = r.trial;
      w.seed = r.seed;
      w.F_certified = f.certified;
      w.weight_lower_bound = f_weight_lower_bound(g, kappa);
      w.weight_optimal = f.certified || w.F_weight == w.weight_lower_bound;
      rep.witnesses.push_back(w);
    }
    rep.sweeps.push_back(std::move(sw));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Output

namespace io {

inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

inline const char* sweep_csv_header() {
  return "n,kappa,point,multiple,p,trials,q,t,q_not_t,uncertified,acyclic,errors,"
         "pr_q,pr_q_lo,pr_q_hi,pr_t,pr_t_lo,pr_t_hi,pr_q_not_t,pr_q_not_t_lo,pr_q_not_t_hi,mean_F_weight";
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& r, bool header = true) {
  if (header) os << sweep_csv_header() << '\n';
  for (const auto& s : r.points) {
    const auto q = s.pr_q(), t = s.pr_t(), qt = s.pr_q_not_t();
    os << r.spec.n << ',' << r.spec.kappa << ',' << s.index << ',' << fmt(s.multiple) << ',' << fmt(s.p) << ','
       << s.trials << ',' << s.q << ',' << s.t << ',' << s.q_not_t << ',' << s.uncertified << ',' << s.acyclic
       << ',' << s.errors << ',' << fmt(q.estimate) << ',' << fmt(q.lo) << ',' << fmt(q.hi) << ','
       << fmt(t.estimate) << ',' << fmt(t.lo) << ',' << fmt(t.hi) << ',' << fmt(qt.estimate) << ','
       << fmt(qt.lo) << ',' << fmt(qt.hi) << ',' << fmt(s.mean_F_weight) << '\n';
  }
}

inline const char* trial_csv_header() {
  return "point,trial,seed,n,kappa,p,m,in_Q,in_T,F_weight,F_certified,alpha,acyclic,wall_time_ms,error";
}

inline void write_trials_csv(std::ostream& os, const SweepResult& r) {
  os << trial_csv_header() << '\n';
  for (const auto& t : r.trials) {
    os << t.point << ',' << t.trial << ',' << t.seed << ',' << t.n << ',' << t.kappa << ',' << fmt(t.p) << ','
       << t.m << ',' << t.in_Q << ',' << t.in_T << ',' << t.F_weight << ',' << t.F_certified << ','
       << fmt(t.alpha) << ',' << t.acyclic << ',' << fmt(t.wall_time_ms) << ',' << '"' << t.error << '"' << '\n';
  }
}

inline nlohmann::json to_json(const Interval& i) { return {{"estimate", i.estimate}, {"lo", i.lo}, {"hi", i.hi}}; }

inline nlohmann::json to_json(const SweepResult& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& s : r.points) {
    pts.push_back({{"point", s.index},
                   {"multiple", s.multiple},
                   {"p", s.p},
                   {"trials", s.trials},
                   {"q", s.q},
                   {"t", s.t},
                   {"q_not_t", s.q_not_t},
                   {"uncertified", s.uncertified},
                   {"acyclic", s.acyclic},
                   {"errors", s.errors},
                   {"pr_q", to_json(s.pr_q())},
                   {"pr_t", to_json(s.pr_t())},
                   {"pr_q_not_t", to_json(s.pr_q_not_t())},
                   {"mean_F_weight", s.mean_F_weight}});
  }
  return {{"n", r.spec.n},
          {"kappa", r.spec.kappa},
          {"trials", r.spec.trials},
          {"seed", r.spec.master_seed},
          {"pstar", r.pstar},
          {"points", pts}};
}

/// Reads (multiple, trials, q) back from a sweep CSV.
inline std::vector<BinomialPoint> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("sweep CSV: empty input");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
  }
  auto col = [&](const std::string& name) {
    const auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end()) throw std::runtime_error("sweep CSV: missing column '" + name + "'");
    return static_cast<std::size_t>(it - cols.begin());
  };
  const auto cm = col("multiple"), ct = col("trials"), cq = col("q"), ce = col("errors");
  std::vector<BinomialPoint> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) f.push_back(c);
    if (f.size() != cols.size()) throw std::runtime_error("sweep CSV: ragged row");
    out.push_back({std::stod(f[cm]), std::stoul(f[cq]), std::stoul(f[ct]) - std::stoul(f[ce])});
  }
  return out;
}

}  // namespace io

}  // namespace cyclespan
