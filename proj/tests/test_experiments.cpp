#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "cyclespan/experiments.hpp"

using namespace cyclespan;

namespace {

std::string sweep_text(const SweepSpec& spec, const char* workers) {
  setenv("CYCLESPAN_WORKERS", workers, 1);
  std::ostringstream os;
  io::write_sweep_csv(os, run_sweep(spec));
  unsetenv("CYCLESPAN_WORKERS");
  return os.str();
}

}  // namespace

TEST(Wilson, Values) {
  const auto a = wilson(0, 20);
  EXPECT_EQ(a.estimate, 0.0);
  EXPECT_EQ(a.lo, 0.0);
  EXPECT_NEAR(a.hi, 0.161124, 1e-5);
  const auto b = wilson(20, 20);
  EXPECT_EQ(b.hi, 1.0);
  EXPECT_NEAR(b.lo, 1 - 0.161124, 1e-5);
  const auto c = wilson(50, 100);
  EXPECT_NEAR(c.lo, 0.403832, 1e-5);
  EXPECT_NEAR(c.hi, 0.596168, 1e-5);
  const auto e = wilson(0, 0);
  EXPECT_EQ(e.lo, 0.0);
  EXPECT_EQ(e.hi, 1.0);
}

TEST(Workers, ParallelForCoversAndRethrows) {
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; }, 7);
  EXPECT_TRUE(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
  EXPECT_THROW(parallel_for(
                   50, [](std::size_t i) {
                     if (i == 17) throw std::runtime_error("boom");
                   },
                   4),
               std::runtime_error);
  setenv("CYCLESPAN_WORKERS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  setenv("CYCLESPAN_WORKERS", "zero", 1);
  EXPECT_GE(worker_count(), 1u);
  unsetenv("CYCLESPAN_WORKERS");
}

TEST(VerifyKn, CyclesAndLibrary) {
  const auto rep = verify_kn(3, 9, default_h_library());
  ASSERT_FALSE(rep.rows.empty());
  for (const auto& r : rep.rows) EXPECT_TRUE(r.pass) << r.h << " n=" << r.n;
  bool c5_boundary = false, c4_seen = false, k2_seen = false;
  for (const auto& r : rep.rows) {
    if (r.h == "C5" && r.n == 5) c5_boundary = true;
    if (r.h == "C4") {
      c4_seen = true;
      EXPECT_EQ(r.dim, r.n * (r.n - 1) / 2 - r.n);
    }
    if (r.h == "K2" && r.n == 5) {
      k2_seen = true;
      EXPECT_EQ(r.dim, 10u);
    }
  }
  EXPECT_TRUE(c5_boundary);
  EXPECT_TRUE(c4_seen);
  EXPECT_TRUE(k2_seen);
  EXPECT_THROW(verify_kn(3, 13, {}), std::invalid_argument);
}

TEST(Sweep, ZeroMultipleAndConsistency) {
  SweepSpec spec;
  spec.n = 40;
  spec.kappa = 3;
  spec.grid = {0.0, 1.0, 2.0};
  spec.trials = 12;
  spec.master_seed = 4;
  const auto r = run_sweep(spec);
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_EQ(r.points[0].q, 0u);
  EXPECT_EQ(r.points[0].acyclic, 12u);
  for (const auto& t : r.trials) {
    EXPECT_TRUE(t.error.empty());
    if (t.in_T) {
      EXPECT_EQ(t.F_weight, 0u);
    }
    EXPECT_DOUBLE_EQ(t.alpha, alpha_of(t.F_weight, t.n, t.p));
    EXPECT_EQ(t.seed, trial_seed(4, t.point, t.trial));
  }
  for (const auto& s : r.points) {
    std::size_t qt = 0, qnt = 0;
    for (std::size_t i = 0; i < spec.trials; ++i) {
      const auto& t = r.trials[s.index * spec.trials + i];
      qt += t.in_Q && t.in_T;
      qnt += t.in_Q && !t.in_T;
    }
    EXPECT_EQ(qt + qnt, s.q);
    EXPECT_EQ(qnt, s.q_not_t);
  }
  spec.trials = 0;
  EXPECT_THROW(run_sweep(spec), std::invalid_argument);
}

TEST(Sweep, ByteIdenticalAcrossWorkerCounts) {
  SweepSpec spec;
  spec.n = 60;
  spec.kappa = 5;
  spec.grid = {0.8, 1.2, 1.6};
  spec.trials = 10;
  spec.master_seed = 99;
  const auto one = sweep_text(spec, "1");
  EXPECT_EQ(one, sweep_text(spec, "4"));
  EXPECT_EQ(one, sweep_text(spec, "13"));
}

TEST(Sweep, CsvRoundTripAndJson) {
  SweepSpec spec;
  spec.n = 30;
  spec.grid = {0.5, 1.0, 1.5, 2.0};
  spec.trials = 5;
  const auto r = run_sweep(spec);
  std::stringstream ss;
  io::write_sweep_csv(ss, r);
  const auto pts = io::read_sweep_csv(ss);
  ASSERT_EQ(pts.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(pts[i].x, spec.grid[i]);
    EXPECT_EQ(pts[i].successes, r.points[i].q);
  }
  const auto j = io::to_json(r);
  EXPECT_EQ(j["points"].size(), 4u);
  EXPECT_EQ(j["n"], 30);
}

TEST(Fit, SyntheticStep) {
  std::vector<BinomialPoint> d;
  for (double x : {0.6, 0.8, 0.9, 0.95, 1.05, 1.1, 1.2, 1.4}) d.push_back({x, x > 1.0 ? 100u : 0u, 100});
  const auto f = fit_threshold(d);
  EXPECT_NEAR(f.p_half, 1.0, 0.05);
  EXPECT_GT(f.slope, 0.0);
}

TEST(Fit, SyntheticLogistic) {
  std::vector<BinomialPoint> d;
  for (double x = 0.5; x <= 1.7; x += 0.1) {
    const double pr = 1.0 / (1.0 + std::exp(-8.0 * (x - 1.1)));
    d.push_back({x, static_cast<std::size_t>(std::lround(pr * 1000)), 1000});
  }
  const auto f = fit_threshold(d);
  EXPECT_NEAR(f.p_half, 1.1, 0.01);
  EXPECT_NEAR(f.slope, 8.0, 0.5);
}

TEST(Fit, Degenerate) {
  std::vector<BinomialPoint> zeros{{0.5, 0, 10}, {0.7, 0, 10}, {0.9, 0, 10}, {1.1, 0, 10}};
  EXPECT_THROW(fit_threshold(zeros), std::invalid_argument);
  std::vector<BinomialPoint> few{{0.5, 0, 10}, {0.7, 5, 10}, {0.9, 10, 10}};
  EXPECT_THROW(fit_threshold(few), std::invalid_argument);
}

TEST(Coupling, ThetaOneIsIdentity) {
  const auto recs = run_coupling(30, 3, 0.12, {1.0, 0.5}, 12, 3);
  std::size_t nonempty = 0;
  for (const auto& r : recs) {
    EXPECT_TRUE(r.F0_in_Ckperp_of_G0);
    EXPECT_LE(r.F0_weight, r.F_weight);
    if (r.F_weight == 0) {
      EXPECT_EQ(r.F0_weight, 0u);
    }
    if (r.theta == 1.0) {
      EXPECT_EQ(r.F0_weight, r.F_weight);
      nonempty += r.F_weight > 0;
    }
  }
  EXPECT_GT(nonempty, 0u);
  EXPECT_THROW(run_coupling(30, 3, 0.1, {0.0}, 1, 1), std::invalid_argument);
  EXPECT_THROW(run_coupling(30, 4, 0.1, {0.5}, 1, 1), std::invalid_argument);
}

TEST(Coupling, ThinningIsBinomial) {
  // F is a fixed edge set of G; each of its edges survives into G0
  // independently with probability ϑ, so |F0| ~ Bin(|F|, ϑ).
  const auto recs = run_coupling(100, 3, 0.4, {0.5}, 40, 8, CouplingRule::half_cut);
  for (const auto& r : recs) {
    ASSERT_GT(r.F_weight, 500u);
    const double sd = std::sqrt(double(r.F_weight) * 0.25);
    EXPECT_LT(std::abs(double(r.F0_weight) - 0.5 * double(r.F_weight)), 4 * sd);
  }
  const auto sum = summarize_coupling(recs, 200);
  ASSERT_EQ(sum.size(), 1u);
  EXPECT_EQ(sum[0].qualifying, 40u);
  EXPECT_EQ(sum[0].perp_ok, 40u);
}

TEST(Audit, WitnessesSatisfyStructure) {
  const auto rep = audit_main_theorem({40}, 3, {0.8, 1.0, 1.2}, 20, 5);
  ASSERT_EQ(rep.sweeps.size(), 1u);
  EXPECT_LE(rep.max_rate, 1.0);
  EXPECT_TRUE(rep.witnesses_ok());
  EXPECT_THROW(audit_main_theorem({40}, 4, {1.0}, 1, 1), std::invalid_argument);
}

TEST(Audit, CheckWitnessDetectsViolations) {
  // All of C5 violates the degree bound at every vertex.
  const auto c5 = LabeledGraph::cycle(5);
  const auto w = check_witness(c5, all_edges(c5), 3);
  EXPECT_FALSE(w.degree_ok);
  const std::vector<EdgeId> one{0};
  const auto ok = check_witness(c5, subset_of(c5, one), 3);
  EXPECT_TRUE(ok.degree_ok);
  EXPECT_TRUE(ok.xy_ok);
}
