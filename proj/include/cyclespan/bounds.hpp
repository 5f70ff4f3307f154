#pragma once

// Tail bounds (Chernoff, Janson), the threshold p*_κ, m₂(H), path-family
// moments, and extreme adjacency eigenvalues.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "graph.hpp"
#include "rng.hpp"
#include "subspace.hpp"

namespace cyclespan {

/// φ(x) = (1+x)log(1+x) - x, with φ(-1) = 1.
inline double phi(double x) {
  if (std::isnan(x) || x < -1.0) throw std::domain_error("phi: x must be at least -1");
  if (x == -1.0) return 1.0;
  return (1.0 + x) * std::log1p(x) - x;
}

struct TailBound {
  double log_prob = 0.0;
  double prob() const { return std::exp(log_prob); }
};

struct TailPair {
  TailBound phi_form;
  TailBound quadratic;
};

namespace detail {

inline void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::domain_error("mu must be positive and finite");
}

inline void check_t(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("t must be nonnegative and finite");
}

}  // namespace detail

/// Pr(X ≥ μ + t) ≤ exp[-μφ(t/μ)] ≤ exp[-t²/(2(μ + t/3))] for X ~ Bin(n,p).
inline TailPair chernoff_upper(double mu, double t) {
  detail::check_mu(mu);
  detail::check_t(t);
  return {{-mu * phi(t / mu)}, {-t * t / (2.0 * (mu + t / 3.0))}};
}

/// Pr(X ≤ μ - t) ≤ exp[-μφ(-t/μ)] ≤ exp[-t²/(2μ)], 0 ≤ t ≤ μ.
inline TailPair chernoff_lower(double mu, double t) {
  detail::check_mu(mu);
  detail::check_t(t);
  if (t > mu) throw std::domain_error("chernoff_lower: t must not exceed mu");
  return {{-mu * phi(-t / mu)}, {-t * t / (2.0 * mu)}};
}

/// Pr(X > Kμ) < exp[-Kμ log(K/e)]; only informative for K > e.
inline TailBound chernoff_large(double mu, double k) {
  detail::check_mu(mu);
  if (!(k > 0.0) || !std::isfinite(k)) throw std::domain_error("chernoff_large: K must be positive");
  return {-k * mu * (std::log(k) - 1.0)};
}

struct TailParams {
  double mu = 0.0;
  double delta_bar = 0.0;
  double t = 0.0;
};

/// Janson: Pr(X ≤ μ - t) ≤ exp[-φ(-t/μ)μ²/Δ̄] ≤ exp[-t²/(2Δ̄)].
inline TailPair janson_lower(const TailParams& tp) {
  detail::check_mu(tp.mu);
  detail::check_t(tp.t);
  if (tp.t > tp.mu) throw std::domain_error("janson_lower: t must not exceed mu");
  if (!(tp.delta_bar >= tp.mu)) throw std::domain_error("janson_lower: delta_bar must be at least mu");
  return {{-phi(-tp.t / tp.mu) * tp.mu * tp.mu / tp.delta_bar}, {-tp.t * tp.t / (2.0 * tp.delta_bar)}};
}

/// Pr(some l independent events occur) ≤ μ^l/l! ≤ (eμ/l)^l.
inline TailPair erdos_tetali(double mu, std::size_t l) {
  detail::check_mu(mu);
  if (l == 0) throw std::domain_error("erdos_tetali: l must be positive");
  const double ld = double(l);
  return {{ld * std::log(mu) - std::lgamma(ld + 1.0)}, {ld * (1.0 + std::log(mu) - std::log(ld))}};
}

/// p*_κ = [(κ/(κ-1)) n^{-(κ-2)} log n]^{1/(κ-1)}.
inline double pstar(std::size_t kappa, std::size_t n) {
  if (kappa < 3) throw std::domain_error("pstar: kappa must be at least 3");
  if (n < 2) throw std::domain_error("pstar: n must be at least 2");
  const double k = double(kappa);
  const double logv = std::log(k / (k - 1.0)) - (k - 2.0) * std::log(double(n)) + std::log(std::log(double(n)));
  return std::exp(logv / (k - 1.0));
}

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return double(num) / double(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// m₂(H) = max{(e_K - 1)/(v_K - 2) : K ⊆ H, v_K ≥ 3}. For a fixed vertex set
/// the induced subgraph is best, so vertex subsets are enumerated.
inline Rational m2(const HPattern& h) {
  const auto& hg = h.graph();
  const std::size_t v = hg.n();
  if (v < 3) throw std::domain_error("m2: H needs at least 3 vertices");
  if (v > 10) throw std::domain_error("m2: only patterns with at most 10 vertices are supported");
  Rational best{-1, 1};
  for (std::uint32_t mask = 0; mask < (1u << v); ++mask) {
    const int vk = std::popcount(mask);
    if (vk < 3) continue;
    std::int64_t ek = 0;
    for (const auto& e : hg.edges()) ek += ((mask >> e.u) & 1u) && ((mask >> e.v) & 1u);
    const Rational r{ek - 1, vk - 2};
    if (r.num * best.den > best.num * r.den) best = r;
  }
  const auto g = std::gcd(best.num, best.den);
  if (g > 1) best = {best.num / g, best.den / g};
  return best;
}

struct PathMoments {
  double mu = 0.0;
  double delta_bar = 0.0;
  double lambda = 0.0;
};

/// Moments of the (κ-1)-edge paths joining a fixed pair in G_{n,p}:
/// μ = (n-2)_{κ-2} p^{κ-1} exactly, Δ̄ ≈ μ(1 + 2n^{κ-3}p^{κ-2}) to first order
/// (exact for κ = 3, where distinct paths share no edge), Λ = n^{κ-2}p^{κ-1}.
inline PathMoments path_moments(std::size_t n, double p, std::size_t kappa) {
  if (kappa < 3) throw std::domain_error("path_moments: kappa must be at least 3");
  check_probability(p);
  double falling = 1.0;
  for (std::size_t i = 0; i < kappa - 2; ++i) falling *= n >= 2 + i ? double(n - 2 - i) : 0.0;
  const double k = double(kappa);
  PathMoments m;
  m.mu = falling * std::pow(p, k - 1.0);
  m.delta_bar = kappa == 3 ? m.mu : m.mu * (1.0 + 2.0 * std::pow(double(n), k - 3.0) * std::pow(p, k - 2.0));
  m.lambda = std::pow(double(n), k - 2.0) * std::pow(p, k - 1.0);
  return m;
}

// ---------------------------------------------------------------------------
// Spectrum

struct SpectrumReport {
  double lambda1 = 0.0, lambda2 = 0.0, lambda_n = 0.0;
  double residual1 = 0.0, residual2 = 0.0, residual_n = 0.0;  // ‖Av - λv‖ for unit v
  std::size_t power_iterations = 0;
  std::size_t lanczos_steps = 0;
  bool converged = false;
  double eigvec_ratio = 0.0;  // max/min entry of the leading eigenvector (in absolute value)
};

struct SpectrumOptions {
  double tol = 1e-8;
  std::size_t max_iter = 10'000;
  std::uint64_t seed = 0x5bec;
};

namespace detail {

inline void apply_adjacency(const LabeledGraph& g, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  for (Vertex v = 0; v < g.n(); ++v) {
    double acc = 0.0;
    for (const auto& inc : g.neighbors(v)) acc += x[inc.to];
    y[v] = acc;
  }
}

}  // namespace detail

/// λ₁ by power iteration on A + ΔI from the all-ones vector; λ₂ and λ_n by
/// Lanczos with full reorthogonalization in the complement of the leading
/// eigenvector. Residual tolerances are relative to max(1, λ₁).
inline SpectrumReport spectrum(const LabeledGraph& g, const SpectrumOptions& opt = {}) {
  if (g.m() == 0) throw std::invalid_argument("spectrum: graph has no edges");
  const std::size_t n = g.n();
  std::size_t delta = 0;
  for (Vertex v = 0; v < n; ++v) delta = std::max(delta, g.degree(v));

  SpectrumReport rep;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(Eigen::Index(n)).normalized();
  Eigen::VectorXd av(static_cast<Eigen::Index>(n));
  double lam = 0.0;
  auto residual = [&](const Eigen::VectorXd& x, double l) {
    Eigen::VectorXd ax(x.size());
    detail::apply_adjacency(g, x, ax);
    return (ax - l * x).norm();
  };
  bool ok1 = false;
  for (rep.power_iterations = 1; rep.power_iterations <= opt.max_iter; ++rep.power_iterations) {
    detail::apply_adjacency(g, v, av);
    lam = v.dot(av);
    const double res = (av - lam * v).norm();
    if (res <= opt.tol * std::max(1.0, std::abs(lam))) {
      ok1 = true;
      break;
    }
    av += double(delta) * v;
    v = av.normalized();
  }
  rep.power_iterations = std::min(rep.power_iterations, opt.max_iter);
  rep.lambda1 = lam;
  rep.residual1 = residual(v, lam);
  {
    const double hi = v.cwiseAbs().maxCoeff(), lo = v.cwiseAbs().minCoeff();
    rep.eigvec_ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }
  const double scale = std::max(1.0, std::abs(rep.lambda1));

  if (n < 2) {
    rep.converged = ok1;
    return rep;
  }

  // Lanczos on the complement of v.
  const std::size_t kmax = std::min(n - 1, opt.max_iter);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Eigen::VectorXd> q;
  std::vector<double> alpha, beta;  // beta[j] couples q[j] and q[j+1]
  auto orthogonalize = [&](Eigen::VectorXd& w) {
    for (int pass = 0; pass < 2; ++pass) {
      w -= v.dot(w) * v;
      for (const auto& qi : q) w -= qi.dot(w) * qi;
    }
  };
  auto fresh = [&]() -> Eigen::VectorXd {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXd w(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = unif(rng);
      orthogonalize(w);
      if (w.norm() > 1e-10) return w.normalized();
    }
    return {};
  };
  Eigen::VectorXd cur = fresh();
  bool ok2 = false;
  Eigen::VectorXd y2, yn;
  double l2 = 0.0, ln = 0.0;
  while (cur.size() != 0 && q.size() < kmax) {
    q.push_back(cur);
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    detail::apply_adjacency(g, cur, w);
    alpha.push_back(cur.dot(w));
    orthogonalize(w);
    const double b = w.norm();
    const bool breakdown = b <= 1e-10 * scale;
    const std::size_t k = q.size();
    if (k % 10 == 0 || breakdown || k == kmax) {
      Eigen::VectorXd diag(static_cast<Eigen::Index>(k)), sub(Eigen::Index(k > 1 ? k - 1 : 1));
      for (std::size_t i = 0; i < k; ++i) diag[Eigen::Index(i)] = alpha[i];
      for (std::size_t i = 0; i + 1 < k; ++i) sub[Eigen::Index(i)] = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub.head(Eigen::Index(k - 1)), Eigen::ComputeEigenvectors);
      const auto& s = es.eigenvectors();
      const Eigen::Index last = Eigen::Index(k - 1);
      const double r_hi = std::abs(b * s(last, last)), r_lo = std::abs(b * s(last, 0));
      if ((r_hi <= opt.tol * scale && r_lo <= opt.tol * scale) || k == kmax || k == n - 1) {
        y2 = Eigen::VectorXd::Zero(Eigen::Index(n));
        yn = Eigen::VectorXd::Zero(Eigen::Index(n));
        for (std::size_t i = 0; i < k; ++i) {
          y2 += s(Eigen::Index(i), last) * q[i];
          yn += s(Eigen::Index(i), 0) * q[i];
        }
        l2 = es.eigenvalues()[last];
        ln = es.eigenvalues()[0];
        ok2 = true;
        break;
      }
    }
    if (breakdown) {
      beta.push_back(0.0);
      cur = fresh();
    } else {
      beta.push_back(b);
      cur = w / b;
    }
  }
  if (!ok2 && !q.empty()) {
    // Krylov space exhausted: the Ritz values are exact.
    const std::size_t k = q.size();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(Eigen::Index(k), Eigen::Index(k));
    for (std::size_t i = 0; i < k; ++i) t(Eigen::Index(i), Eigen::Index(i)) = alpha[i];
    for (std::size_t i = 0; i + 1 < k; ++i) {
      t(Eigen::Index(i), Eigen::Index(i + 1)) = t(Eigen::Index(i + 1), Eigen::Index(i)) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    y2 = Eigen::VectorXd::Zero(Eigen::Index(n));
    yn = Eigen::VectorXd::Zero(Eigen::Index(n));
    for (std::size_t i = 0; i < k; ++i) {
      y2 += es.eigenvectors()(Eigen::Index(i), Eigen::Index(k - 1)) * q[i];
      yn += es.eigenvectors()(Eigen::Index(i), 0) * q[i];
    }
    l2 = es.eigenvalues()[Eigen::Index(k - 1)];
    ln = es.eigenvalues()[0];
  }
  rep.lanczos_steps = q.size();
  rep.lambda2 = l2;
  rep.lambda_n = std::min(ln, rep.lambda1);
  rep.residual2 = y2.size() ? residual(y2.normalized(), l2) : 0.0;
  rep.residual_n = yn.size() ? residual(yn.normalized(), ln) : 0.0;
  const double lim = 10.0 * opt.tol * scale;
  rep.converged = ok1 && rep.residual1 <= lim && rep.residual2 <= lim && rep.residual_n <= lim;
  return rep;
}

}  // namespace cyclespan
