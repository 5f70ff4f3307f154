// Command-line front end for the experiments.
//
// Exit codes: 0 pass, 1 an acceptance assertion failed, 2 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cyclespan/cyclespan.hpp"

using namespace cyclespan;
using nlohmann::json;

namespace {

struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    std::stringstream ts(tok);
    T v{};
    if (!(ts >> v) || !ts.eof()) throw UsageError("cannot parse list element '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty list '" + s + "'");
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw UsageError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<HPattern> library_from(const std::string& spec) {
  if (spec == "default") return default_h_library();
  if (spec == "none") return {};
  std::vector<HPattern> lib;
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ';');) {
    if (!tok.empty()) lib.push_back(h_from_name(tok));
  }
  return lib;
}

json couple_json(const CoupleRecord& r) {
  return {{"seed", r.seed},          {"trial", r.trial},       {"n", r.n},
          {"kappa", r.kappa},        {"p", r.p},               {"theta", r.theta},
          {"F_weight", r.F_weight},  {"F0_weight", r.F0_weight}, {"F_certified", r.F_certified},
          {"alpha", r.alpha},        {"alpha0", r.alpha0},     {"ratio", std::isnan(r.ratio) ? json() : json(r.ratio)},
          {"F0_in_Ckperp_of_G0", r.F0_in_Ckperp_of_G0},        {"low_degree_ok", r.low_degree_ok}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle-space spanning experiments on G(n,p)"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "csv";
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // verify-kn
  auto* vk = app.add_subcommand("verify-kn", "exact dim C_H(K_n) against the classification");
  std::size_t vk_nmin = 3, vk_nmax = 9;
  std::string vk_lib = "default", vk_kappas = "3,5,7", vk_out;
  vk->add_option("--nmin", vk_nmin);
  vk->add_option("--nmax", vk_nmax);
  vk->add_option("--h-lib", vk_lib, "'default', 'none', or ';'-separated names such as K3;C4;bowtie");
  vk->add_option("--kappas", vk_kappas, "cycle lengths checked against C(K_n)");
  vk->add_option("--out", vk_out);

  // sweep
  auto* sw = app.add_subcommand("sweep", "Monte Carlo sweep over multiples of p*");
  SweepSpec sw_spec;
  std::string sw_grid, sw_out, sw_trials_out, sw_mode = "exact";
  sw->add_option("--n", sw_spec.n)->required();
  sw->add_option("--kappa", sw_spec.kappa)->required();
  sw->add_option("--grid", sw_grid, "comma-separated multiples of p*");
  sw->add_option("--trials", sw_spec.trials)->required();
  sw->add_option("--seed", sw_spec.master_seed);
  sw->add_option("--mode", sw_mode)->check(CLI::IsMember({"exact", "heuristic"}));
  sw->add_option("--out", sw_out);
  sw->add_option("--trials-out", sw_trials_out, "per-trial CSV (includes wall time)");

  // couple
  auto* cp = app.add_subcommand("couple", "coupling G(n,q) inside G(n,p) and thinning F");
  std::size_t cp_n = 0, cp_kappa = 3, cp_trials = 1, cp_min_weight = 0;
  double cp_p = -1.0, cp_pmult = -1.0;
  std::string cp_theta = "0.5", cp_out, cp_rule = "canonical";
  std::uint64_t cp_seed = 1;
  cp->add_option("--n", cp_n)->required();
  cp->add_option("--kappa", cp_kappa);
  auto* cp_p_opt = cp->add_option("--p", cp_p, "edge probability");
  cp->add_option("--p-mult", cp_pmult, "edge probability as a multiple of p*")->excludes(cp_p_opt);
  cp->add_option("--theta", cp_theta, "comma-separated ratios q/p");
  cp->add_option("--trials", cp_trials);
  cp->add_option("--seed", cp_seed);
  cp->add_option("--rule", cp_rule)->check(CLI::IsMember({"canonical", "half-cut"}));
  cp->add_option("--min-weight", cp_min_weight, "only |F| at least this count toward the ratio band");
  cp->add_option("--out", cp_out);

  // audit
  auto* au = app.add_subcommand("audit", "rate of Q and not T over a grid");
  std::string au_nlist, au_grid, au_out;
  std::size_t au_kappa = 3, au_trials = 1;
  std::uint64_t au_seed = 1;
  double au_max_rate = 0.05;
  au->add_option("--n-list", au_nlist)->required();
  au->add_option("--kappa", au_kappa);
  au->add_option("--grid", au_grid);
  au->add_option("--trials", au_trials);
  au->add_option("--seed", au_seed);
  au->add_option("--max-rate", au_max_rate, "exit 1 if the largest observed rate exceeds this");
  au->add_option("--out", au_out);

  // paths
  auto* pa = app.add_subcommand("paths", "tau and sigma for one vertex pair");
  std::string pa_file;
  Vertex pa_x = 0, pa_y = 1;
  std::size_t pa_l = 2;
  pa->add_option("--graph-file", pa_file)->required();
  pa->add_option("--x", pa_x)->required();
  pa->add_option("--y", pa_y)->required();
  pa->add_option("--l", pa_l)->required();

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "extreme adjacency eigenvalues");
  std::string sp_file;
  sp->add_option("--graph-file", sp_file)->required();

  // fit
  auto* ft = app.add_subcommand("fit", "logistic fit of Pr(Q) from a sweep CSV");
  std::string ft_in;
  ft->add_option("--in", ft_in)->required();

  // gen
  auto* gn = app.add_subcommand("gen", "write a G(n,p) sample as an edge list");
  std::size_t gn_n = 0;
  double gn_p = 0.0;
  std::uint64_t gn_seed = 1;
  std::string gn_out;
  gn->add_option("--n", gn_n)->required();
  gn->add_option("--p", gn_p)->required();
  gn->add_option("--seed", gn_seed);
  gn->add_option("--out", gn_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const bool as_json = format == "json";

  try {
    if (*vk) {
      const auto rep = verify_kn(vk_nmin, vk_nmax, library_from(vk_lib), parse_list<std::size_t>(vk_kappas));
      Output out(vk_out);
      if (as_json) {
        json rows = json::array();
        for (const auto& r : rep.rows) {
          rows.push_back({{"h", r.h}, {"n", r.n}, {"class", r.cls}, {"dim", r.dim}, {"expected", r.expected},
                          {"pass", r.pass}});
        }
        out.stream() << json{{"rows", rows}, {"pass", rep.all_pass()}}.dump(2) << '\n';
      } else {
        out.stream() << "h,n,class,dim,expected,pass\n";
        for (const auto& r : rep.rows) {
          out.stream() << r.h << ',' << r.n << ',' << r.cls << ',' << r.dim << ',' << r.expected << ','
                       << (r.pass ? "PASS" : "FAIL") << '\n';
        }
      }
      if (!rep.all_pass()) throw AssertionFailure("verify-kn: dimension mismatch");
    } else if (*sw) {
      if (!sw_grid.empty()) sw_spec.grid = parse_list<double>(sw_grid);
      sw_spec.mode = sw_mode == "exact" ? SweepMode::exact : SweepMode::heuristic;
      const auto res = run_sweep(sw_spec);
      Output out(sw_out);
      if (as_json) {
        out.stream() << io::to_json(res).dump(2) << '\n';
      } else {
        io::write_sweep_csv(out.stream(), res);
      }
      if (!sw_trials_out.empty()) {
        Output tout(sw_trials_out);
        io::write_trials_csv(tout.stream(), res);
      }
    } else if (*cp) {
      double p = cp_p;
      if (cp_pmult >= 0.0) p = cp_pmult * pstar(cp_kappa, cp_n);
      if (p < 0.0) throw UsageError("couple: give --p or --p-mult");
      const auto recs = run_coupling(cp_n, cp_kappa, p, parse_list<double>(cp_theta), cp_trials, cp_seed,
                                     cp_rule == "canonical" ? CouplingRule::canonical : CouplingRule::half_cut);
      const auto sums = summarize_coupling(recs, cp_min_weight);
      Output out(cp_out);
      if (as_json) {
        json rs = json::array(), ss = json::array();
        for (const auto& r : recs) rs.push_back(couple_json(r));
        for (const auto& s : sums) {
          ss.push_back({{"theta", s.theta}, {"trials", s.trials}, {"nonempty", s.nonempty},
                        {"uncertified", s.uncertified}, {"qualifying", s.qualifying}, {"in_band", s.in_band},
                        {"perp_ok", s.perp_ok}, {"low_degree_ok", s.low_degree_ok}});
        }
        out.stream() << json{{"p", p}, {"summary", ss}, {"records", rs}}.dump(2) << '\n';
      } else {
        out.stream() << "seed,trial,n,kappa,p,theta,F_weight,F0_weight,F_certified,alpha,alpha0,ratio,"
                        "F0_in_Ckperp_of_G0,low_degree_ok,max_degree_dev\n";
        for (const auto& r : recs) {
          out.stream() << r.seed << ',' << r.trial << ',' << r.n << ',' << r.kappa << ',' << io::fmt(r.p) << ','
                       << io::fmt(r.theta) << ',' << r.F_weight << ',' << r.F0_weight << ',' << r.F_certified
                       << ',' << io::fmt(r.alpha) << ',' << io::fmt(r.alpha0) << ',' << io::fmt(r.ratio) << ','
                       << r.F0_in_Ckperp_of_G0 << ',' << r.low_degree_ok << ',' << io::fmt(r.max_degree_dev)
                       << '\n';
        }
      }
    } else if (*au) {
      const auto grid = au_grid.empty() ? default_grid() : parse_list<double>(au_grid);
      const auto rep = audit_main_theorem(parse_list<std::size_t>(au_nlist), au_kappa, grid, au_trials, au_seed);
      Output out(au_out);
      if (as_json) {
        json sweeps = json::array(), wit = json::array();
        for (const auto& s : rep.sweeps) sweeps.push_back(io::to_json(s));
        for (const auto& w : rep.witnesses) {
          wit.push_back({{"n", w.n}, {"point", w.point}, {"trial", w.trial}, {"seed", w.seed},
                         {"F_weight", w.F_weight}, {"F_certified", w.F_certified}, {"degree_ok", w.degree_ok},
                         {"xy_ok", w.xy_ok}, {"sigma_certified", w.sigma_certified}});
        }
        out.stream() << json{{"kappa", rep.kappa},
                             {"max_rate", io::to_json(rep.max_rate_ci)},
                             {"max_n", rep.max_n},
                             {"max_multiple", rep.max_multiple},
                             {"sweeps", sweeps},
                             {"witnesses", wit}}
                            .dump(2)
                     << '\n';
      } else {
        for (std::size_t i = 0; i < rep.sweeps.size(); ++i) io::write_sweep_csv(out.stream(), rep.sweeps[i], i == 0);
      }
      std::cerr << "max Pr(Q and not T) = " << rep.max_rate << " [" << rep.max_rate_ci.lo << ", "
                << rep.max_rate_ci.hi << "] at n=" << rep.max_n << ", multiple " << rep.max_multiple << "; "
                << rep.witnesses.size() << " witnesses\n";
      if (rep.max_rate > au_max_rate) throw AssertionFailure("audit: rate above --max-rate");
      if (!rep.witnesses_ok()) throw AssertionFailure("audit: a witness F violates the degree or path bound");
    } else if (*pa) {
      const auto g = load_graph(pa_file);
      const auto st = sigma(g, pa_x, pa_y, pa_l);
      if (as_json) {
        std::cout << json{{"x", pa_x}, {"y", pa_y}, {"l", pa_l}, {"tau", st.tau}, {"sigma", st.sigma},
                          {"sigma_certified", st.sigma_certified}, {"truncated", st.truncated},
                          {"packing", st.packing}}
                         .dump(2)
                  << '\n';
      } else {
        std::cout << "x,y,l,tau,sigma,sigma_certified,truncated\n"
                  << pa_x << ',' << pa_y << ',' << pa_l << ',' << st.tau << ',' << st.sigma << ','
                  << st.sigma_certified << ',' << st.truncated << '\n';
      }
    } else if (*sp) {
      const auto g = load_graph(sp_file);
      const auto r = spectrum(g);
      if (as_json) {
        std::cout << json{{"lambda1", r.lambda1},         {"lambda2", r.lambda2},
                          {"lambda_n", r.lambda_n},       {"residual1", r.residual1},
                          {"residual2", r.residual2},     {"residual_n", r.residual_n},
                          {"power_iterations", r.power_iterations}, {"lanczos_steps", r.lanczos_steps},
                          {"converged", r.converged},     {"eigvec_ratio", r.eigvec_ratio}}
                         .dump(2)
                  << '\n';
      } else {
        std::cout << "lambda1,lambda2,lambda_n,residual1,residual2,residual_n,converged,eigvec_ratio\n"
                  << io::fmt(r.lambda1) << ',' << io::fmt(r.lambda2) << ',' << io::fmt(r.lambda_n) << ','
                  << io::fmt(r.residual1) << ',' << io::fmt(r.residual2) << ',' << io::fmt(r.residual_n) << ','
                  << r.converged << ',' << io::fmt(r.eigvec_ratio) << '\n';
      }
    } else if (*ft) {
      std::ifstream in(ft_in);
      if (!in) throw UsageError("cannot open '" + ft_in + "'");
      const auto fit = fit_threshold(io::read_sweep_csv(in));
      if (as_json) {
        std::cout << json{{"p_half", fit.p_half}, {"slope", fit.slope}, {"intercept", fit.intercept}}.dump(2)
                  << '\n';
      } else {
        std::cout << "p_half,slope,intercept\n"
                  << io::fmt(fit.p_half) << ',' << io::fmt(fit.slope) << ',' << io::fmt(fit.intercept) << '\n';
      }
    } else if (*gn) {
      const auto g = gen_gnp(gn_n, gn_p, gn_seed);
      Output out(gn_out);
      write_graph(out.stream(), g);
    }
  } catch (const AssertionFailure& e) {
    std::cerr << "FAIL: " << e.what() << '\n';
    return 1;
  } catch (const std::logic_error& e) {
    // invalid_argument and domain_error derive from logic_error but are usage problems.
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e) ||
        dynamic_cast<const std::out_of_range*>(&e)) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    std::cerr << "FAIL: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
