#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arbgas/exact.hpp"
#include "arbgas/freefield.hpp"
#include "arbgas/frd.hpp"
#include "arbgas/grassmann.hpp"
#include "arbgas/mcmc.hpp"
#include "arbgas/rgflow.hpp"
#include "cli_io.hpp"
#include "json.hpp"

using namespace arbgas;
using arbgas_cli::CsvWriter;
using arbgas_cli::num;
using arbgas_cli::write_atomic;
using arbgas_cli::write_manifest;
using nlohmann::json;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

Graph load_graph(const std::string& spec, double beta) {
  if (spec.rfind("builtin:", 0) == 0) return Graph::builtin(spec.substr(8), beta);
  std::ifstream f(spec);
  if (!f) throw std::runtime_error("cannot open graph file: " + spec);
  Graph g = Graph::load_edge_list(f);
  if (beta > 0) g = g.with_uniform_beta(beta);
  return g;
}

void emit_error(const std::string& command, const std::string& what) {
  json e;
  e["error"] = {{"command", command}, {"message", what}};
  std::cerr << e.dump() << "\n";
}

std::vector<int64_t> parse_coords(const std::string& s) {
  std::vector<int64_t> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoll(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

// ---------------------------------------------------------------- exact-check
struct ExactCheckParams {
  std::string graph = "builtin:c3";
  double beta = 1.0, h = 0.0;
  std::string out = "exact_check.csv";
};

int run_exact_check(const ExactCheckParams& p) {
  Timer timer;
  Graph g = load_graph(p.graph, p.beta);
  ExactSummary s = exact_summary(g, p.beta, p.h);
  CsvWriter csv;
  csv.row({"observable", "argument", "value"});
  csv.row({"Z", "", num(s.Z)});
  csv.row({"theta", "", num(s.theta)});
  csv.row({"mean_tree0", "", num(s.mean_tree0)});
  for (int x = 0; x < s.n; ++x) csv.row({"conn", std::to_string(x), num(s.conn[0][x])});
  for (int x = 0; x < s.n; ++x) csv.row({"ghost", std::to_string(x), num(s.ghost[x])});
  for (int x = 0; x < s.n; ++x) csv.row({"tau", std::to_string(x), num(s.tau0[x])});
  for (int x = 0; x < s.n; ++x) csv.row({"sigma", std::to_string(x), num(s.sigma0[x])});
  write_atomic(p.out, csv.str());
  json cfg{{"graph", p.graph}, {"beta", p.beta}, {"h", p.h}, {"out", p.out}};
  write_manifest(p.out + ".manifest.json", "exact-check", cfg, 0, timer.seconds(), {p.out});
  return 0;
}

// ----------------------------------------------------------------- ward-check
struct WardCheckParams {
  std::string graph = "builtin:c3";
  double beta = 1.0, h = 0.0, tol = 1e-10;
  std::string out = "ward_check.csv";
};

int run_ward_check(const WardCheckParams& p) {
  Timer timer;
  Graph g = load_graph(p.graph, p.beta);
  DictionaryReport rep = dictionary_check(g, p.beta, p.h);
  CsvWriter csv;
  csv.row({"identity", "max_abs_error"});
  csv.row({"normalisation", num(rep.err_normalisation)});
  csv.row({"z_ghost", num(rep.err_z)});
  csv.row({"xieta_tau", num(rep.err_xieta)});
  csv.row({"u0ux", num(rep.err_u0ux)});
  csv.row({"ward", num(rep.err_ward)});
  csv.row({"ghost_edge", num(rep.err_ghost_edge)});
  csv.row({"four_point_h0", num(rep.err_four_point)});
  csv.row({"max", num(rep.max_abs())});
  write_atomic(p.out, csv.str());
  json cfg{{"graph", p.graph}, {"beta", p.beta}, {"h", p.h}, {"tol", p.tol}, {"out", p.out}};
  write_manifest(p.out + ".manifest.json", "ward-check", cfg, 0, timer.seconds(), {p.out});
  if (rep.max_abs() > p.tol) {
    emit_error("ward-check", "max discrepancy " + num(rep.max_abs()) + " exceeds tol " + num(p.tol));
    return 1;
  }
  return 0;
}

// --------------------------------------------------------------------- sample
struct SampleParams {
  std::string graph;
  std::vector<int64_t> torus;  // d L N
  double beta = 1.0, h = 0.0;
  uint64_t seed = 1;
  int64_t sweeps = 100000, burnin = 0;
  std::vector<int> pairs;
  bool all_pairs = false;
  std::string out = "sample.csv";
};

int run_sample(const SampleParams& p) {
  Timer timer;
  ChainConfig cfg;
  if (!p.graph.empty()) {
    cfg.graph = load_graph(p.graph, p.beta);
  } else if (p.torus.size() == 3) {
    Torus t(static_cast<int>(p.torus[0]), static_cast<int>(p.torus[1]), static_cast<int>(p.torus[2]));
    cfg.graph = Graph::from_torus(t, p.beta);
  } else {
    throw std::runtime_error("sample: provide --graph or --torus d L N");
  }
  cfg.beta = p.beta;
  cfg.h = p.h;
  cfg.seed = p.seed;
  cfg.sweeps = p.sweeps;
  cfg.burnin = p.burnin > 0 ? p.burnin : std::max<int64_t>(p.sweeps / 10, 100);
  cfg.pair_targets = p.pairs;
  cfg.track_all_pairs = p.all_pairs;
  EstimatorSet est = run_chain(cfg);

  CsvWriter csv;
  csv.row({"observable", "argument", "estimate", "stderr", "batches", "seed"});
  auto emit = [&](const std::string& name, const std::string& arg, const Estimate& e) {
    csv.row({name, arg, num(e.mean), num(e.stderror), std::to_string(e.batches), std::to_string(p.seed)});
  };
  emit("theta", "", est.theta);
  emit("mean_tree0", "", est.mean_tree0);
  for (auto& [x, e] : est.conn0) emit("conn", std::to_string(x), e);
  for (auto& [x, e] : est.tau0) emit("tau", std::to_string(x), e);
  for (auto& [x, e] : est.sigma0) emit("sigma", std::to_string(x), e);
  write_atomic(p.out, csv.str());
  json cfg_json{{"graph", p.graph}, {"torus", p.torus}, {"beta", p.beta},   {"h", p.h},
                {"seed", p.seed},   {"sweeps", p.sweeps}, {"burnin", p.burnin}, {"out", p.out}};
  write_manifest(p.out + ".manifest.json", "sample", cfg_json, p.seed, timer.seconds(), {p.out});
  return 0;
}

// ------------------------------------------------------------------------ frd
struct FrdParams {
  int d = 2, L = 2, N = 3;
  double m2 = 0.25;
  std::string backend = "polynomial";
  std::string out = "frd.csv";
  std::string report = "frd_report.json";
};

int run_frd(const FrdParams& p) {
  Timer timer;
  Torus t(p.d, p.L, p.N);
  FrdBackend be = p.backend == "bump" ? FrdBackend::SpectralBump : FrdBackend::Polynomial;
  if (p.backend != "bump" && p.backend != "polynomial")
    throw std::runtime_error("frd: backend must be 'polynomial' or 'bump'");
  CovarianceDecomposition dec = decompose(t, p.m2, be);
  ContractReport rep = verify_contract(dec);

  CsvWriter csv;
  std::vector<std::string> head{"scale"};
  for (int a = 0; a < p.d; ++a) head.push_back("x" + std::to_string(a));
  head.push_back("value");
  csv.row(head);
  for (int j = 1; j <= t.N; ++j) {
    for (int64_t x = 0; x < t.volume; ++x) {
      double v = dec.kernel(j)[x];
      if (v == 0.0 && x != 0) continue;  // banded kernels are sparse
      std::vector<std::string> row{std::to_string(j)};
      for (int64_t c : t.coords(x)) row.push_back(std::to_string(c));
      row.push_back(num(v));
      csv.row(row);
    }
  }
  write_atomic(p.out, csv.str());

  json rj;
  rj["reconstruction_rel"] = rep.reconstruction_rel;
  rj["range_violation"] = rep.range_violation;
  rj["range_violation_rel"] = rep.range_violation_rel;
  rj["psd_min_symbol"] = rep.psd_min_symbol;
  if (rep.t_N) rj["t_N"] = *rep.t_N;
  rj["t_ratio"] = rep.t_ratio;
  rj["scaling_sup"] = rep.scaling_sup;
  rj["pass"] = {{"reconstruction", rep.reconstruction_pass},
                {"range", rep.range_pass},
                {"psd", rep.psd_pass},
                {"zero_mode", rep.zero_mode_pass}};
  rj["all_pass"] = rep.pass();
  write_atomic(p.report, rj.dump(2) + "\n");

  json cfg{{"d", p.d}, {"L", p.L}, {"N", p.N}, {"m2", p.m2}, {"backend", p.backend},
           {"out", p.out}, {"report", p.report}};
  write_manifest(p.out + ".manifest.json", "frd", cfg, 0, timer.seconds(), {p.out, p.report});
  if (!rep.pass()) {
    emit_error("frd", "contract verification failed, see " + p.report);
    return 1;
  }
  return 0;
}

// ----------------------------------------------------------------------- flow
struct FlowParams {
  int d = 3, L = 2, N = 4;
  double m2 = 0.25;
  double b0 = 0.0, a0 = 0.0, z0 = 0.0, y0 = 0.0;
  int obs_case = 1;
  std::string a = "0,0,0", b = "1,0,0";
  double lambda = 1.0;
  bool zero_mode_step = true;
  std::string out = "flow.csv";
};

int run_flow_cmd(const FlowParams& p) {
  Timer timer;
  Torus t(p.d, p.L, p.N);
  CovarianceDecomposition dec = decompose(t, p.m2, FrdBackend::Polynomial);
  int64_t av = t.index(parse_coords(p.a));
  int64_t bv = t.index(parse_coords(p.b));

  BulkCouplings v0{p.z0, p.y0, p.a0, p.b0, 0.0};
  ObservableCouplings o0;
  o0.tag = p.obs_case == 2 ? ObsCase::Two : ObsCase::One;
  o0.lambda_a = o0.lambda_b = p.lambda;
  FlowTrajectory tr = run_flow(dec, v0, o0, av, bv, p.zero_mode_step && p.m2 > 0);

  CsvWriter csv;
  csv.row({"scale", "z", "y", "a", "b", "u", "lambda_a", "lambda_b", "gamma_a", "gamma_b", "q",
           "eta", "r"});
  for (size_t j = 0; j < tr.obs.size(); ++j) {
    const BulkCouplings& v = tr.bulk[std::min(j, tr.bulk.size() - 1)];
    const ObservableCouplings& o = tr.obs[j];
    csv.row({std::to_string(j), num(v.z), num(v.y), num(v.a), num(v.b), num(v.u), num(o.lambda_a),
             num(o.lambda_b), num(o.gamma_a), num(o.gamma_b), num(o.q), num(o.eta), num(o.r)});
  }
  // final correlators via the zero-mode route, plus the direct green target
  if (p.m2 > 0) {
    FlowTrajectory nn = run_flow(dec, v0, o0, av, bv, false);
    ZeroModeState zm = zero_mode_state(nn.bulk.back(), *dec.t_N, static_cast<double>(t.volume));
    ZeroModeObservables zo = zero_mode_observables(nn.obs.back(), zm, *dec.t_N,
                                                   static_cast<double>(t.volume));
    GreenKernel g = green(t, p.m2);
    double gab = g.at(av, bv);
    if (o0.tag == ObsCase::One) {
      csv.row({"two_point", num(two_point_from_zero_mode(o0, zo, zm)), "", "", "", "", "", "", "",
               "", "", "", ""});
      csv.row({"green_ab", num(gab), "", "", "", "", "", "", "", "", "", "", ""});
    } else {
      csv.row({"one_point", num(one_point_from_zero_mode(o0, zo, zm)), "", "", "", "", "", "", "",
               "", "", "", ""});
      csv.row({"truncated_two_point", num(truncated_two_point_from_zero_mode(o0, zo, zm)), "", "",
               "", "", "", "", "", "", "", "", ""});
      csv.row({"green_ab_sq_neg", num(-gab * gab), "", "", "", "", "", "", "", "", "", "", ""});
    }
  }
  write_atomic(p.out, csv.str());
  json cfg{{"d", p.d},   {"L", p.L},     {"N", p.N},         {"m2", p.m2},
           {"b0", p.b0}, {"a0", p.a0},   {"case", p.obs_case}, {"a", p.a},
           {"b", p.b},   {"lambda", p.lambda}, {"out", p.out}};
  write_manifest(p.out + ".manifest.json", "flow", cfg, 0, timer.seconds(), {p.out});
  return 0;
}

// ---------------------------------------------------------------------- green
struct GreenParams {
  int d = 2, L = 3, N = 2;
  double m2 = 0.25;
  std::string out = "green.csv";
};

int run_green(const GreenParams& p) {
  Timer timer;
  Torus t(p.d, p.L, p.N);
  GreenKernel g = green(t, p.m2);
  CsvWriter csv;
  std::vector<std::string> head;
  for (int a = 0; a < p.d; ++a) head.push_back("x" + std::to_string(a));
  head.push_back("value");
  csv.row(head);
  for (int64_t x = 0; x < t.volume; ++x) {
    std::vector<std::string> row;
    for (int64_t c : t.coords(x)) row.push_back(std::to_string(c));
    row.push_back(num(g.values[x]));
    csv.row(row);
  }
  write_atomic(p.out, csv.str());
  json cfg{{"d", p.d}, {"L", p.L}, {"N", p.N}, {"m2", p.m2}, {"out", p.out}};
  write_manifest(p.out + ".manifest.json", "green", cfg, 0, timer.seconds(), {p.out});
  return 0;
}

// ----------------------------------------------------------------- theta-scan
struct ThetaScanParams {
  int d = 3;
  int64_t side = 12;
  std::vector<double> betas{6, 8, 12, 16};
  double h = 0.02;
  int64_t sweeps = 2000;
  uint64_t seed = 1;
  std::string out = "theta_scan.csv";
};

int run_theta_scan(const ThetaScanParams& p) {
  Timer timer;
  std::vector<ThetaScanRow> rows = theta_scan(p.d, p.side, p.betas, p.h, p.sweeps, p.seed);
  CsvWriter csv;
  csv.row({"beta", "theta", "stderr", "seed"});
  for (const auto& r : rows) csv.row({num(r.beta), num(r.theta_hat), num(r.stderror), std::to_string(p.seed)});
  write_atomic(p.out, csv.str());
  json cfg{{"d", p.d},         {"side", p.side}, {"betas", p.betas}, {"h", p.h},
           {"sweeps", p.sweeps}, {"seed", p.seed}, {"out", p.out}};
  write_manifest(p.out + ".manifest.json", "theta-scan", cfg, p.seed, timer.seconds(), {p.out});
  return 0;
}

// ------------------------------------------------------------------ decay-fit
struct DecayFitParams {
  int d = 2;
  int64_t side = 32;
  double beta = 0.5, h = 0.5;
  int64_t rmax = 5;
  int64_t sweeps = 20000;
  uint64_t seed = 1;
  std::string out = "decay_fit.csv";
};

int run_decay_fit(const DecayFitParams& p) {
  Timer timer;
  DecayFit fit = decay_fit(p.d, p.side, p.beta, p.h, p.rmax, p.sweeps, p.seed);
  CsvWriter csv;
  csv.row({"r", "estimate", "stderr"});
  for (auto& [r, e] : fit.probabilities) csv.row({std::to_string(r), num(e.mean), num(e.stderror)});
  csv.row({"slope", num(fit.slope), ""});
  csv.row({"intercept", num(fit.intercept), ""});
  csv.row({"r2", num(fit.r2), ""});
  csv.row({"points_used", std::to_string(fit.points_used), ""});
  csv.row({"sufficient_signal", fit.sufficient_signal ? "1" : "0", ""});
  write_atomic(p.out, csv.str());
  json cfg{{"d", p.d},     {"side", p.side},   {"beta", p.beta},  {"h", p.h},
           {"rmax", p.rmax}, {"sweeps", p.sweeps}, {"seed", p.seed}, {"out", p.out}};
  write_manifest(p.out + ".manifest.json", "decay-fit", cfg, p.seed, timer.seconds(), {p.out});
  if (!fit.sufficient_signal) {
    emit_error("decay-fit", "insufficient signal: fewer than 3 points above the noise floor");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arboreal gas toolkit: exact oracles, fermionic identities, finite-range "
               "decompositions, coupling flows, and Monte Carlo sampling"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // frees -h/--h for the field strength
  app.set_config("--config", "", "flat config file; [section] matches the subcommand name");
  app.allow_config_extras(false);

  ExactCheckParams ec;
  auto* c_ec = app.add_subcommand("exact-check", "enumeration oracle summary as CSV");
  c_ec->add_option("--graph", ec.graph, "builtin:<name> or edge-list path");
  c_ec->add_option("--beta", ec.beta);
  c_ec->add_option("--h", ec.h);
  c_ec->add_option("--out", ec.out);

  WardCheckParams wc;
  auto* c_wc = app.add_subcommand("ward-check", "fermionic dictionary and Ward identity report");
  c_wc->add_option("--graph", wc.graph);
  c_wc->add_option("--beta", wc.beta);
  c_wc->add_option("--h", wc.h);
  c_wc->add_option("--tol", wc.tol);
  c_wc->add_option("--out", wc.out);

  SampleParams sp;
  auto* c_sp = app.add_subcommand("sample", "Metropolis chain estimates");
  c_sp->add_option("--graph", sp.graph);
  c_sp->add_option("--torus", sp.torus, "d L N")->expected(3);
  c_sp->add_option("--beta", sp.beta);
  c_sp->add_option("--h", sp.h);
  c_sp->add_option("--seed", sp.seed);
  c_sp->add_option("--sweeps", sp.sweeps);
  c_sp->add_option("--burnin", sp.burnin);
  c_sp->add_option("--pairs", sp.pairs, "target vertices for P[0<->x]");
  c_sp->add_flag("--all-pairs", sp.all_pairs);
  c_sp->add_option("--out", sp.out);

  FrdParams fp;
  auto* c_fp = app.add_subcommand("frd", "finite-range decomposition kernels and contract report");
  c_fp->add_option("--d", fp.d);
  c_fp->add_option("--L", fp.L);
  c_fp->add_option("--N", fp.N);
  c_fp->add_option("--m2", fp.m2);
  c_fp->add_option("--backend", fp.backend, "polynomial | bump");
  c_fp->add_option("--out", fp.out);
  c_fp->add_option("--report", fp.report);

  FlowParams lp;
  auto* c_lp = app.add_subcommand("flow", "coupling-constant trajectory per scale");
  c_lp->add_option("--d", lp.d);
  c_lp->add_option("--L", lp.L);
  c_lp->add_option("--N", lp.N);
  c_lp->add_option("--m2", lp.m2);
  c_lp->add_option("--b0", lp.b0);
  c_lp->add_option("--a0", lp.a0);
  c_lp->add_option("--z0", lp.z0);
  c_lp->add_option("--y0", lp.y0);
  c_lp->add_option("--case", lp.obs_case)->check(CLI::Range(1, 2));
  c_lp->add_option("--a", lp.a, "first marked vertex, comma coords");
  c_lp->add_option("--b", lp.b, "second marked vertex, comma coords");
  c_lp->add_option("--lambda", lp.lambda);
  c_lp->add_flag("--zero-mode-step,!--no-zero-mode-step", lp.zero_mode_step);
  c_lp->add_option("--out", lp.out);

  GreenParams gp;
  auto* c_gp = app.add_subcommand("green", "lattice Green kernel as CSV");
  c_gp->add_option("--d", gp.d);
  c_gp->add_option("--L", gp.L);
  c_gp->add_option("--N", gp.N);
  c_gp->add_option("--m2", gp.m2);
  c_gp->add_option("--out", gp.out);

  ThetaScanParams tp;
  auto* c_tp = app.add_subcommand("theta-scan", "theta estimates over a beta grid");
  c_tp->add_option("--d", tp.d);
  c_tp->add_option("--side", tp.side);
  c_tp->add_option("--betas", tp.betas);
  c_tp->add_option("--h", tp.h);
  c_tp->add_option("--sweeps", tp.sweeps);
  c_tp->add_option("--seed", tp.seed);
  c_tp->add_option("--out", tp.out);

  DecayFitParams dp;
  auto* c_dp = app.add_subcommand("decay-fit", "exponential decay fit of P[0<->x]");
  c_dp->add_option("--d", dp.d);
  c_dp->add_option("--side", dp.side);
  c_dp->add_option("--beta", dp.beta);
  c_dp->add_option("--h", dp.h);
  c_dp->add_option("--rmax", dp.rmax);
  c_dp->add_option("--sweeps", dp.sweeps);
  c_dp->add_option("--seed", dp.seed);
  c_dp->add_option("--out", dp.out);

  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->set_help_flag("--help", "print help");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    json err;
    err["error"] = {{"command", "parse"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    if (c_ec->parsed()) return run_exact_check(ec);
    if (c_wc->parsed()) return run_ward_check(wc);
    if (c_sp->parsed()) return run_sample(sp);
    if (c_fp->parsed()) return run_frd(fp);
    if (c_lp->parsed()) return run_flow_cmd(lp);
    if (c_gp->parsed()) return run_green(gp);
    if (c_tp->parsed()) return run_theta_scan(tp);
    if (c_dp->parsed()) return run_decay_fit(dp);
  } catch (const std::exception& e) {
    emit_error(app.get_subcommands().empty() ? "?" : app.get_subcommands()[0]->get_name(), e.what());
    return 1;
  }
  return 0;
}
