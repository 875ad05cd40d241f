#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "arbgas/exact.hpp"
#include "arbgas/mcmc.hpp"

using namespace arbgas;

TEST_CASE("metropolis acceptance ratios") {
  // h = 0: addition ratio is beta (tree factors cancel); single-edge graph
  // at beta = 1 is a symmetric 2-state flip
  Graph g = Graph::single_edge(1.0);
  ForestState st(g);
  CounterRng rng(4);
  int64_t occupied = 0, steps = 200000;
  for (int64_t i = 0; i < steps; ++i) {
    metropolis_step(st, rng, 1.0, 0.0);
    occupied += st.edge_count();
  }
  double frac = static_cast<double>(occupied) / steps;
  // 3 sigma of a (correlated, but nearly iid here) binomial
  CHECK(std::abs(frac - 0.5) < 3.0 * 0.5 / std::sqrt(static_cast<double>(steps) / 4));

  // beta = 0: additions never accepted
  ForestState st0(g);
  for (int64_t i = 0; i < 1000; ++i) CHECK(!metropolis_step(st0, rng, 0.0, 0.5));
  CHECK(st0.edge_count() == 0);
}

TEST_CASE("chain matches enumeration on C3") {
  ChainConfig cfg;
  cfg.graph = Graph::cycle(3, 1.0);
  cfg.beta = 1.0;
  cfg.h = 0.0;
  cfg.seed = 2024;
  cfg.sweeps = 200000;
  cfg.burnin = 2000;
  cfg.track_all_pairs = true;
  EstimatorSet est = run_chain(cfg);
  ExactSummary ex = exact_summary(cfg.graph, cfg.beta, cfg.h);
  for (auto& [x, e] : est.conn0) {
    CHECK(std::abs(e.mean - ex.conn[0][x]) <= 3.0 * std::max(e.stderror, 1e-12) + 1e-12);
  }
  // theta estimator is identically zero at h = 0
  CHECK(est.theta.mean == 0.0);
  CHECK(est.theta.stderror == 0.0);
}

TEST_CASE("chain matches enumeration on the 3x3 torus with field") {
  ChainConfig cfg;
  cfg.graph = Graph::periodic_box(2, 3, 0.7);
  cfg.beta = 0.7;
  cfg.h = 0.2;
  cfg.seed = 7;
  cfg.sweeps = 100000;
  cfg.burnin = 2000;
  cfg.track_all_pairs = true;
  EstimatorSet est = run_chain(cfg);
  ExactSummary ex = exact_summary(cfg.graph, cfg.beta, cfg.h);
  for (auto& [x, e] : est.conn0)
    CHECK(std::abs(e.mean - ex.conn[0][x]) <= 3.5 * e.stderror + 1e-12);
  CHECK(std::abs(est.theta.mean - ex.theta) <= 3.5 * est.theta.stderror);
  for (auto& [x, e] : est.tau0)
    CHECK(std::abs(e.mean - ex.tau0[x]) <= 3.5 * e.stderror + 1e-12);
  for (auto& [x, e] : est.sigma0)
    CHECK(std::abs(e.mean - ex.sigma0[x]) <= 4.0 * std::max(e.stderror, 1e-4));
}

TEST_CASE("mean tree size equals the summed indicators sample-wise") {
  ChainConfig cfg;
  cfg.graph = Graph::periodic_box(2, 3, 1.1);
  cfg.beta = 1.1;
  cfg.h = 0.3;
  cfg.seed = 5;
  cfg.sweeps = 20000;
  cfg.burnin = 500;
  cfg.track_all_pairs = true;
  EstimatorSet est = run_chain(cfg);
  double sum = 0.0;
  for (auto& [x, e] : est.conn0) sum += e.mean;
  CHECK(est.mean_tree0.mean == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("seed determinism and stream independence") {
  ChainConfig cfg;
  cfg.graph = Graph::periodic_box(2, 4, 0.9);
  cfg.beta = 0.9;
  cfg.h = 0.1;
  cfg.seed = 31337;
  cfg.sweeps = 5000;
  cfg.burnin = 100;
  cfg.pair_targets = {1, 5};
  EstimatorSet a = run_chain(cfg);
  EstimatorSet b = run_chain(cfg);
  CHECK(a.theta.mean == b.theta.mean);
  CHECK(a.theta.stderror == b.theta.stderror);
  CHECK(a.conn0[0].second.mean == b.conn0[0].second.mean);
  CHECK(a.mean_tree0.mean == b.mean_tree0.mean);

  cfg.stream = 1;  // a different stream must give a different path
  EstimatorSet c = run_chain(cfg);
  CHECK(c.theta.mean != a.theta.mean);
}

TEST_CASE("error bars shrink like one over sqrt sweeps") {
  ChainConfig cfg;
  cfg.graph = Graph::periodic_box(2, 3, 1.0);
  cfg.beta = 1.0;
  cfg.h = 0.25;
  cfg.seed = 11;
  cfg.burnin = 1000;
  cfg.sweeps = 8000;
  EstimatorSet small = run_chain(cfg);
  cfg.sweeps = 128000;
  EstimatorSet big = run_chain(cfg);
  double shrink = small.theta.stderror / big.theta.stderror;
  CHECK(shrink > 2.0);  // expected 4, allow wide MC slack
  CHECK(shrink < 8.0);
}

TEST_CASE("ergodicity witness: every forest reachable by additions") {
  Graph g = Graph::cycle(4, 1.0);
  for_each_forest(g, [&](const ForestInfo& fi) {
    ForestState st(g);
    for (int e = 0; e < g.edge_count(); ++e)
      if ((fi.mask >> e) & 1) CHECK(st.toggle(e).kind == ToggleKind::Added);
    CHECK(st.check_consistency());
  });
}

TEST_CASE("decay fit finds exponential decay at h > 0") {
  DecayFit fit = decay_fit(1, 64, 1.0, 1.0, 5, 30000, 99);
  CHECK(fit.sufficient_signal);
  CHECK(fit.slope < 0.0);
  CHECK(fit.r2 > 0.9);
}

TEST_CASE("subcritical h=0 connection probabilities decay monotonically") {
  // d=2 below the percolation-coupling threshold p_c/(1-p_c) = 1
  DecayFit fit = decay_fit(2, 16, 0.4, 0.0, 4, 30000, 123);
  REQUIRE(static_cast<int>(fit.probabilities.size()) >= 4);
  for (size_t i = 1; i < fit.probabilities.size(); ++i)
    CHECK(fit.probabilities[i].second.mean <
          fit.probabilities[i - 1].second.mean + 3.0 * fit.probabilities[i].second.stderror);
}

TEST_CASE("theta scan input validation") {
  CHECK_THROWS_AS(theta_scan(2, 8, {1.0}, 0.0, 100, 1), std::invalid_argument);
  ChainConfig bad;
  bad.graph = Graph::cycle(3, 1.0);
  bad.sweeps = 10;
  bad.batches = 32;
  CHECK_THROWS_AS(run_chain(bad), std::invalid_argument);
}
