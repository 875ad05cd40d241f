#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arbgas/forest.hpp"
#include "arbgas/lattice.hpp"
#include "arbgas/rng.hpp"

namespace arbgas {

// Single-edge Metropolis chain for the arboreal gas. Ghost connections are
// never part of the state: estimators reweight with the conditional
// unrooting probability 1/(1 + h|T|).
struct ChainConfig {
  Graph graph;
  double beta = 1.0;
  double h = 0.0;
  uint64_t seed = 1;
  uint64_t stream = 0;        // chain index for split streams
  int64_t sweeps = 10000;     // measurement sweeps after burn-in
  int64_t burnin = 1000;      // sweeps discarded
  int measure_stride = 1;     // measure every this many sweeps
  int batches = 32;           // batch-means error bars
  std::vector<int> pair_targets;  // P[0 <-> x] for these x
  bool track_all_pairs = false;   // measure every x (small graphs)

  void validate() const;
};

struct Estimate {
  double mean = 0.0;
  double stderror = 0.0;
  int64_t batches = 0;
};

struct EstimatorSet {
  Estimate theta;       // h|T_0| / (1 + h|T_0|)
  Estimate mean_tree0;  // |T_0|
  double acceptance_rate = 0.0;
  std::vector<std::pair<int, Estimate>> conn0;   // P[0 <-> x]
  std::vector<std::pair<int, Estimate>> tau0;    // 1_{0<->x} / (1 + h|T_0|)
  std::vector<std::pair<int, Estimate>> sigma0;  // Ahat^2 - Bhat with delta-method errors
  std::vector<int64_t> tree0_size_histogram;     // |T_0| occupation counts
  uint64_t seed = 0;
  int64_t measurements = 0;
};

// One proposal: pick a uniform edge, toggle with the Metropolis acceptance
// for the weight ratio of Eq-of-measure; returns whether the move changed
// the state.
bool metropolis_step(ForestState& state, CounterRng& rng, double beta, double h);

EstimatorSet run_chain(const ChainConfig& config);

struct ThetaScanRow {
  double beta = 0.0;
  double theta_hat = 0.0;
  double stderror = 0.0;
};

// Chains run in parallel (one stream per beta) and are merged in input order.
std::vector<ThetaScanRow> theta_scan(int d, int64_t side, const std::vector<double>& betas, double h,
                                     int64_t sweeps, uint64_t seed, int threads = 0);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points_used = 0;
  bool sufficient_signal = false;
  std::vector<std::pair<int64_t, Estimate>> probabilities;  // P[0 <-> r e_axis], direction-averaged
};

// Least-squares fit of log P[0 <-> x] against |x| along the axes, r = 1..rmax.
// Points at the noise floor (below 3 sigma or nonpositive) are dropped;
// sufficient_signal is false if fewer than 3 points survive.
DecayFit decay_fit(int d, int64_t side, double beta, double h, int64_t rmax, int64_t sweeps,
                   uint64_t seed);

}  // namespace arbgas
