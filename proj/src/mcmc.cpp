#include "arbgas/mcmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace arbgas {

void ChainConfig::validate() const {
  if (!(beta >= 0) || !(h >= 0)) throw std::invalid_argument("chain config: beta, h must be >= 0");
  if (sweeps <= 0 || burnin < 0) throw std::invalid_argument("chain config: bad sweep counts");
  if (measure_stride < 1) throw std::invalid_argument("chain config: bad stride");
  if (batches < 2) throw std::invalid_argument("chain config: need at least 2 batches");
  if (sweeps / measure_stride < batches)
    throw std::invalid_argument("chain config: fewer measurements than batches");
}

bool metropolis_step(ForestState& state, CounterRng& rng, double beta, double h) {
  const Graph& g = state.graph();
  int e = static_cast<int>(rng.next_below(g.edge_count()));
  if (state.edge_present(e)) {
    // removal splitting T -> (T_u, T_v)
    auto [su, sv] = state.split_sizes(e);
    int total = su + sv;
    double ratio;
    if (beta == 0.0) {
      ratio = 2.0;  // always accept: removing the edge is the only way back
    } else {
      ratio = (1.0 + h * su) * (1.0 + h * sv) / (beta * (1.0 + h * total));
    }
    if (ratio >= 1.0 || rng.next_double() < ratio) {
      state.toggle(e);
      return true;
    }
    return false;
  }
  int u = g.edges[e].u, v = g.edges[e].v;
  if (state.same_tree(u, v)) return false;  // cycle proposals are rejected
  int su = state.tree_size(u), sv = state.tree_size(v);
  double ratio = beta * (1.0 + h * (su + sv)) / ((1.0 + h * su) * (1.0 + h * sv));
  if (ratio >= 1.0 || rng.next_double() < ratio) {
    state.toggle(e);
    return true;
  }
  return false;
}

namespace {

// batch-means accumulator for one scalar observable
struct BatchAcc {
  std::vector<double> batch_sums;
  int64_t per_batch = 0;
  int64_t count = 0;

  void init(int batches, int64_t measurements) {
    per_batch = measurements / batches;
    batch_sums.assign(batches, 0.0);
    count = 0;
  }
  void add(double x) {
    int64_t b = std::min<int64_t>(count / per_batch, static_cast<int64_t>(batch_sums.size()) - 1);
    batch_sums[b] += x;
    ++count;
  }
  Estimate estimate() const {
    int64_t nb = static_cast<int64_t>(batch_sums.size());
    double mean = 0.0;
    for (double s : batch_sums) mean += s;
    mean /= static_cast<double>(count);
    double var = 0.0;
    for (double s : batch_sums) {
      double bm = s / static_cast<double>(per_batch);
      var += (bm - mean) * (bm - mean);
    }
    var /= static_cast<double>(nb * (nb - 1));
    return {mean, std::sqrt(var), nb};
  }
  double batch_mean(int b) const { return batch_sums[b] / static_cast<double>(per_batch); }
};

}  // namespace

EstimatorSet run_chain(const ChainConfig& config) {
  config.validate();
  const Graph& g = config.graph;
  if (g.has_ghost) throw std::invalid_argument("run_chain: ghost is handled analytically, pass the base graph");

  ForestState state(g);
  CounterRng rng(config.seed, config.stream);
  int64_t proposals_per_sweep = g.edge_count();

  for (int64_t s = 0; s < config.burnin; ++s)
    for (int64_t p = 0; p < proposals_per_sweep; ++p) metropolis_step(state, rng, config.beta, config.h);

  std::vector<int> targets = config.pair_targets;
  if (config.track_all_pairs) {
    targets.clear();
    for (int x = 0; x < g.n; ++x) targets.push_back(x);
  }

  int64_t n_meas = config.sweeps / config.measure_stride;
  n_meas = (n_meas / config.batches) * config.batches;  // equal batch sizes
  BatchAcc theta, tree0;
  theta.init(config.batches, n_meas);
  tree0.init(config.batches, n_meas);
  std::vector<BatchAcc> conn(targets.size()), tau(targets.size()), sig_b(targets.size());
  BatchAcc sig_a;
  sig_a.init(config.batches, n_meas);
  for (auto& acc : conn) acc.init(config.batches, n_meas);
  for (auto& acc : tau) acc.init(config.batches, n_meas);
  for (auto& acc : sig_b) acc.init(config.batches, n_meas);
  std::vector<int64_t> hist(g.n + 1, 0);

  int64_t accepted = 0, total_props = 0;
  int64_t measured = 0;
  for (int64_t s = 0; s < config.sweeps; ++s) {
    for (int64_t p = 0; p < proposals_per_sweep; ++p) {
      accepted += metropolis_step(state, rng, config.beta, config.h) ? 1 : 0;
      ++total_props;
    }
    if ((s + 1) % config.measure_stride != 0 || measured >= n_meas) continue;
    ++measured;
    int t0 = state.tree_size(0);
    double unroot0 = 1.0 / (1.0 + config.h * t0);
    theta.add(config.h * t0 * unroot0);
    tree0.add(static_cast<double>(t0));
    hist[t0] += 1;
    sig_a.add(unroot0);
    for (size_t i = 0; i < targets.size(); ++i) {
      int x = targets[i];
      bool connected = state.same_tree(0, x);
      conn[i].add(connected ? 1.0 : 0.0);
      tau[i].add(connected ? unroot0 : 0.0);
      double both = 0.0;
      if (!connected) both = unroot0 / (1.0 + config.h * state.tree_size(x));
      sig_b[i].add(both);
    }
  }

  EstimatorSet out;
  out.seed = config.seed;
  out.measurements = measured;
  out.theta = theta.estimate();
  out.mean_tree0 = tree0.estimate();
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total_props);
  out.tree0_size_histogram = hist;
  Estimate ea = sig_a.estimate();
  for (size_t i = 0; i < targets.size(); ++i) {
    out.conn0.push_back({targets[i], conn[i].estimate()});
    out.tau0.push_back({targets[i], tau[i].estimate()});
    // sigma(x) = A^2 - B with A = P[0 not<->g], B = P[0 not<->x, both unrooted];
    // delta method with batch covariance of (A, B)
    Estimate eb = sig_b[i].estimate();
    double sigma = ea.mean * ea.mean - eb.mean;
    int nb = config.batches;
    double cov = 0.0;
    for (int b = 0; b < nb; ++b)
      cov += (sig_a.batch_mean(b) - ea.mean) * (sig_b[i].batch_mean(b) - eb.mean);
    cov /= static_cast<double>(nb) * (nb - 1);
    double var = 4.0 * ea.mean * ea.mean * ea.stderror * ea.stderror + eb.stderror * eb.stderror -
                 4.0 * ea.mean * cov;
    out.sigma0.push_back({targets[i], Estimate{sigma, std::sqrt(std::max(0.0, var)), nb}});
  }
  return out;
}

std::vector<ThetaScanRow> theta_scan(int d, int64_t side, const std::vector<double>& betas, double h,
                                     int64_t sweeps, uint64_t seed, int threads) {
  if (!(h > 0)) throw std::invalid_argument("theta_scan: needs h > 0");
  std::vector<ThetaScanRow> rows(betas.size());
  auto work = [&](size_t i) {
    ChainConfig cfg;
    cfg.graph = Graph::periodic_box(d, side, betas[i]);
    cfg.beta = betas[i];
    cfg.h = h;
    cfg.seed = seed;
    cfg.stream = i;
    cfg.sweeps = sweeps;
    cfg.burnin = std::max<int64_t>(sweeps / 5, 100);
    EstimatorSet est = run_chain(cfg);
    rows[i] = {betas[i], est.theta.mean, est.theta.stderror};
  };
  if (threads == 0) threads = static_cast<int>(std::min<size_t>(betas.size(), std::thread::hardware_concurrency()));
  threads = std::max(threads, 1);
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= betas.size()) return;
        work(i);
      }
    });
  for (auto& th : pool) th.join();
  return rows;
}

DecayFit decay_fit(int d, int64_t side, double beta, double h, int64_t rmax, int64_t sweeps,
                   uint64_t seed) {
  if (rmax < 2 || rmax > side / 2) throw std::invalid_argument("decay_fit: bad r range");
  Graph g = Graph::periodic_box(d, side, beta);

  // direction-averaged connection indicators at distances 1..rmax
  ChainConfig cfg;
  cfg.graph = g;
  cfg.beta = beta;
  cfg.h = h;
  cfg.seed = seed;
  cfg.sweeps = sweeps;
  cfg.burnin = std::max<int64_t>(sweeps / 5, 100);

  // vertex index of r*e_axis (and -r*e_axis) from the origin, row-major
  std::vector<int64_t> stride(d, 1);
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * side;
  std::vector<std::vector<int>> targets_at_r(rmax + 1);
  for (int64_t r = 1; r <= rmax; ++r)
    for (int a = 0; a < d; ++a) {
      targets_at_r[r].push_back(static_cast<int>(r * stride[a]));
      targets_at_r[r].push_back(static_cast<int>((side - r) * stride[a]));
    }
  for (int64_t r = 1; r <= rmax; ++r)
    for (int x : targets_at_r[r]) cfg.pair_targets.push_back(x);

  EstimatorSet est = run_chain(cfg);
  std::map<int, Estimate> by_target;
  for (auto& [x, e] : est.conn0) by_target[x] = e;

  DecayFit fit;
  std::vector<std::pair<double, double>> points;  // (r, log p)
  for (int64_t r = 1; r <= rmax; ++r) {
    double mean = 0.0, var = 0.0;
    int n = 0;
    for (int x : targets_at_r[r]) {
      const Estimate& e = by_target.at(x);
      mean += e.mean;
      var += e.stderror * e.stderror;
      ++n;
    }
    mean /= n;
    double err = std::sqrt(var) / n;  // correlated directions: conservative enough here
    fit.probabilities.push_back({r, Estimate{mean, err, est.theta.batches}});
    if (mean > 0.0 && mean > 3.0 * err) points.push_back({static_cast<double>(r), std::log(mean)});
  }
  fit.points_used = static_cast<int>(points.size());
  if (points.size() < 3) return fit;  // sufficient_signal stays false
  fit.sufficient_signal = true;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  double n = static_cast<double>(points.size());
  for (auto [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0, ybar = sy / n;
  for (auto [x, y] : points) {
    double pred = fit.intercept + fit.slope * x;
    ss_res += (y - pred) * (y - pred);
    ss_tot += (y - ybar) * (y - ybar);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;
  return fit;
}

}  // namespace arbgas
