#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "arbgas/lattice.hpp"

namespace arbgas {

// Kahan-Neumaier compensated accumulator; the oracle sums are carried in
// this form so that 1e-12 tolerances downstream are justified.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// One enumerated forest: edge subset mask plus its component structure.
struct ForestInfo {
  uint32_t mask = 0;
  int edge_count = 0;
  const std::vector<int>* comp = nullptr;   // vertex -> component id (0..k-1)
  const std::vector<int>* csize = nullptr;  // component id -> size
  double weight = 0.0;                      // prod beta_e * prod_T (1 + sum_{x in T} h_x)
};

// Calls f(info) once for each acyclic edge subset. Guarded at 24 edges.
void for_each_forest(const Graph& g, const std::function<void(const ForestInfo&)>& f);

int64_t count_forests(const Graph& g);

// Exact observables of the measure weight(F) ~ prod beta_e * prod_T (1+sum_T h).
// Ghost-connection quantities use the root expansion: a tree T is rooted at x
// with probability h_x / (1 + sum_{y in T} h_y) and unrooted otherwise.
struct ExactSummary {
  int n = 0;
  double beta = 0.0, h = 0.0;
  double Z = 0.0;
  std::vector<std::vector<double>> conn;  // conn[x][y] = P[x <-> y]
  std::vector<double> ghost;              // P[x <-> ghost]
  double theta = 0.0;                     // P[0 <-> ghost]
  double mean_tree0 = 0.0;                // E|T_0|
  std::vector<double> tau0;               // tau[x]  = P[0<->x, 0 not<->ghost]
  std::vector<double> sigma0;             // sigma[x] per the finite-volume combination
  std::vector<double> both_rooted0;       // P[0 not<->x, 0<->ghost, x<->ghost]
  std::vector<double> edge_ghost;         // P[x ghost-edge present]
  std::vector<double> edge_ghost_pair0;   // P[0g, xg]
};

ExactSummary exact_summary(const Graph& g, double beta, double h);

double partition_function(const Graph& g, double beta, double h);
double partition_function(const Graph& g, double beta, const std::vector<double>& h);
double connection_probability(const Graph& g, double beta, double h, int x, int y);
double ghost_probability(const Graph& g, double beta, double h, int x);

// Rooted-forest generating determinant oracle:
//   sum_F beta^{|E(F)|} prod_T (h |V(T)|) = det(beta L + h Id),
// evaluated by enumeration on the left in tests; this computes the right side
// via LU of the small dense matrix.
double rooted_forest_determinant(const Graph& g, double beta, double h);

// Exact one-proposal Metropolis kernel over all forests of g. Rows are
// stored sparsely; stationarity of the enumeration weights is the detailed
// balance oracle for the sampler. Guarded at 14 edges.
struct TransitionMatrix {
  std::vector<uint32_t> states;                          // forest masks, sorted
  std::unordered_map<uint32_t, int> index;               // mask -> row
  std::vector<std::vector<std::pair<int, double>>> rows; // off-diagonal entries
  std::vector<double> diag;
  std::vector<double> pi;  // stationary candidate: normalized weights

  double row_sum(int i) const;
  // ||pi P - pi||_inf
  double stationarity_residual() const;
};

TransitionMatrix sampler_transition_matrix(const Graph& g, double beta, double h);

}  // namespace arbgas
