#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace arbgas {

// Discrete torus Z^d / (L^N Z^d). Vertices are indexed in row-major order
// over coordinates (axis 0 slowest). Edge e = axis*volume + v joins v to its
// +1 neighbor along that axis, so edges are enumerated axis-by-axis and then
// lexicographically in the base vertex.
struct Torus {
  int d = 0;
  int L = 0;
  int N = 0;
  int64_t side = 0;    // L^N
  int64_t volume = 0;  // side^d

  Torus(int d_, int L_, int N_);

  int64_t edge_count() const { return static_cast<int64_t>(d) * volume; }

  std::vector<int64_t> coords(int64_t v) const;
  int64_t index(const std::vector<int64_t>& c) const;
  int64_t neighbor(int64_t v, int axis, int step) const;  // step = +1 or -1
  std::pair<int64_t, int64_t> edge_endpoints(int64_t e) const;

  // Offset index of y-x (row-major), used for translation-invariant kernels.
  int64_t offset_index(int64_t x, int64_t y) const;

  int64_t linf_distance(int64_t x, int64_t y) const;
  double euclidean_distance(int64_t x, int64_t y) const;
};

// Finite weighted graph: simple, loop-free, with per-edge coupling beta and
// optional per-vertex ghost weights h. When has_ghost is set, the last vertex
// is the ghost and the h table refers to the base vertices only.
struct Graph {
  struct Edge {
    int u = 0;
    int v = 0;
    double beta = 0.0;
  };

  int n = 0;
  std::vector<Edge> edges;
  std::vector<double> h;  // empty means h = 0 everywhere
  bool has_ghost = false;

  int edge_count() const { return static_cast<int>(edges.size()); }
  double vertex_weight(int x) const { return h.empty() ? 0.0 : h[x]; }
  void validate() const;  // throws on loops, parallel edges, bad weights

  // Adjacency as (neighbor, edge index) lists.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;

  Graph with_uniform_beta(double beta) const;

  // Built-in families.
  static Graph single_edge(double beta);
  static Graph path(int n, double beta);
  static Graph cycle(int n, double beta);
  static Graph complete(int n, double beta);
  static Graph from_edge_set(int n, const std::vector<std::pair<int, int>>& es, double beta);
  // d-dimensional periodic box of general side >= 3 (side = L^N not required).
  static Graph periodic_box(int d, int64_t side, double beta);
  static Graph from_torus(const Torus& t, double beta);
  static Graph builtin(const std::string& name, double beta);

  // Text format: header "n m", one "u v beta" line per edge, then optional
  // "h x value" lines.
  static Graph load_edge_list(std::istream& in);
  void save_edge_list(std::ostream& out) const;
};

// Append the ghost vertex g, joined to every base vertex x with weight h_x.
Graph amend_with_ghost(const Graph& g, double h);
Graph amend_with_ghost(const Graph& g, const std::vector<double>& h);

}  // namespace arbgas
