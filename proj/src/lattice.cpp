#include "arbgas/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace arbgas {

Torus::Torus(int d_, int L_, int N_) : d(d_), L(L_), N(N_) {
  if (d < 1) throw std::invalid_argument("torus: d must be >= 1");
  if (L < 2) throw std::invalid_argument("torus: L must be >= 2");
  if (N < 1) throw std::invalid_argument("torus: N must be >= 1");
  side = 1;
  for (int i = 0; i < N; ++i) {
    side *= L;
    if (side > (int64_t(1) << 40)) throw std::invalid_argument("torus: side too large");
  }
  if (side < 3) throw std::invalid_argument("torus: side L^N < 3 is degenerate (multi-edges)");
  volume = 1;
  for (int i = 0; i < d; ++i) {
    volume *= side;
    if (volume > (int64_t(1) << 40)) throw std::invalid_argument("torus: volume too large");
  }
}

std::vector<int64_t> Torus::coords(int64_t v) const {
  std::vector<int64_t> c(d);
  for (int a = d - 1; a >= 0; --a) {
    c[a] = v % side;
    v /= side;
  }
  return c;
}

int64_t Torus::index(const std::vector<int64_t>& c) const {
  int64_t v = 0;
  for (int a = 0; a < d; ++a) {
    int64_t q = ((c[a] % side) + side) % side;
    v = v * side + q;
  }
  return v;
}

int64_t Torus::neighbor(int64_t v, int axis, int step) const {
  // stride of `axis` in row-major order
  int64_t stride = 1;
  for (int a = axis + 1; a < d; ++a) stride *= side;
  int64_t c = (v / stride) % side;
  int64_t cc = c + step;
  if (cc >= side) cc -= side;
  if (cc < 0) cc += side;
  return v + (cc - c) * stride;
}

std::pair<int64_t, int64_t> Torus::edge_endpoints(int64_t e) const {
  int axis = static_cast<int>(e / volume);
  int64_t v = e % volume;
  return {v, neighbor(v, axis, +1)};
}

int64_t Torus::offset_index(int64_t x, int64_t y) const {
  std::vector<int64_t> cx = coords(x), cy = coords(y), c(d);
  for (int a = 0; a < d; ++a) c[a] = (cy[a] - cx[a] + side) % side;
  return index(c);
}

int64_t Torus::linf_distance(int64_t x, int64_t y) const {
  std::vector<int64_t> cx = coords(x), cy = coords(y);
  int64_t m = 0;
  for (int a = 0; a < d; ++a) {
    int64_t delta = std::abs(cx[a] - cy[a]);
    delta = std::min(delta, side - delta);
    m = std::max(m, delta);
  }
  return m;
}

double Torus::euclidean_distance(int64_t x, int64_t y) const {
  std::vector<int64_t> cx = coords(x), cy = coords(y);
  double s = 0;
  for (int a = 0; a < d; ++a) {
    int64_t delta = std::abs(cx[a] - cy[a]);
    delta = std::min(delta, side - delta);
    s += static_cast<double>(delta) * static_cast<double>(delta);
  }
  return std::sqrt(s);
}

void Graph::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) throw std::invalid_argument("graph: edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("graph: loop edge");
    if (!(e.beta >= 0) || !std::isfinite(e.beta)) throw std::invalid_argument("graph: edge weight must be finite and >= 0");
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) throw std::invalid_argument("graph: parallel edge");
  }
  if (!h.empty()) {
    size_t base = has_ghost ? static_cast<size_t>(n) - 1 : static_cast<size_t>(n);
    if (h.size() != base) throw std::invalid_argument("graph: h table size mismatch");
    for (double v : h)
      if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument("graph: vertex weight must be finite and >= 0");
  }
}

std::vector<std::vector<std::pair<int, int>>> Graph::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int i = 0; i < edge_count(); ++i) {
    adj[edges[i].u].push_back({edges[i].v, i});
    adj[edges[i].v].push_back({edges[i].u, i});
  }
  return adj;
}

Graph Graph::with_uniform_beta(double beta) const {
  Graph g = *this;
  for (Edge& e : g.edges) e.beta = beta;
  return g;
}

Graph Graph::single_edge(double beta) { return from_edge_set(2, {{0, 1}}, beta); }

Graph Graph::path(int n, double beta) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1});
  return from_edge_set(n, es, beta);
}

Graph Graph::cycle(int n, double beta) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < n; ++i) es.push_back({i, (i + 1) % n});
  return from_edge_set(n, es, beta);
}

Graph Graph::complete(int n, double beta) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.push_back({i, j});
  return from_edge_set(n, es, beta);
}

Graph Graph::from_edge_set(int n, const std::vector<std::pair<int, int>>& es, double beta) {
  Graph g;
  g.n = n;
  for (auto [u, v] : es) g.edges.push_back({u, v, beta});
  g.validate();
  return g;
}

Graph Graph::periodic_box(int d, int64_t side, double beta) {
  if (d < 1) throw std::invalid_argument("periodic_box: d must be >= 1");
  if (side < 3) throw std::invalid_argument("periodic_box: side < 3 is degenerate");
  int64_t volume = 1;
  for (int a = 0; a < d; ++a) {
    volume *= side;
    if (volume > (int64_t(1) << 24)) throw std::invalid_argument("periodic_box: too many vertices");
  }
  Graph g;
  g.n = static_cast<int>(volume);
  // strides, axis 0 slowest
  std::vector<int64_t> stride(d, 1);
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * side;
  for (int a = 0; a < d; ++a) {
    for (int64_t v = 0; v < volume; ++v) {
      int64_t c = (v / stride[a]) % side;
      int64_t w = v + ((c + 1 == side) ? (1 - side) : 1) * stride[a];
      g.edges.push_back({static_cast<int>(v), static_cast<int>(w), beta});
    }
  }
  g.validate();
  return g;
}

Graph Graph::from_torus(const Torus& t, double beta) { return periodic_box(t.d, t.side, beta); }

Graph Graph::builtin(const std::string& name, double beta) {
  if (name == "single") return single_edge(beta);
  if (name == "p3") return path(3, beta);
  if (name == "c3") return cycle(3, beta);
  if (name == "c4") return cycle(4, beta);
  if (name == "c5") return cycle(5, beta);
  if (name == "k4") return complete(4, beta);
  if (name == "k5") return complete(5, beta);
  throw std::invalid_argument("unknown builtin graph: " + name);
}

Graph Graph::load_edge_list(std::istream& in) {
  Graph g;
  int m = 0;
  if (!(in >> g.n >> m)) throw std::invalid_argument("edge list: bad header, expected 'n m'");
  for (int i = 0; i < m; ++i) {
    Edge e;
    if (!(in >> e.u >> e.v >> e.beta)) throw std::invalid_argument("edge list: bad edge line");
    g.edges.push_back(e);
  }
  std::string tag;
  while (in >> tag) {
    if (tag != "h") throw std::invalid_argument("edge list: unexpected line tag '" + tag + "'");
    int x;
    double val;
    if (!(in >> x >> val)) throw std::invalid_argument("edge list: bad h line");
    if (g.h.empty()) g.h.assign(g.n, 0.0);
    if (x < 0 || x >= g.n) throw std::invalid_argument("edge list: h vertex out of range");
    g.h[x] = val;
  }
  g.validate();
  return g;
}

void Graph::save_edge_list(std::ostream& out) const {
  out << n << " " << edge_count() << "\n";
  std::ostringstream num;
  num.precision(17);
  for (const Edge& e : edges) {
    num.str("");
    num << e.beta;
    out << e.u << " " << e.v << " " << num.str() << "\n";
  }
  for (size_t x = 0; x < h.size(); ++x) {
    if (h[x] != 0.0) {
      num.str("");
      num << h[x];
      out << "h " << x << " " << num.str() << "\n";
    }
  }
}

Graph amend_with_ghost(const Graph& g, double h) {
  return amend_with_ghost(g, std::vector<double>(g.n, h));
}

Graph amend_with_ghost(const Graph& g, const std::vector<double>& h) {
  if (g.has_ghost) throw std::invalid_argument("amend_with_ghost: graph already has a ghost");
  if (static_cast<int>(h.size()) != g.n) throw std::invalid_argument("amend_with_ghost: h size mismatch");
  Graph out = g;
  int ghost = g.n;
  out.n = g.n + 1;
  for (int x = 0; x < g.n; ++x) out.edges.push_back({x, ghost, h[x]});
  out.h.clear();
  out.has_ghost = true;
  out.validate();
  return out;
}

}  // namespace arbgas
