#include "arbgas/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arbgas {

namespace {

struct UnionFind {
  std::vector<int> parent, rank_;
  explicit UnionFind(int n) : parent(n), rank_(n, 0) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }
};

}  // namespace

void for_each_forest(const Graph& g, const std::function<void(const ForestInfo&)>& f) {
  int m = g.edge_count();
  if (m > 24) throw std::invalid_argument("for_each_forest: more than 24 edges");
  int n = g.n;
  std::vector<int> comp(n), csize;
  std::vector<double> hsum;
  for (uint32_t mask = 0; mask < (uint32_t(1) << m); ++mask) {
    UnionFind uf(n);
    bool acyclic = true;
    int k = 0;
    double beta_prod = 1.0;
    for (int e = 0; e < m && acyclic; ++e) {
      if ((mask >> e) & 1) {
        if (!uf.unite(g.edges[e].u, g.edges[e].v))
          acyclic = false;
        else {
          ++k;
          beta_prod *= g.edges[e].beta;
        }
      }
    }
    if (!acyclic) continue;
    // component relabel 0..k-1
    csize.assign(n, 0);
    hsum.assign(n, 0.0);
    std::vector<int> label(n, -1);
    int nc = 0;
    for (int v = 0; v < n; ++v) {
      int r = uf.find(v);
      if (label[r] < 0) label[r] = nc++;
      comp[v] = label[r];
      csize[comp[v]] += 1;
      hsum[comp[v]] += g.vertex_weight(v);
    }
    csize.resize(nc);
    double w = beta_prod;
    for (int c = 0; c < nc; ++c) w *= 1.0 + hsum[c];
    ForestInfo info;
    info.mask = mask;
    info.edge_count = k;
    info.comp = &comp;
    info.csize = &csize;
    info.weight = w;
    f(info);
  }
}

int64_t count_forests(const Graph& g) {
  int64_t c = 0;
  for_each_forest(g, [&](const ForestInfo&) { ++c; });
  return c;
}

ExactSummary exact_summary(const Graph& g, double beta, double h) {
  Graph gb = g.with_uniform_beta(beta);
  gb.h.assign(g.n, h);
  int n = g.n;
  ExactSummary out;
  out.n = n;
  out.beta = beta;
  out.h = h;

  KahanSum Z;
  std::vector<std::vector<KahanSum>> conn(n, std::vector<KahanSum>(n));
  std::vector<KahanSum> ghost(n), tau0(n), sigB(n), both_rooted(n), eg(n), egp(n);
  KahanSum t0size, sigA;

  for_each_forest(gb, [&](const ForestInfo& fi) {
    const std::vector<int>& comp = *fi.comp;
    const std::vector<int>& cs = *fi.csize;
    double w = fi.weight;
    Z.add(w);
    int c0 = comp[0];
    double unroot0 = 1.0 / (1.0 + h * cs[c0]);
    t0size.add(w * cs[c0]);
    sigA.add(w * unroot0);
    for (int x = 0; x < n; ++x) {
      int cx = comp[x];
      double rootx = h * cs[cx] / (1.0 + h * cs[cx]);
      ghost[x].add(w * rootx);
      eg[x].add(w * h / (1.0 + h * cs[cx]));
      for (int y = x; y < n; ++y)
        if (comp[y] == cx) {
          conn[x][y].add(w);
          if (y != x) conn[y][x].add(w);
        }
      if (cx == c0) tau0[x].add(w * unroot0);
      if (cx != c0) {
        double unrootx = 1.0 / (1.0 + h * cs[cx]);
        sigB[x].add(w * unroot0 * unrootx);
        both_rooted[x].add(w * (1.0 - unroot0) * (1.0 - unrootx));
        egp[x].add(w * h * h * unroot0 * unrootx);
      }
    }
  });

  double z = Z.value();
  out.Z = z;
  out.conn.assign(n, std::vector<double>(n, 0.0));
  out.ghost.resize(n);
  out.tau0.resize(n);
  out.sigma0.resize(n);
  out.both_rooted0.resize(n);
  out.edge_ghost.resize(n);
  out.edge_ghost_pair0.resize(n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) out.conn[x][y] = conn[x][y].value() / z;
    out.ghost[x] = ghost[x].value() / z;
    out.tau0[x] = tau0[x].value() / z;
    // On vertex-transitive graphs the first factor squares; the product form
    // keeps sigma symmetric in (0, x) on general graphs.
    double pA0 = sigA.value() / z;            // P[0 not<->ghost]
    double pAx = 1.0 - ghost[x].value() / z;  // P[x not<->ghost]
    double pB = sigB[x].value() / z;          // P[0 not<->x, both unrooted]
    out.sigma0[x] = pA0 * pAx - pB;
    out.both_rooted0[x] = both_rooted[x].value() / z;
    out.edge_ghost[x] = eg[x].value() / z;
    out.edge_ghost_pair0[x] = egp[x].value() / z;
  }
  out.theta = out.ghost[0];
  out.mean_tree0 = t0size.value() / z;
  return out;
}

double partition_function(const Graph& g, double beta, const std::vector<double>& h) {
  Graph gb = g.with_uniform_beta(beta);
  gb.h = h;
  gb.validate();
  KahanSum Z;
  for_each_forest(gb, [&](const ForestInfo& fi) { Z.add(fi.weight); });
  return Z.value();
}

double partition_function(const Graph& g, double beta, double h) {
  return partition_function(g, beta, std::vector<double>(g.n, h));
}

double connection_probability(const Graph& g, double beta, double h, int x, int y) {
  Graph gb = g.with_uniform_beta(beta);
  gb.h.assign(g.n, h);
  KahanSum Z, num;
  for_each_forest(gb, [&](const ForestInfo& fi) {
    Z.add(fi.weight);
    if ((*fi.comp)[x] == (*fi.comp)[y]) num.add(fi.weight);
  });
  return num.value() / Z.value();
}

double ghost_probability(const Graph& g, double beta, double h, int x) {
  Graph gb = g.with_uniform_beta(beta);
  gb.h.assign(g.n, h);
  KahanSum Z, num;
  for_each_forest(gb, [&](const ForestInfo& fi) {
    Z.add(fi.weight);
    double s = h * (*fi.csize)[(*fi.comp)[x]];
    num.add(fi.weight * s / (1.0 + s));
  });
  return num.value() / Z.value();
}

double rooted_forest_determinant(const Graph& g, double beta, double h) {
  int n = g.n;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges) {
    a[e.u][e.u] += beta;
    a[e.v][e.v] += beta;
    a[e.u][e.v] -= beta;
    a[e.v][e.u] -= beta;
  }
  for (int i = 0; i < n; ++i) a[i][i] += h;
  // LU with partial pivoting
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    double p = a[col][col];
    det *= p;
    if (p == 0.0) return 0.0;
    for (int r = col + 1; r < n; ++r) {
      double f = a[r][col] / p;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

double TransitionMatrix::row_sum(int i) const {
  double s = diag[i];
  for (auto [j, p] : rows[i]) s += p;
  return s;
}

double TransitionMatrix::stationarity_residual() const {
  size_t ns = states.size();
  std::vector<KahanSum> out(ns);
  for (size_t i = 0; i < ns; ++i) {
    out[i].add(pi[i] * diag[i]);
  }
  for (size_t i = 0; i < ns; ++i)
    for (auto [j, p] : rows[i]) out[j].add(pi[i] * p);
  double r = 0.0;
  for (size_t i = 0; i < ns; ++i) r = std::max(r, std::abs(out[i].value() - pi[i]));
  return r;
}

TransitionMatrix sampler_transition_matrix(const Graph& g, double beta, double h) {
  int m = g.edge_count();
  if (m > 14) throw std::invalid_argument("sampler_transition_matrix: more than 14 edges");
  Graph gb = g.with_uniform_beta(beta);
  gb.h.assign(g.n, h);

  TransitionMatrix tm;
  std::vector<double> weights;
  for_each_forest(gb, [&](const ForestInfo& fi) {
    tm.states.push_back(fi.mask);
    weights.push_back(fi.weight);
  });
  size_t ns = tm.states.size();
  for (size_t i = 0; i < ns; ++i) tm.index[tm.states[i]] = static_cast<int>(i);

  KahanSum Z;
  for (double w : weights) Z.add(w);
  tm.pi.resize(ns);
  for (size_t i = 0; i < ns; ++i) tm.pi[i] = weights[i] / Z.value();

  tm.rows.assign(ns, {});
  tm.diag.assign(ns, 0.0);
  double pe = 1.0 / m;
  for (size_t i = 0; i < ns; ++i) {
    uint32_t mask = tm.states[i];
    for (int e = 0; e < m; ++e) {
      uint32_t other = mask ^ (uint32_t(1) << e);
      auto it = tm.index.find(other);
      if (it == tm.index.end()) {
        // toggling closes a cycle: proposal rejected, mass stays
        tm.diag[i] += pe;
        continue;
      }
      int j = it->second;
      double ratio = weights[j] / weights[i];
      double acc = std::min(1.0, ratio);
      tm.rows[i].push_back({j, pe * acc});
      tm.diag[i] += pe * (1.0 - acc);
    }
  }
  return tm;
}

}  // namespace arbgas
