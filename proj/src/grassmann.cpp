#include "arbgas/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "arbgas/exact.hpp"

namespace arbgas {

GrassmannElement GrassmannElement::scalar(double c) { return monomial(0, c); }

GrassmannElement GrassmannElement::generator(int i) { return monomial(uint64_t(1) << i, 1.0); }

GrassmannElement GrassmannElement::monomial(uint64_t mask, double c) {
  GrassmannElement e;
  if (std::abs(c) >= kPruneThreshold) e.terms_.push_back({mask, c});
  return e;
}

double GrassmannElement::coeff(uint64_t mask) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                             [](const Term& t, uint64_t m) { return t.mask < m; });
  if (it != terms_.end() && it->mask == mask) return it->c;
  return 0.0;
}

int GrassmannElement::max_degree() const {
  int deg = 0;
  for (const Term& t : terms_) deg = std::max(deg, std::popcount(t.mask));
  return deg;
}

bool GrassmannElement::is_even() const {
  for (const Term& t : terms_)
    if (std::popcount(t.mask) & 1) return false;
  return true;
}

double GrassmannElement::max_abs_coeff() const {
  double m = 0.0;
  for (const Term& t : terms_) m = std::max(m, std::abs(t.c));
  return m;
}

void GrassmannElement::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.mask < b.mask; });
  size_t out = 0;
  for (size_t i = 0; i < terms_.size();) {
    uint64_t m = terms_[i].mask;
    double c = 0.0;
    while (i < terms_.size() && terms_[i].mask == m) c += terms_[i++].c;
    if (std::abs(c) >= kPruneThreshold) terms_[out++] = {m, c};
  }
  terms_.resize(out);
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  canonicalize();
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
  terms_.reserve(terms_.size() + o.terms_.size());
  for (const Term& t : o.terms_) terms_.push_back({t.mask, -t.c});
  canonicalize();
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(double s) {
  for (Term& t : terms_) t.c *= s;
  canonicalize();
  return *this;
}

int GrassmannElement::product_sign(uint64_t s, uint64_t t) {
  if (s & t) return 0;
  // parity of the number of pairs (a in s, b in t) with a > b
  int inv = 0;
  uint64_t tt = t;
  while (tt) {
    int b = std::countr_zero(tt);
    tt &= tt - 1;
    uint64_t above = (b == 63) ? 0 : (s >> (b + 1)) << (b + 1);
    inv += std::popcount(above);
  }
  return (inv & 1) ? -1 : 1;
}

GrassmannElement mul(const GrassmannElement& a, const GrassmannElement& b) {
  std::unordered_map<uint64_t, double> acc;
  acc.reserve(a.terms_.size() + b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      if (ta.mask & tb.mask) continue;
      int sg = GrassmannElement::product_sign(ta.mask, tb.mask);
      acc[ta.mask | tb.mask] += sg * ta.c * tb.c;
    }
  }
  GrassmannElement out;
  out.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) out.terms_.push_back({m, c});
  out.canonicalize();
  return out;
}

GrassmannElement GrassmannElement::deriv(int i) const {
  uint64_t bit = uint64_t(1) << i;
  GrassmannElement out;
  out.terms_.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!(t.mask & bit)) continue;
    int below = std::popcount(t.mask & (bit - 1));
    double sgn = (below & 1) ? -1.0 : 1.0;
    out.terms_.push_back({t.mask ^ bit, sgn * t.c});
  }
  out.canonicalize();
  return out;
}

GrassmannElement GrassmannElement::exp_even() const {
  if (!is_even()) throw std::invalid_argument("exp_even: element must be even");
  double c0 = scalar_part();
  GrassmannElement nil = *this - scalar(c0);
  GrassmannElement result = scalar(1.0);
  GrassmannElement power = scalar(1.0);
  double factorial = 1.0;
  // nilpotent: each power raises the minimum degree by >= 2
  for (int k = 1; k <= 32; ++k) {
    power = mul(power, nil);
    if (power.empty()) break;
    factorial *= k;
    result += power * (1.0 / factorial);
  }
  return result * std::exp(c0);
}

double GrassmannElement::berezin_full(int count) const {
  uint64_t full = (count >= 64) ? ~uint64_t(0) : ((uint64_t(1) << count) - 1);
  return coeff(full);
}

double GrassmannElement::berezin_ordered(const std::vector<int>& order, int count) const {
  if (static_cast<int>(order.size()) != count)
    throw std::invalid_argument("berezin_ordered: order must list every generator");
  GrassmannElement cur = *this;
  for (auto it = order.rbegin(); it != order.rend(); ++it) cur = cur.deriv(*it);
  for (const Term& t : cur.terms_)
    if (t.mask != 0) throw std::logic_error("berezin_ordered: left-over generators");
  return cur.scalar_part();
}

H02Model::H02Model(const Graph& g, double beta, double h) {
  Graph gb = g.with_uniform_beta(beta);
  gb.h.assign(g.n, h);
  build(gb);
}

H02Model::H02Model(const Graph& g) { build(g); }

GrassmannElement H02Model::z(int x) const {
  return GrassmannElement::scalar(1.0) -
         GrassmannElement::monomial((uint64_t(1) << table_.xi(x)) | (uint64_t(1) << table_.eta(x)), 1.0);
}

GrassmannElement H02Model::xi_eta(int x, int y) const {
  return mul(xi(x), eta(y));
}

GrassmannElement H02Model::u_dot(int x, int y) const {
  GrassmannElement r = (-1.0) * xi_eta(x, y);
  r -= xi_eta(y, x);
  r -= mul(z(x), z(y));
  return r;
}

void H02Model::build(const Graph& g) {
  if (g.has_ghost) throw std::invalid_argument("H02Model: ghost must stay analytic, pass the base graph");
  if (g.n > 10) throw std::invalid_argument("H02Model: more than 10 vertices");
  table_.n_vertices = g.n;
  table_.n_extra = 0;

  // density = prod_x (1 + xi_x eta_x) * prod_{xy} exp(beta_xy (u_x.u_y + 1))
  //           * prod_x exp(h_x xi_x eta_x)
  GrassmannElement density = GrassmannElement::scalar(1.0);
  for (int x = 0; x < g.n; ++x) {
    uint64_t m = (uint64_t(1) << table_.xi(x)) | (uint64_t(1) << table_.eta(x));
    GrassmannElement inv_z = GrassmannElement::scalar(1.0) + GrassmannElement::monomial(m, 1.0);
    double hx = g.vertex_weight(x);
    // exp(h xi eta) = 1 + h xi eta, merged with 1/z into one local factor
    GrassmannElement local = mul(inv_z, GrassmannElement::scalar(1.0) + GrassmannElement::monomial(m, hx));
    density = mul(density, local);
  }
  for (const auto& e : g.edges) {
    GrassmannElement arg = (u_dot(e.u, e.v) + GrassmannElement::scalar(1.0)) * e.beta;
    density = mul(density, arg.exp_even());
  }
  density_ = density;
  z_ = density_.berezin_full(table_.count());
  if (!(z_ > 0)) throw std::logic_error("H02Model: normalisation is not positive");
}

double H02Model::expect(const GrassmannElement& obs) const {
  return mul(density_, obs).berezin_full(table_.count()) / z_;
}

GrassmannElement gaussian_convolution(const std::vector<std::vector<double>>& C,
                                      const GrassmannElement& f, const GeneratorTable& table) {
  int n = table.n_vertices;
  if (static_cast<int>(C.size()) != n) throw std::invalid_argument("gaussian_convolution: C dimension mismatch");
  for (const auto& row : C)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("gaussian_convolution: C dimension mismatch");

  auto apply_lc = [&](const GrassmannElement& g) {
    GrassmannElement out;
    for (int x = 0; x < n; ++x) {
      GrassmannElement dbar = g.deriv(table.psibar(x));
      if (dbar.empty()) continue;
      for (int y = 0; y < n; ++y) {
        if (C[x][y] == 0.0) continue;
        out += C[x][y] * dbar.deriv(table.psi(y));
      }
    }
    return out;
  };

  GrassmannElement result = f;
  GrassmannElement cur = f;
  double factorial = 1.0;
  for (int k = 1; k <= 32; ++k) {
    cur = apply_lc(cur);
    if (cur.empty()) break;
    factorial *= k;
    result += cur * (1.0 / factorial);
  }
  return result;
}

double DictionaryReport::max_abs() const {
  double m = err_normalisation;
  m = std::max(m, err_z);
  m = std::max(m, err_xieta);
  m = std::max(m, err_u0ux);
  m = std::max(m, err_ward);
  m = std::max(m, err_ghost_edge);
  m = std::max(m, err_four_point);
  return m;
}

DictionaryReport dictionary_check(const Graph& g, double beta, double h) {
  H02Model model(g, beta, h);
  ExactSummary oracle = exact_summary(g, beta, h);

  DictionaryReport rep;
  rep.err_normalisation = std::abs(model.Z() - oracle.Z) / std::abs(oracle.Z);

  double z0 = model.expect(model.z(0));
  rep.err_z = std::abs(z0 - oracle.ghost[0]);

  double ward_sum = 0.0;
  for (int x = 0; x < g.n; ++x) {
    double xe = model.expect(model.xi_eta(0, x));
    rep.err_xieta = std::max(rep.err_xieta, std::abs(xe - oracle.tau0[x]));
    ward_sum += xe;

    double uu = model.expect(model.u_dot(0, x));
    double rhs = oracle.conn[0][x] + oracle.both_rooted0[x];
    rep.err_u0ux = std::max(rep.err_u0ux, std::abs(-uu - rhs));
  }
  rep.err_ward = std::abs(z0 - h * ward_sum);

  // ghost-edge identities: h<1-z_0> = P[0g], h^2 <z_0-1; z_x-1> truncated
  double lhs_edge = h * (1.0 - z0);
  rep.err_ghost_edge = std::abs(lhs_edge - oracle.edge_ghost[0]);
  for (int x = 0; x < g.n; ++x) {
    if (x == 0) continue;
    double zx = model.expect(model.z(x));
    double zz = model.expect(mul(model.z(0), model.z(x)));
    double lhs = h * h * (zz - z0 * zx);
    double rhs = oracle.edge_ghost_pair0[x] - oracle.edge_ghost[0] * oracle.edge_ghost[x];
    rep.err_ghost_edge = std::max(rep.err_ghost_edge, std::abs(lhs - rhs));
  }

  if (h == 0.0) {
    for (int x = 0; x < g.n; ++x) {
      double p = oracle.conn[0][x];
      double a = -model.expect(model.u_dot(0, x));
      double b = -model.expect(mul(model.z(0), model.z(x)));
      double c = model.expect(model.xi_eta(0, x));
      double d4 = 1.0 - model.expect(mul(model.xi_eta(0, 0), model.xi_eta(x, x)));
      for (double v : {a, b, c, d4}) rep.err_four_point = std::max(rep.err_four_point, std::abs(v - p));
    }
  }
  return rep;
}

}  // namespace arbgas
