#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbgas/lattice.hpp"

namespace arbgas {

// Ordered generator set. Vertex x owns the pair (xi_x, eta_x) at indices
// (2x, 2x+1); extra generators (observable fields) follow the vertex block.
// In psi-coordinates the same slots are read as (psibar_x, psi_x).
struct GeneratorTable {
  int n_vertices = 0;
  int n_extra = 0;

  int count() const { return 2 * n_vertices + n_extra; }
  int xi(int x) const { return 2 * x; }
  int eta(int x) const { return 2 * x + 1; }
  int psibar(int x) const { return 2 * x; }
  int psi(int x) const { return 2 * x + 1; }
  int extra(int k) const { return 2 * n_vertices + k; }
};

// Sparse multivector over <= 64 generators: sum over bitmasks S of c_S g^S,
// where g^S is the product of generators in increasing index order. Terms are
// kept sorted by mask; coefficients with |c| below the prune threshold
// (exact zeros in practice) are dropped.
class GrassmannElement {
 public:
  struct Term {
    uint64_t mask;
    double c;
  };

  GrassmannElement() = default;
  static GrassmannElement scalar(double c);
  static GrassmannElement generator(int i);
  static GrassmannElement monomial(uint64_t mask, double c);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  double coeff(uint64_t mask) const;
  double scalar_part() const { return coeff(0); }
  int max_degree() const;
  bool is_even() const;  // all masks have even popcount
  double max_abs_coeff() const;

  GrassmannElement& operator+=(const GrassmannElement& o);
  GrassmannElement& operator-=(const GrassmannElement& o);
  GrassmannElement& operator*=(double s);
  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator*(GrassmannElement a, double s) { return a *= s; }
  friend GrassmannElement operator*(double s, GrassmannElement a) { return a *= s; }
  friend GrassmannElement mul(const GrassmannElement& a, const GrassmannElement& b);
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) { return mul(a, b); }

  // Left derivative with respect to generator i.
  GrassmannElement deriv(int i) const;

  // exp of an even element; the non-scalar part must be nilpotent, which is
  // automatic here, so the series terminates.
  GrassmannElement exp_even() const;

  // Coefficient of the full product of all `count` generators taken in
  // storage order. This equals the Grassmann integral with the per-vertex
  // order d_eta d_xi applied vertex by vertex (the calibration that makes the
  // one-vertex model have Z = 1).
  double berezin_full(int count) const;
  // Same, but applying left derivatives in the given operator string order
  // (rightmost entry acts first); `order` must list every generator once.
  double berezin_ordered(const std::vector<int>& order, int count) const;

  static constexpr double kPruneThreshold = 1e-300;

  // Sign of g^S * g^T reordering, 0 if masks intersect.
  static int product_sign(uint64_t s, uint64_t t);

 private:
  void canonicalize();
  std::vector<Term> terms_;  // sorted by mask
};

// The fermionic H^{0|2} model on a finite weighted graph: density
//   prod_x (1/z_x) exp( sum_{xy in E} beta_xy (u_x.u_y + 1) + sum_x h_x xi_x eta_x )
// with z_x = 1 - xi_x eta_x and u_x.u_y = -xi_x eta_y - xi_y eta_x - z_x z_y.
// Expectations are Berezin integrals normalized by Z.
class H02Model {
 public:
  H02Model(const Graph& g, double beta, double h);
  explicit H02Model(const Graph& g);  // use g's per-edge betas and per-vertex h

  const GeneratorTable& table() const { return table_; }
  double Z() const { return z_; }
  double expect(const GrassmannElement& obs) const;

  GrassmannElement one() const { return GrassmannElement::scalar(1.0); }
  GrassmannElement xi(int x) const { return GrassmannElement::generator(table_.xi(x)); }
  GrassmannElement eta(int x) const { return GrassmannElement::generator(table_.eta(x)); }
  GrassmannElement z(int x) const;            // 1 - xi_x eta_x
  GrassmannElement xi_eta(int x, int y) const;  // xi_x eta_y
  GrassmannElement u_dot(int x, int y) const;

 private:
  void build(const Graph& g);
  GeneratorTable table_;
  GrassmannElement density_;
  double z_ = 0.0;
};

// Fermionic Gaussian convolution E_C theta = exp(L_C) with
// L_C = sum_{x,y} C[x][y] d_psi_y d_psibar_x acting on the vertex pairs of
// `table`. Extra generators ride along untouched.
GrassmannElement gaussian_convolution(const std::vector<std::vector<double>>& C,
                                      const GrassmannElement& f, const GeneratorTable& table);

// Max absolute discrepancy per identity between the Grassmann engine and the
// enumeration oracle on one graph at (beta, h).
struct DictionaryReport {
  double err_normalisation = 0.0;  // |Z_fermi - Z_forest| (relative to Z_forest)
  double err_z = 0.0;              // <z_0> vs P[0 <-> ghost], max over base point 0
  double err_xieta = 0.0;          // <xi_0 eta_x> vs P[0<->x, 0 not<->ghost]
  double err_u0ux = 0.0;           // -<u_0.u_x> vs P[0<->x] + P[0 not<->x, both rooted]
  double err_ward = 0.0;           // <z_0> = h sum_x <xi_0 eta_x>
  double err_ghost_edge = 0.0;     // h<1 - z_0> = P[0g] and the truncated pair version
  double err_four_point = 0.0;     // the h = 0 four-way equality (only filled at h = 0)
  double max_abs() const;
};

DictionaryReport dictionary_check(const Graph& g, double beta, double h);

}  // namespace arbgas
