#pragma once

#include <functional>
#include <vector>

namespace arbgas {

// Polynomial in a spectral variable A on a fixed reference interval [lo, hi],
// stored by Chebyshev coefficients in mu = (2A - hi - lo)/(hi - lo). The
// basis keeps coefficient sizes comparable to the function's sup norm, which
// is what makes degree ~20 spectral calculus stable in doubles. `apply`
// specialises the polynomial to a banded operator via Clenshaw recursion, so
// a degree-D polynomial of a nearest-neighbor stencil is exactly D-banded.
class ChebPoly {
 public:
  ChebPoly() = default;
  ChebPoly(double lo, double hi, std::vector<double> cheb_coeffs);

  static ChebPoly constant(double lo, double hi, double value);
  static ChebPoly identity(double lo, double hi);  // p(A) = A

  // T_k evaluated through the affine map of a window [wlo, whi] onto [-1,1],
  // expressed in the reference basis of [lo, hi].
  static ChebPoly tk_of_window(double lo, double hi, int k, double wlo, double whi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }

  double eval(double A) const;

  ChebPoly operator+(const ChebPoly& o) const;
  ChebPoly operator-(const ChebPoly& o) const;
  ChebPoly operator*(const ChebPoly& o) const;
  ChebPoly scaled(double s) const;

  // q with q(A) * A = p(A); requires p(0) = 0 up to roundoff (the residual
  // constant is discarded). Only valid when 0 is inside [lo, hi].
  ChebPoly divide_by_A() const;

  // out = p(Op) in, where apply_A computes Op * v for the banded operator.
  void apply(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply_A,
             const std::vector<double>& in, std::vector<double>& out) const;

 private:
  void trim();
  double lo_ = -1.0, hi_ = 1.0;
  std::vector<double> c_;  // c_[k] multiplies T_k(mu)
};

}  // namespace arbgas
