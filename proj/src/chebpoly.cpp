#include "arbgas/chebpoly.hpp"

#include <cmath>
#include <stdexcept>

namespace arbgas {

ChebPoly::ChebPoly(double lo, double hi, std::vector<double> cheb_coeffs)
    : lo_(lo), hi_(hi), c_(std::move(cheb_coeffs)) {
  if (!(hi_ > lo_)) throw std::invalid_argument("ChebPoly: empty interval");
  if (c_.empty()) c_.push_back(0.0);
  trim();
}

void ChebPoly::trim() {
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

ChebPoly ChebPoly::constant(double lo, double hi, double value) { return ChebPoly(lo, hi, {value}); }

ChebPoly ChebPoly::identity(double lo, double hi) {
  // A = (hi+lo)/2 + (hi-lo)/2 * mu
  return ChebPoly(lo, hi, {(hi + lo) / 2.0, (hi - lo) / 2.0});
}

double ChebPoly::eval(double A) const {
  double mu = (2.0 * A - hi_ - lo_) / (hi_ - lo_);
  double b1 = 0.0, b2 = 0.0;
  for (int k = degree(); k >= 1; --k) {
    double b0 = c_[k] + 2.0 * mu * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c_[0] + mu * b1 - b2;
}

ChebPoly ChebPoly::operator+(const ChebPoly& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return ChebPoly(lo_, hi_, std::move(r));
}

ChebPoly ChebPoly::operator-(const ChebPoly& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return ChebPoly(lo_, hi_, std::move(r));
}

ChebPoly ChebPoly::scaled(double s) const {
  std::vector<double> r = c_;
  for (double& x : r) x *= s;
  return ChebPoly(lo_, hi_, std::move(r));
}

ChebPoly ChebPoly::operator*(const ChebPoly& o) const {
  // T_i T_j = (T_{i+j} + T_{|i-j|}) / 2
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (size_t i = 0; i < c_.size(); ++i) {
    for (size_t j = 0; j < o.c_.size(); ++j) {
      double p = 0.5 * c_[i] * o.c_[j];
      r[i + j] += p;
      r[i >= j ? i - j : j - i] += p;
    }
  }
  return ChebPoly(lo_, hi_, std::move(r));
}

ChebPoly ChebPoly::tk_of_window(double lo, double hi, int k, double wlo, double whi) {
  if (!(whi > wlo)) throw std::invalid_argument("tk_of_window: empty window");
  // nu(A) = (2A - whi - wlo)/(whi - wlo), expressed in the reference basis
  double alpha = (-whi - wlo) / (whi - wlo);
  double beta = 2.0 / (whi - wlo);
  ChebPoly nu = identity(lo, hi).scaled(beta) + constant(lo, hi, alpha);
  ChebPoly tkm1 = constant(lo, hi, 1.0);
  if (k == 0) return tkm1;
  ChebPoly tk = nu;
  for (int i = 2; i <= k; ++i) {
    ChebPoly next = (nu * tk).scaled(2.0) - tkm1;
    tkm1 = tk;
    tk = next;
  }
  return tk;
}

ChebPoly ChebPoly::divide_by_A() const {
  // Solve (alpha + beta*mu) q(mu) = p(mu), A = alpha + beta*mu. Matching
  // T-coefficients with mu T_k = (T_{k+1} + T_{k-1})/2 for k >= 1 and
  // mu T_0 = T_1:
  //   p_n = beta/2 q_{n-1}
  //   p_m = alpha q_m + beta/2 (q_{m-1} + q_{m+1})   for 2 <= m <= n-1
  //   p_1 = alpha q_1 + beta (q_0 + q_2/2)
  //   p_0 = alpha q_0 + beta/2 q_1   (residual; vanishes when p(0) = 0)
  double alpha = (hi_ + lo_) / 2.0;
  double beta = (hi_ - lo_) / 2.0;
  int n = degree();
  if (n == 0) {
    if (std::abs(c_[0]) > 1e-9) throw std::invalid_argument("divide_by_A: constant has no root at A=0");
    return constant(lo_, hi_, 0.0);
  }
  std::vector<double> q(n, 0.0);
  if (n == 1) {
    q[0] = c_[1] / beta;
    return ChebPoly(lo_, hi_, std::move(q));
  }
  q[n - 1] = 2.0 * c_[n] / beta;
  for (int m = n - 1; m >= 2; --m) {
    double q_mp1 = (m + 1 <= n - 1) ? q[m + 1] : 0.0;
    q[m - 1] = 2.0 * (c_[m] - alpha * q[m]) / beta - q_mp1;
  }
  q[0] = (c_[1] - alpha * q[1]) / beta - (n - 1 >= 2 ? 0.5 * q[2] : 0.0);
  return ChebPoly(lo_, hi_, std::move(q));
}

void ChebPoly::apply(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply_A,
                     const std::vector<double>& in, std::vector<double>& out) const {
  size_t n = in.size();
  std::vector<double> b1(n, 0.0), b2(n, 0.0), tmp(n, 0.0), mub(n, 0.0);
  auto apply_mu = [&](const std::vector<double>& v, std::vector<double>& r) {
    apply_A(v, tmp);
    double s = 2.0 / (hi_ - lo_);
    double t = (hi_ + lo_) / (hi_ - lo_);
    for (size_t i = 0; i < n; ++i) r[i] = s * tmp[i] - t * v[i];
  };
  for (int k = degree(); k >= 1; --k) {
    apply_mu(b1, mub);
    std::vector<double> b0(n);
    for (size_t i = 0; i < n; ++i) b0[i] = c_[k] * in[i] + 2.0 * mub[i] - b2[i];
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  apply_mu(b1, mub);
  out.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) out[i] = c_[0] * in[i] + mub[i] - b2[i];
}

}  // namespace arbgas
