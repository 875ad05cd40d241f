#include "arbgas/rgflow.hpp"

#include <cmath>
#include <stdexcept>

namespace arbgas {

namespace {
double lpow(int L, int e) { return std::pow(static_cast<double>(L), static_cast<double>(e)); }
}

KernelScalars kernel_scalars(const CovarianceDecomposition& dec, int j_plus_1) {
  return {dec.c_zero(j_plus_1), dec.lap_c_zero(j_plus_1)};
}

BulkCouplings bulk_step(const BulkCouplings& v, const KernelScalars& ks, int d) {
  BulkCouplings out;
  out.z = v.z;
  out.y = v.y - ks.c0 * v.b;
  out.a = v.a + ks.lap_c0 * v.b;
  out.b = v.b;
  // constant part of the Wick contraction of the potential; the quartic term
  // uses sum_e (C(0)-C(e))^2 = DeltaC(0)^2 / (2d) for invariant kernels
  double du = -v.a * ks.c0 + (v.z + v.y) * ks.lap_c0 -
              v.b * (ks.c0 * ks.lap_c0 + ks.lap_c0 * ks.lap_c0 / (4.0 * d));
  out.u = v.u + du;
  return out;
}

RescaledCouplings rescale(const BulkCouplings& v, int j, int L, int d) {
  return {v.z, v.y, lpow(L, 2 * j) * v.a, lpow(L, -(d - 2) * j) * v.b};
}

BulkCouplings unrescale(const RescaledCouplings& v, int j, int L, int d, double u) {
  BulkCouplings out;
  out.z = v.z;
  out.y = v.y;
  out.a = lpow(L, -2 * j) * v.a;
  out.b = lpow(L, (d - 2) * j) * v.b;
  out.u = u;
  return out;
}

RescaledCouplings rescaled_step(const RescaledCouplings& v, const KernelScalars& ks, int L, int d, int j) {
  // hat-kappas chosen so that un-rescaling reproduces bulk_step exactly
  double kab_hat = lpow(L, d * j + 2) * ks.lap_c0;
  double kyb_hat = -lpow(L, (d - 2) * j) * ks.c0;
  RescaledCouplings out;
  out.z = v.z;
  out.y = v.y + kyb_hat * v.b;
  out.a = lpow(L, 2) * v.a + kab_hat * v.b;
  out.b = lpow(L, -(d - 2)) * v.b;
  return out;
}

ObservableCouplings observable_step(const ObservableCouplings& o, const ObsKernelScalars& ks) {
  ObservableCouplings n = o;
  if (o.tag == ObsCase::One) {
    n.q = o.q + o.lambda_a * o.lambda_b * ks.c_ab + o.r * ks.c_00;
  } else {
    n.gamma_a = o.gamma_a + o.lambda_a * ks.c_00;
    n.gamma_b = o.gamma_b + o.lambda_b * ks.c_00;
    n.q = o.q + o.eta * ks.c_ab + o.r * ks.c_00 - o.lambda_a * o.lambda_b * ks.c_ab * ks.c_ab;
    n.eta = o.eta - 2.0 * o.lambda_a * o.lambda_b * ks.c_ab;
  }
  return n;
}

int64_t coalescence_scale(const Torus& t, int64_t a, int64_t b) {
  int64_t r = t.linf_distance(a, b);
  if (r == 0) return kCoalescenceInfinite;
  int64_t target = 2 * r;
  int64_t j = 0, p = 1;
  while (p * t.L <= target) {
    p *= t.L;
    ++j;
  }
  return j;
}

ZeroModeState zero_mode_state(const BulkCouplings& vN, double t_N, double volume) {
  ZeroModeState zm;
  zm.k0 = 0.0;
  zm.k2 = 0.0;
  zm.a_tilde = vN.a - zm.k2 / volume;
  zm.u_tilde = zm.k0 + zm.a_tilde * t_N;
  return zm;
}

double susceptibility(const ZeroModeState& zm, double m2) {
  if (!(m2 > 0)) throw std::invalid_argument("susceptibility: m^2 must be > 0");
  double denom = 1.0 + zm.u_tilde;
  if (denom == 0.0) throw std::invalid_argument("susceptibility: 1 + u_tilde vanishes");
  return 1.0 / m2 - zm.a_tilde / (m2 * m2 * denom);
}

ZeroModeObservables zero_mode_observables(const ObservableCouplings& o, const ZeroModeState& zm,
                                          double t_N, double volume) {
  double tq = t_N / volume;
  double w = 1.0 + zm.u_tilde;
  ZeroModeObservables out;
  if (o.tag == ObsCase::One) {
    out.z_ab = o.q * w + (o.lambda_a * o.lambda_b + o.r) * tq;
  } else {
    out.z_sigma_a = o.gamma_a * w + o.lambda_a * tq;
    out.z_sigma_b = o.gamma_b * w + o.lambda_b * tq;
    out.z_ab = (o.q + o.gamma_a * o.gamma_b) * w +
               (o.eta + o.r + o.lambda_a * o.gamma_b + o.lambda_b * o.gamma_a) * tq;
  }
  return out;
}

double two_point_from_zero_mode(const ObservableCouplings& o0, const ZeroModeObservables& zo,
                                const ZeroModeState& zm) {
  return zo.z_ab / (o0.lambda_a * o0.lambda_b * (1.0 + zm.u_tilde));
}

double one_point_from_zero_mode(const ObservableCouplings& o0, const ZeroModeObservables& zo,
                                const ZeroModeState& zm) {
  return zo.z_sigma_a / (o0.lambda_a * (1.0 + zm.u_tilde));
}

double truncated_two_point_from_zero_mode(const ObservableCouplings& o0, const ZeroModeObservables& zo,
                                          const ZeroModeState& zm) {
  double w = 1.0 + zm.u_tilde;
  return (zo.z_ab / w - zo.z_sigma_a * zo.z_sigma_b / (w * w)) / (o0.lambda_a * o0.lambda_b);
}

std::pair<double, double> beta_h_from(double m2, double s0, double a0, double b0) {
  if (!(b0 > 0)) throw std::invalid_argument("beta_h_from: b0 must be > 0");
  if (!(1.0 + s0 > 0)) throw std::invalid_argument("beta_h_from: 1 + s0 must be > 0");
  double beta = (1.0 + s0) * (1.0 + s0) / b0;
  double h = -1.0 + (a0 + m2) * (1.0 + s0) / b0;
  return {beta, h};
}

std::pair<double, double> b0_m2_from(double beta, double h, double s0, double a0) {
  if (!(beta > 0)) throw std::invalid_argument("b0_m2_from: beta must be > 0");
  if (!(1.0 + s0 > 0)) throw std::invalid_argument("b0_m2_from: 1 + s0 must be > 0");
  double b0 = (1.0 + s0) * (1.0 + s0) / beta;
  double m2 = b0 * (1.0 + h) / (1.0 + s0) - a0;
  return {b0, m2};
}

FlowTrajectory run_flow(const CovarianceDecomposition& dec, const BulkCouplings& v0,
                        const std::optional<ObservableCouplings>& obs0, int64_t a, int64_t b,
                        bool apply_zero_mode_step) {
  FlowTrajectory tr;
  tr.bulk.push_back(v0);
  if (obs0) tr.obs.push_back(*obs0);
  int N = dec.n_scales();
  for (int j = 1; j <= N; ++j) {
    KernelScalars ks = kernel_scalars(dec, j);
    tr.bulk.push_back(bulk_step(tr.bulk.back(), ks, dec.torus.d));
    if (obs0) {
      ObsKernelScalars oks{dec.at(j, a, b), dec.c_zero(j)};
      tr.obs.push_back(observable_step(tr.obs.back(), oks));
    }
  }
  if (apply_zero_mode_step && obs0) {
    if (!dec.t_N) throw std::invalid_argument("run_flow: zero-mode step needs m^2 > 0");
    double tq = *dec.t_N / static_cast<double>(dec.torus.volume);
    ObsKernelScalars oks{tq, tq};  // C_{N+1} = t_N Q_N has all entries t_N/|Lambda|
    tr.obs.push_back(observable_step(tr.obs.back(), oks));
    tr.extra_step_applied = true;
  }
  return tr;
}

}  // namespace arbgas
