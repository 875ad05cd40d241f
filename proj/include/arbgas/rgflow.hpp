#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "arbgas/frd.hpp"

namespace arbgas {

// Bulk potential coefficients (z, y, a, b) plus the accumulated constant u.
// u is write-only for the flow: it never feeds back into the couplings.
struct BulkCouplings {
  double z = 0.0, y = 0.0, a = 0.0, b = 0.0;
  double u = 0.0;
};

// The two scalars of C_{j+1} that drive one step.
struct KernelScalars {
  double c0 = 0.0;      // C_{j+1}(0,0)
  double lap_c0 = 0.0;  // (Delta C_{j+1})(0,0)
};

KernelScalars kernel_scalars(const CovarianceDecomposition& dec, int j_plus_1);

// One Wick step: z' = z, y' = y - C(0) b, a' = a + DeltaC(0) b, b' = b, and u
// accumulates the full constant contraction of the potential (the b part uses
// the automorphism-invariance identity sum_e (C(0)-C(e))^2 = DeltaC(0)^2/2d).
BulkCouplings bulk_step(const BulkCouplings& v, const KernelScalars& ks, int d);

struct RescaledCouplings {
  double z = 0.0, y = 0.0, a = 0.0, b = 0.0;
};

RescaledCouplings rescale(const BulkCouplings& v, int j, int L, int d);
BulkCouplings unrescale(const RescaledCouplings& v, int j, int L, int d, double u = 0.0);
// hat-flow step j -> j+1; consistent with bulk_step under un-rescaling.
RescaledCouplings rescaled_step(const RescaledCouplings& v, const KernelScalars& ks, int L, int d, int j);

enum class ObsCase { One = 1, Two = 2 };

// Observable couplings; gamma_a/gamma_b/eta only live in Case (2).
struct ObservableCouplings {
  ObsCase tag = ObsCase::One;
  double lambda_a = 0.0, lambda_b = 0.0;
  double q = 0.0, r = 0.0;
  double gamma_a = 0.0, gamma_b = 0.0, eta = 0.0;
};

struct ObsKernelScalars {
  double c_ab = 0.0;  // C_{j+1}(a,b)
  double c_00 = 0.0;  // C_{j+1}(0,0) = C_{j+1}(x,x)
};

// Simultaneous update: all right-hand sides read pre-update values.
ObservableCouplings observable_step(const ObservableCouplings& o, const ObsKernelScalars& ks);

// floor(log_L(2 |a-b|_inf)); INT64_MAX sentinel when a = b.
int64_t coalescence_scale(const Torus& t, int64_t a, int64_t b);
constexpr int64_t kCoalescenceInfinite = INT64_MAX;

// Zero-mode data of the final integration, with the remainder constants
// k_N^0, k_N^2 as explicit zero slots (exact at the truncation implemented).
struct ZeroModeState {
  double a_tilde = 0.0;  // a_N - k2/|Lambda|
  double u_tilde = 0.0;  // k0 + a_tilde t_N
  double k0 = 0.0, k2 = 0.0;
};

ZeroModeState zero_mode_state(const BulkCouplings& vN, double t_N, double volume);

// chi = 1/m^2 - a_tilde / (m^4 (1 + u_tilde)).
double susceptibility(const ZeroModeState& zm, double m2);

// Constant coefficients of the observable part of the zero-mode integrated
// partition function, restricted to constant fields.
struct ZeroModeObservables {
  double z_sigma_a = 0.0;   // Case (2) only
  double z_sigma_b = 0.0;   // Case (2) only
  double z_ab = 0.0;        // sigma_a sigmabar_b (Case 1) or sigma_a sigma_b (Case 2)
};

ZeroModeObservables zero_mode_observables(const ObservableCouplings& oN, const ZeroModeState& zm,
                                          double t_N, double volume);

// Correlators extracted from the zero-mode route (the log expansion divides
// by 1 + u_tilde and, in Case (2), subtracts the disconnected product).
double two_point_from_zero_mode(const ObservableCouplings& o0, const ZeroModeObservables& zo,
                                const ZeroModeState& zm);          // Case (1): <psibar_a psi_b>
double one_point_from_zero_mode(const ObservableCouplings& o0, const ZeroModeObservables& zo,
                                const ZeroModeState& zm);          // Case (2): <psibar_a psi_a>
double truncated_two_point_from_zero_mode(const ObservableCouplings& o0, const ZeroModeObservables& zo,
                                          const ZeroModeState& zm);  // Case (2)

// Change of variables between (m^2, s0, a0, b0) and (beta, h).
std::pair<double, double> beta_h_from(double m2, double s0, double a0, double b0);
std::pair<double, double> b0_m2_from(double beta, double h, double s0, double a0);

// Full flow driver over a decomposition. The observable flow optionally
// performs the (N+1)-st step with C_{N+1} = t_N Q_N; otherwise the caller
// finishes with zero_mode_observables.
struct FlowTrajectory {
  std::vector<BulkCouplings> bulk;            // index j = 0..N
  std::vector<ObservableCouplings> obs;       // index j = 0..N (+1 with the extra step)
  bool extra_step_applied = false;
};

FlowTrajectory run_flow(const CovarianceDecomposition& dec, const BulkCouplings& v0,
                        const std::optional<ObservableCouplings>& obs0, int64_t a, int64_t b,
                        bool apply_zero_mode_step);

}  // namespace arbgas
