#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "arbgas/chebpoly.hpp"
#include "arbgas/lattice.hpp"

namespace arbgas {

enum class FrdBackend { Polynomial, SpectralBump };

struct FrdOptions {
  // polynomial backend: Chebyshev window [c0*b/K^2, b], clamped below b/2
  double window_c0 = 9.0;
  double window_clamp = 0.5;
  // bump backend: cumulative residual exp(-(A L^{2j} / b)^p); p = 1 is the
  // heat-kernel band choice, which has the smallest position-space tails
  double bump_exponent = 1.0;
  // acceptance tolerances for verify_contract
  double range_tol_poly = 1e-13;      // absolute on kernel entries beyond range
  double range_tol_bump_rel = 0.40;   // relative to the per-scale max entry
  double psd_tol = 1e-10;
  double reconstruction_tol = 1e-10;  // relative to max |G|
};

// C = C_1 + ... + C_{N-1} + C_N + t_N Q_N on the torus, with C_j (j < N)
// finite range < L^j/2 and C_N the zero-mode-free remainder. At m^2 = 0 only
// the kernels are defined and t_N is absent.
class CovarianceDecomposition {
 public:
  CovarianceDecomposition(const Torus& t, double m2_, FrdBackend backend_, const FrdOptions& opt)
      : torus(t), m2(m2_), backend(backend_), options(opt) {}

  Torus torus;
  double m2 = 0.0;
  FrdBackend backend = FrdBackend::Polynomial;
  FrdOptions options;

  // kernels[j-1] is the translation kernel of C_j, j = 1..N
  std::vector<std::vector<double>> kernels;
  std::optional<double> t_N;

  int n_scales() const { return torus.N; }
  const std::vector<double>& kernel(int j) const { return kernels[j - 1]; }
  double at(int j, int64_t x, int64_t y) const { return kernels[j - 1][torus.offset_index(x, y)]; }
  double c_zero(int j) const { return kernels[j - 1][0]; }
  // Delta C_j(0,0) from the kernel in position space.
  double lap_c_zero(int j) const;
  // Delta C_j(0,0) from the Fourier side: -(1/V) sum_k lambda(k) symbol_j(k).
  double lap_c_zero_fourier(int j) const;
  // Fourier multiplier of C_j at a given lambda(k) (zero_mode flags k = 0).
  double symbol(int j, double lambda, bool zero_mode) const;
  // range bound of scale j: kernel vanishes at linf distance >= this
  int64_t range_bound(int j) const;

  // data retained by the backends for symbol evaluation
  std::vector<ChebPoly> band_polys;   // polynomial backend: F_j(A), j = 1..N-1
  ChebPoly residual_poly;             // polynomial backend: R_{N-1}(A)
};

CovarianceDecomposition decompose(const Torus& t, double m2, FrdBackend backend,
                                  const FrdOptions& options = {});

struct ContractReport {
  double reconstruction_rel = 0.0;            // max |sum - G| / max |G|
  std::vector<double> range_violation;        // absolute, per scale j = 1..N-1
  std::vector<double> range_violation_rel;    // relative to per-scale max entry
  double psd_min_symbol = 0.0;                // min over scales and dual grid
  std::optional<double> t_N;
  double t_ratio = 0.0;                       // (1/m^2 - t_N) / L^{2N}
  double scaling_sup = 0.0;                   // max_j L^{(d-2)j} max_x |C_{j+1}(x)|
  bool reconstruction_pass = false;
  bool range_pass = false;
  bool psd_pass = false;
  bool zero_mode_pass = false;
  bool pass() const { return reconstruction_pass && range_pass && psd_pass && zero_mode_pass; }
};

ContractReport verify_contract(const CovarianceDecomposition& dec);

}  // namespace arbgas
