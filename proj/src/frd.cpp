#include "arbgas/frd.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "arbgas/freefield.hpp"

namespace arbgas {

namespace {

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

int64_t CovarianceDecomposition::range_bound(int j) const {
  if (j >= torus.N) return 0;  // no constraint on the last scale
  int64_t Lj = ipow(torus.L, j);
  return (Lj + 1) / 2;  // smallest integer >= L^j / 2
}

double CovarianceDecomposition::lap_c_zero(int j) const {
  const std::vector<double>& k = kernels[j - 1];
  double acc = -2.0 * torus.d * k[0];
  for (int a = 0; a < torus.d; ++a) {
    acc += k[torus.neighbor(0, a, +1)];
    acc += k[torus.neighbor(0, a, -1)];
  }
  return acc;
}

double CovarianceDecomposition::symbol(int j, double lambda, bool zero_mode) const {
  if (backend == FrdBackend::Polynomial) {
    if (j < torus.N) return band_polys[j - 1].eval(lambda + m2);
    if (zero_mode) return 0.0;
    return residual_poly.eval(lambda + m2) / (lambda + m2);
  }
  // spectral bump backend
  double b = 4.0 * torus.d + m2;
  double A = lambda + m2;
  auto residual = [&](int jj) {
    if (jj == 0) return 1.0;
    double u = A * static_cast<double>(ipow(torus.L, 2 * jj)) / b;
    return std::exp(-std::pow(u, options.bump_exponent));
  };
  if (j < torus.N) {
    if (A == 0.0) return 0.0;  // removable limit: both residuals -> 1
    return (residual(j - 1) - residual(j)) / A;
  }
  if (zero_mode) return 0.0;
  return residual(torus.N - 1) / A;
}

double CovarianceDecomposition::lap_c_zero_fourier(int j) const {
  // Delta C(0,0) = -(1/V) sum_k lambda(k) * symbol_j(lambda(k))
  const Torus& t = torus;
  std::vector<double> s2(t.side);
  for (int64_t i = 0; i < t.side; ++i) {
    double s = std::sin(std::numbers::pi * static_cast<double>(i) / static_cast<double>(t.side));
    s2[i] = 4.0 * s * s;
  }
  double acc = 0.0, comp = 0.0;
  for (int64_t k = 0; k < t.volume; ++k) {
    double lam = 0.0;
    int64_t kk = k;
    for (int a = 0; a < t.d; ++a) {
      lam += s2[kk % t.side];
      kk /= t.side;
    }
    double val = -lam * symbol(j, lam, k == 0);
    double y = val - comp;
    double tt = acc + y;
    comp = (tt - acc) - y;
    acc = tt;
  }
  return acc / static_cast<double>(t.volume);
}

namespace {

// Build the polynomial backend factors rho_j on [0, b]:
//   rho_j(A) = (1 - A/b)^{r_j} * (T_{k_j}(nu_j(A)) / T_{k_j}(nu_j(0)))^2
// with the window [a_j, b], a_j = b*min(clamp, c0/K_j^2). Each factor maps
// [0, b] into [0, 1] and equals 1 at A = 0, so the cumulative products
// R_j = prod_i rho_i telescope into nonnegative bands (R_{j-1} - R_j)/A of
// the correct degree and the exact remainder R_{N-1}(A)/A.
struct PolyFactors {
  std::vector<ChebPoly> bands;  // F_j, degree <= D_j, j = 1..N-1
  ChebPoly residual;            // R_{N-1}
};

PolyFactors build_poly_factors(const Torus& t, double m2, const FrdOptions& opt) {
  double b = 4.0 * t.d + m2;
  ChebPoly one = ChebPoly::constant(0.0, b, 1.0);
  ChebPoly A = ChebPoly::identity(0.0, b);

  PolyFactors out;
  out.residual = one;
  int64_t prev_budget = 0;  // D_{j-1} + 1
  int64_t cum_half = 0;     // K_j
  for (int j = 1; j < t.N; ++j) {
    int64_t Lj = ipow(t.L, j);
    int64_t budget = (Lj + 1) / 2;  // D_j + 1
    int64_t g = budget - prev_budget;
    prev_budget = budget;
    int64_t k = g / 2;
    int64_t r = g % 2;
    cum_half += k;

    ChebPoly rho = one;
    if (r == 1) rho = rho * (one - A.scaled(1.0 / b));
    if (k > 0) {
      double awin = b * std::min(opt.window_clamp,
                                 opt.window_c0 / static_cast<double>(cum_half * cum_half));
      ChebPoly tk = ChebPoly::tk_of_window(0.0, b, static_cast<int>(k), awin, b);
      double norm = tk.eval(0.0);
      ChebPoly tkn = tk.scaled(1.0 / norm);
      rho = rho * (tkn * tkn);
    }
    // F_j = R_{j-1} * (1 - rho_j) / A ; R_j = R_{j-1} * rho_j
    ChebPoly sigma = (one - rho).divide_by_A();
    out.bands.push_back(out.residual * sigma);
    out.residual = out.residual * rho;
  }
  return out;
}

}  // namespace

CovarianceDecomposition decompose(const Torus& t, double m2, FrdBackend backend,
                                  const FrdOptions& options) {
  if (m2 < 0) throw std::invalid_argument("decompose: m^2 must be >= 0");
  CovarianceDecomposition dec(t, m2, backend, options);

  if (backend == FrdBackend::Polynomial) {
    PolyFactors pf = build_poly_factors(t, m2, options);
    dec.band_polys = pf.bands;
    dec.residual_poly = pf.residual;

    // banded kernels: C_j = F_j(A) delta_0, computed in position space so the
    // kernel is structurally zero outside the band
    auto apply_A = [&](const std::vector<double>& v, std::vector<double>& r) {
      r.assign(v.size(), 0.0);
      for (int64_t x = 0; x < t.volume; ++x) {
        double acc = (2.0 * t.d + m2) * v[x];
        for (int a = 0; a < t.d; ++a) {
          acc -= v[t.neighbor(x, a, +1)];
          acc -= v[t.neighbor(x, a, -1)];
        }
        r[x] = acc;
      }
    };
    std::vector<double> delta(t.volume, 0.0);
    delta[0] = 1.0;
    for (int j = 1; j < t.N; ++j) {
      std::vector<double> k;
      dec.band_polys[j - 1].apply(apply_A, delta, k);
      dec.kernels.push_back(std::move(k));
    }
    // remainder (zero mode removed) spectrally
    const ChebPoly& R = dec.residual_poly;
    dec.kernels.push_back(inverse_symbol_transform(t, [&](double lam, bool zero) {
      if (zero) return 0.0;
      return R.eval(lam + m2) / (lam + m2);
    }));
    if (m2 > 0) dec.t_N = R.eval(m2) / m2;
  } else {
    for (int j = 1; j <= t.N; ++j) {
      dec.kernels.push_back(inverse_symbol_transform(
          t, [&](double lam, bool zero) { return dec.symbol(j, lam, zero); }));
    }
    if (m2 > 0) {
      double b = 4.0 * t.d + m2;
      double u = m2 * static_cast<double>(ipow(t.L, 2 * (t.N - 1))) / b;
      dec.t_N = std::exp(-std::pow(u, options.bump_exponent)) / m2;
    }
  }
  return dec;
}

ContractReport verify_contract(const CovarianceDecomposition& dec) {
  const Torus& t = dec.torus;
  ContractReport rep;

  // reconstruction against the direct Green kernel; at m^2 = 0 the identity
  // lives on the zero-mode complement, so the sum is compared after its own
  // zero mode (the kernel mean) is projected out
  GreenKernel g = green(t, dec.m2);
  double gmax = 0.0;
  for (double v : g.values) gmax = std::max(gmax, std::abs(v));
  double norm = dec.t_N ? *dec.t_N / static_cast<double>(t.volume) : 0.0;
  std::vector<double> sum(t.volume, 0.0);
  for (int64_t x = 0; x < t.volume; ++x) {
    double s = norm;
    for (const auto& k : dec.kernels) s += k[x];
    sum[x] = s;
  }
  if (dec.m2 == 0.0) {
    double mean = 0.0;
    for (double s : sum) mean += s;
    mean /= static_cast<double>(t.volume);
    for (double& s : sum) s -= mean;
  }
  double worst = 0.0;
  for (int64_t x = 0; x < t.volume; ++x) worst = std::max(worst, std::abs(sum[x] - g.values[x]));
  rep.reconstruction_rel = worst / gmax;
  rep.reconstruction_pass = rep.reconstruction_rel <= dec.options.reconstruction_tol;

  // finite range for j < N
  rep.range_pass = true;
  for (int j = 1; j < t.N; ++j) {
    const auto& k = dec.kernel(j);
    int64_t bound = dec.range_bound(j);
    double viol = 0.0, kmax = 0.0;
    for (int64_t x = 0; x < t.volume; ++x) {
      kmax = std::max(kmax, std::abs(k[x]));
      if (t.linf_distance(0, x) >= bound) viol = std::max(viol, std::abs(k[x]));
    }
    rep.range_violation.push_back(viol);
    rep.range_violation_rel.push_back(kmax > 0 ? viol / kmax : 0.0);
    bool ok = dec.backend == FrdBackend::Polynomial
                  ? viol <= dec.options.range_tol_poly
                  : (kmax > 0 ? viol / kmax : 0.0) <= dec.options.range_tol_bump_rel;
    rep.range_pass = rep.range_pass && ok;
  }

  // positivity on the Fourier side
  std::vector<double> s2(t.side);
  for (int64_t i = 0; i < t.side; ++i) {
    double s = std::sin(std::numbers::pi * static_cast<double>(i) / static_cast<double>(t.side));
    s2[i] = 4.0 * s * s;
  }
  double psd_min = 0.0;
  for (int j = 1; j <= t.N; ++j) {
    for (int64_t k = 0; k < t.volume; ++k) {
      double lam = 0.0;
      int64_t kk = k;
      for (int a = 0; a < t.d; ++a) {
        lam += s2[kk % t.side];
        kk /= t.side;
      }
      psd_min = std::min(psd_min, dec.symbol(j, lam, k == 0));
    }
  }
  rep.psd_min_symbol = psd_min;
  rep.psd_pass = psd_min >= -dec.options.psd_tol;

  // zero mode
  if (dec.m2 > 0) {
    rep.t_N = dec.t_N;
    bool ok = dec.t_N && *dec.t_N > 0.0 && *dec.t_N < 1.0 / dec.m2;
    double l2n = static_cast<double>(ipow(t.L, 2 * t.N));
    rep.t_ratio = ok ? (1.0 / dec.m2 - *dec.t_N) / l2n : INFINITY;
    rep.zero_mode_pass = ok;
  } else {
    rep.zero_mode_pass = !dec.t_N.has_value();
  }

  // empirical scaling sup: L^{(d-2)j} max_x |C_{j+1}(x)| over j = 0..N-1
  for (int j = 0; j < t.N; ++j) {
    double kmax = 0.0;
    for (double v : dec.kernel(j + 1)) kmax = std::max(kmax, std::abs(v));
    rep.scaling_sup = std::max(rep.scaling_sup, kmax * std::pow(static_cast<double>(t.L), (t.d - 2) * j));
  }
  return rep;
}

}  // namespace arbgas
