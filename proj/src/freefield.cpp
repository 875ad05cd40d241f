#include "arbgas/freefield.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace arbgas {

namespace {
std::mutex fftw_plan_mutex;  // FFTW planning is not thread-safe
}

std::vector<double> inverse_symbol_transform(const Torus& t,
                                             const std::function<double(double, bool)>& symbol) {
  int64_t v = t.volume;
  int64_t side = t.side;

  // per-axis sin^2 table: lambda(k) = sum_axes 4 sin^2(pi n_a / side)
  std::vector<double> s2(side);
  for (int64_t i = 0; i < side; ++i) {
    double s = std::sin(std::numbers::pi * static_cast<double>(i) / static_cast<double>(side));
    s2[i] = 4.0 * s * s;
  }

  std::vector<double> sym(v);
  for (int64_t k = 0; k < v; ++k) {
    double lam = 0.0;
    int64_t kk = k;
    for (int a = 0; a < t.d; ++a) {
      lam += s2[kk % side];
      kk /= side;
    }
    sym[k] = symbol(lam, k == 0);
  }

  if (v <= 4096) {
    // direct cosine sums; the symbol is real and even under k -> -k so the
    // imaginary parts cancel exactly, and small tori skip the plan overhead
    std::vector<double> out(v, 0.0);
    std::vector<double> ctab(side);
    double twopi = 2.0 * std::numbers::pi;
    for (int64_t r = 0; r < side; ++r)
      ctab[r] = std::cos(twopi * static_cast<double>(r) / static_cast<double>(side));
    for (int64_t x = 0; x < v; ++x) {
      auto cx = t.coords(x);
      double acc = 0.0, comp = 0.0;
      for (int64_t k = 0; k < v; ++k) {
        auto ck = t.coords(k);
        int64_t dot = 0;
        for (int a = 0; a < t.d; ++a) dot += cx[a] * ck[a];
        double val = sym[k] * ctab[dot % side];
        double y = val - comp;
        double tt = acc + y;
        comp = (tt - acc) - y;
        acc = tt;
      }
      out[x] = acc / static_cast<double>(v);
    }
    return out;
  }

  fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(v));
  if (!buf) throw std::runtime_error("inverse_symbol_transform: allocation failed");
  for (int64_t k = 0; k < v; ++k) {
    buf[k][0] = sym[k];
    buf[k][1] = 0.0;
  }
  std::vector<int> dims(t.d, static_cast<int>(side));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft(t.d, dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<double> out(v);
  for (int64_t x = 0; x < v; ++x) out[x] = buf[x][0] / static_cast<double>(v);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  return out;
}

double GreenKernel::sum() const {
  double s = 0.0, c = 0.0;
  for (double x : values) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

GreenKernel green(const Torus& t, double m2) {
  if (m2 < 0) throw std::invalid_argument("green: m^2 must be >= 0");
  GreenKernel g{t, m2, m2 == 0.0, {}};
  g.values = inverse_symbol_transform(t, [m2](double lam, bool zero_mode) {
    if (zero_mode) return m2 > 0 ? 1.0 / m2 : 0.0;  // zero mode projected out at m2 = 0
    return 1.0 / (lam + m2);
  });
  return g;
}

std::vector<double> w_kernel(const GreenKernel& g, double t_N) {
  std::vector<double> w = g.values;
  double shift = t_N / static_cast<double>(g.torus.volume);
  for (double& x : w) x -= shift;
  return w;
}

std::vector<double> apply_laplacian_plus_mass(const Torus& t, const std::vector<double>& kernel, double m2) {
  std::vector<double> out(t.volume);
  for (int64_t x = 0; x < t.volume; ++x) {
    double acc = (2.0 * t.d + m2) * kernel[x];
    for (int a = 0; a < t.d; ++a) {
      acc -= kernel[t.neighbor(x, a, +1)];
      acc -= kernel[t.neighbor(x, a, -1)];
    }
    out[x] = acc;
  }
  return out;
}

namespace {

int int_log(int64_t side, int base) {
  int n = 0;
  int64_t s = 1;
  while (s < side) {
    s *= base;
    ++n;
  }
  if (s != side) throw std::invalid_argument("side must be a power of the base");
  return n;
}

double zero_mode_removed_green_at(int d, int64_t side, const std::vector<int64_t>& x) {
  Torus t(d, 2, int_log(side, 2));
  GreenKernel g = green(t, 0.0);
  std::vector<int64_t> c(d, 0);
  for (size_t i = 0; i < x.size() && i < static_cast<size_t>(d); ++i) c[i] = x[i];
  return g.at(t.index(c));
}

}  // namespace

ZdGreenRef zd_green_reference(int d, const std::vector<int64_t>& x, int64_t base_side) {
  if (d < 3) throw std::invalid_argument("zd_green_reference: needs d >= 3");
  if (base_side < 16) throw std::invalid_argument("zd_green_reference: base side too small");

  double p = static_cast<double>(d - 2);  // finite-size error decays like side^-(d-2)
  double w = std::pow(2.0, p);
  auto richardson = [&](double g_small, double g_big) { return (w * g_big - g_small) / (w - 1.0); };

  double g1 = zero_mode_removed_green_at(d, base_side / 2, x);
  double g2 = zero_mode_removed_green_at(d, base_side, x);
  double g3 = zero_mode_removed_green_at(d, 2 * base_side, x);

  ZdGreenRef out;
  double extrap_lo = richardson(g1, g2);
  double extrap_hi = richardson(g2, g3);
  out.value = extrap_hi;
  out.stability = std::abs(extrap_hi - extrap_lo);

  // c_d from G ~ c_d |x|^{-(d-2)} over a mid-range window of axis offsets
  Torus tb(d, 2, int_log(2 * base_side, 2));
  GreenKernel gb = green(tb, 0.0);
  Torus ts(d, 2, int_log(base_side, 2));
  GreenKernel gs = green(ts, 0.0);
  double acc = 0.0;
  int count = 0;
  for (int64_t r = 3; r <= base_side / 8; ++r) {
    std::vector<int64_t> cb(d, 0), cs(d, 0);
    cb[0] = r;
    cs[0] = r;
    double val = richardson(gs.at(ts.index(cs)), gb.at(tb.index(cb)));
    acc += val * std::pow(static_cast<double>(r), p);
    ++count;
  }
  out.c_d = count > 0 ? acc / count : 0.0;
  return out;
}

}  // namespace arbgas
