#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "arbgas/lattice.hpp"

namespace arbgas {

// Translation-invariant kernel from a Fourier multiplier: out(x) =
// (1/|Lambda|) sum_k symbol(lambda(k), k==0) e^{ik.x}, with
// lambda(k) = 4 sum_j sin^2(k_j/2) the (-Laplacian) symbol.
std::vector<double> inverse_symbol_transform(const Torus& t,
                                             const std::function<double(double, bool)>& symbol);

// Lattice Green function G = (-Delta + m^2)^{-1}(0, .) on the torus. For
// m^2 = 0 the zero mode is projected out and the flag records that.
struct GreenKernel {
  Torus torus;
  double m2 = 0.0;
  bool zero_mode_removed = false;
  std::vector<double> values;  // indexed by row-major offset

  double at(int64_t offset_index) const { return values[offset_index]; }
  double at(int64_t x, int64_t y) const { return values[torus.offset_index(x, y)]; }
  double sum() const;
};

GreenKernel green(const Torus& t, double m2);

// W_N(x) = G(x) - t_N / |Lambda|.
std::vector<double> w_kernel(const GreenKernel& g, double t_N);

// Apply (-Delta + m^2) to a translation kernel, returning the result kernel.
std::vector<double> apply_laplacian_plus_mass(const Torus& t, const std::vector<double>& kernel, double m2);

// Z^d massless Green function at offset x (d >= 3), via torus kernels with the
// zero mode removed and Richardson extrapolation in the side length. Also
// reports a fitted leading constant c_d of G ~ c_d |x|^{-(d-2)} and the
// difference between the two Richardson pairs as a stability measure.
struct ZdGreenRef {
  double value = 0.0;
  double c_d = 0.0;
  double stability = 0.0;
};

ZdGreenRef zd_green_reference(int d, const std::vector<int64_t>& x, int64_t base_side = 64);

}  // namespace arbgas
