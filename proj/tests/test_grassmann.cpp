#include "doctest.h"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "arbgas/exact.hpp"
#include "arbgas/grassmann.hpp"
#include "arbgas/rng.hpp"

using namespace arbgas;

namespace {

GrassmannElement random_element(CounterRng& rng, int gens, int terms, bool even_only) {
  GrassmannElement e;
  for (int i = 0; i < terms; ++i) {
    uint64_t mask = rng.next_u64() & ((uint64_t(1) << gens) - 1);
    if (even_only && (std::popcount(mask) & 1)) mask &= mask - 1;  // drop lowest bit
    double c = 2.0 * rng.next_double() - 1.0;
    e += GrassmannElement::monomial(mask, c);
  }
  return e;
}

double max_term_diff(const GrassmannElement& a, const GrassmannElement& b) {
  GrassmannElement d = a - b;
  return d.max_abs_coeff();
}

}  // namespace

TEST_CASE("anticommutation and product signs") {
  GrassmannElement g1 = GrassmannElement::generator(0);
  GrassmannElement g2 = GrassmannElement::generator(1);
  CHECK(max_term_diff(mul(g1, g2), (-1.0) * mul(g2, g1)) == 0.0);
  CHECK(mul(g1, g1).empty());
}

TEST_CASE("left derivative sign rule and Leibniz") {
  GrassmannElement g1 = GrassmannElement::generator(0);
  GrassmannElement g2 = GrassmannElement::generator(1);
  // d_{g2} (g1 g2) = -g1
  CHECK(max_term_diff(mul(g1, g2).deriv(1), (-1.0) * g1) == 0.0);

  // graded Leibniz: d(AB) = dA * B + (-1)^{|A|} A * dB for homogeneous A
  CounterRng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    int gen = static_cast<int>(rng.next_below(6));
    uint64_t amask = rng.next_u64() & 63;
    GrassmannElement a = GrassmannElement::monomial(amask, 1.0);
    GrassmannElement b = random_element(rng, 6, 5, false);
    double sgn = (std::popcount(amask) & 1) ? -1.0 : 1.0;
    GrassmannElement lhs = mul(a, b).deriv(gen);
    GrassmannElement rhs = mul(a.deriv(gen), b) + sgn * mul(a, b.deriv(gen));
    CHECK(max_term_diff(lhs, rhs) <= 1e-15);
  }
}

TEST_CASE("associativity fuzz") {
  CounterRng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    GrassmannElement a = random_element(rng, 8, 6, false);
    GrassmannElement b = random_element(rng, 8, 6, false);
    GrassmannElement c = random_element(rng, 8, 6, false);
    CHECK(max_term_diff(mul(mul(a, b), c), mul(a, mul(b, c))) <= 1e-13);
  }
}

TEST_CASE("even elements commute") {
  CounterRng rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    GrassmannElement a = random_element(rng, 8, 6, true);
    GrassmannElement b = random_element(rng, 8, 6, true);
    CHECK(max_term_diff(mul(a, b), mul(b, a)) <= 1e-14);
  }
}

TEST_CASE("exp of nilpotent even element") {
  // exp(c g1 g2) = 1 + c g1 g2
  double c = 0.37;
  GrassmannElement a = GrassmannElement::monomial(0b11, c);
  GrassmannElement e = a.exp_even();
  CHECK(e.coeff(0) == doctest::Approx(1.0));
  CHECK(e.coeff(0b11) == doctest::Approx(c));
  CHECK(e.term_count() == 2);

  CHECK_THROWS_AS(GrassmannElement::generator(0).exp_even(), std::invalid_argument);

  // exp(A)*exp(-A) = 1 for random even A
  CounterRng rng(11);
  GrassmannElement A = random_element(rng, 8, 5, true) - GrassmannElement::scalar(0.0);
  GrassmannElement prod = mul(A.exp_even(), ((-1.0) * A).exp_even());
  CHECK(std::abs(prod.coeff(0) - 1.0) <= 1e-12);
  CHECK(max_term_diff(prod, GrassmannElement::scalar(prod.coeff(0))) <= 1e-12);
}

TEST_CASE("berezin calibration and ordered form") {
  // A = xi0 eta0 -> integral 1 (Z of the one-vertex model is 1)
  GrassmannElement a = GrassmannElement::monomial(0b11, 1.0);
  CHECK(a.berezin_full(2) == doctest::Approx(1.0));
  // A = 1 -> 0
  CHECK(GrassmannElement::scalar(1.0).berezin_full(2) == 0.0);
  // ordered form: per-vertex d_eta d_xi, vertices applied in ascending order
  // (rightmost pair first) reproduces berezin_full for any vertex count
  for (int nv : {1, 2, 3}) {
    GrassmannElement full = GrassmannElement::scalar(1.0);
    for (int x = 0; x < nv; ++x) full = mul(full, GrassmannElement::monomial(uint64_t(0b11) << (2 * x), 1.0));
    std::vector<int> order;
    for (int x = nv - 1; x >= 0; --x) {
      order.push_back(2 * x + 1);
      order.push_back(2 * x);
    }
    CHECK(full.berezin_ordered(order, 2 * nv) == doctest::Approx(1.0));
    CHECK(full.berezin_full(2 * nv) == doctest::Approx(1.0));
  }
  // full product with a permuted storage coefficient picks up the parity sign
  GrassmannElement swapped = mul(GrassmannElement::generator(1), GrassmannElement::generator(0));
  CHECK(swapped.berezin_full(2) == doctest::Approx(-1.0));
}

TEST_CASE("H02 normalisation equals forest partition function") {
  for (double beta : {0.25, 1.0, 3.0}) {
    for (double h : {0.0, 0.1, 1.0}) {
      for (const Graph& g : {Graph::single_edge(1.0), Graph::path(3, 1.0), Graph::cycle(3, 1.0),
                             Graph::complete(4, 1.0)}) {
        H02Model model(g, beta, h);
        double zf = partition_function(g, beta, h);
        CHECK(model.Z() == doctest::Approx(zf).epsilon(1e-12));
        CHECK(model.expect(model.one()) == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("H02 basic expectations") {
  // <z_0>_{beta,0} = 0 (Ward at h=0)
  for (const Graph& g : {Graph::single_edge(1.0), Graph::cycle(3, 1.0), Graph::complete(4, 1.0)}) {
    for (double beta : {0.25, 1.0, 3.0}) {
      H02Model model(g, beta, 0.0);
      CHECK(std::abs(model.expect(model.z(0))) <= 1e-13);
    }
  }
  // single edge: -<z0 z1> = beta/(1+beta)
  double beta = 1.8;
  H02Model m(Graph::single_edge(1.0), beta, 0.0);
  CHECK(-m.expect(mul(m.z(0), m.z(1))) == doctest::Approx(beta / (1 + beta)).epsilon(1e-13));
}

TEST_CASE("dictionary identities on named graphs") {
  // single edge at (1, 0.5): <z_0> = P[0<->ghost]
  {
    Graph g = Graph::single_edge(1.0);
    H02Model model(g, 1.0, 0.5);
    CHECK(model.expect(model.z(0)) == doctest::Approx(ghost_probability(g, 1.0, 0.5, 0)).epsilon(1e-12));
  }
  // C3 at (2, 0.3): <xi_0 eta_1> = P[0<->1, 0 not<->ghost]
  {
    Graph g = Graph::cycle(3, 1.0);
    ExactSummary s = exact_summary(g, 2.0, 0.3);
    H02Model model(g, 2.0, 0.3);
    CHECK(model.expect(model.xi_eta(0, 1)) == doctest::Approx(s.tau0[1]).epsilon(1e-12));
  }
  // full report on a few graphs and parameters
  for (const Graph& g : {Graph::single_edge(1.0), Graph::path(3, 1.0), Graph::cycle(4, 1.0)}) {
    for (double beta : {0.25, 3.0}) {
      for (double h : {0.0, 1.0}) {
        DictionaryReport rep = dictionary_check(g, beta, h);
        CHECK(rep.max_abs() <= 1e-11);
      }
    }
  }
}

TEST_CASE("u0.ux relations at h=0") {
  Graph g = Graph::cycle(4, 1.0);
  double beta = 1.4;
  H02Model m(g, beta, 0.0);
  for (int x = 0; x < g.n; ++x) {
    double p = connection_probability(g, beta, 0.0, 0, x);
    CHECK(-m.expect(m.u_dot(0, x)) == doctest::Approx(p).epsilon(1e-12));
    CHECK(-m.expect(mul(m.z(0), m.z(x))) == doctest::Approx(p).epsilon(1e-12));
    CHECK(m.expect(m.xi_eta(0, x)) == doctest::Approx(p).epsilon(1e-12));
    CHECK(1.0 - m.expect(mul(m.xi_eta(0, 0), m.xi_eta(x, x))) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("gaussian convolution: Wick moment, semigroup, factorisation") {
  GeneratorTable table;
  table.n_vertices = 4;
  CounterRng rng(2024);

  auto random_cov = [&](bool block_diagonal) {
    std::vector<std::vector<double>> C(4, std::vector<double>(4, 0.0));
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        if (block_diagonal && ((i < 2) != (j < 2))) continue;
        C[i][j] = C[j][i] = 2.0 * rng.next_double() - 1.0;
      }
    return C;
  };

  // E_C theta psibar_x psi_y = psibar_x psi_y + C_xy
  {
    auto C = random_cov(false);
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        GrassmannElement f = mul(GrassmannElement::generator(table.psibar(x)),
                                 GrassmannElement::generator(table.psi(y)));
        GrassmannElement g = gaussian_convolution(C, f, table);
        CHECK(g.coeff(0) == doctest::Approx(C[x][y]).epsilon(1e-14));
        CHECK(max_term_diff(g - GrassmannElement::scalar(C[x][y]), f) <= 1e-14);
      }
  }

  // E_C theta 1 = 1
  {
    auto C = random_cov(false);
    GrassmannElement one = GrassmannElement::scalar(1.0);
    CHECK(max_term_diff(gaussian_convolution(C, one, table), one) == 0.0);
  }

  // semigroup on random even elements
  for (int trial = 0; trial < 10; ++trial) {
    auto C1 = random_cov(false);
    auto C2 = random_cov(false);
    std::vector<std::vector<double>> C12(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) C12[i][j] = C1[i][j] + C2[i][j];
    GrassmannElement f = random_element(rng, 8, 10, true);
    GrassmannElement lhs = gaussian_convolution(C2, gaussian_convolution(C1, f, table), table);
    GrassmannElement rhs = gaussian_convolution(C12, f, table);
    CHECK(max_term_diff(lhs, rhs) <= 1e-12);
  }

  // finite-range factorisation with block-diagonal C: F1 on {0,1}, F2 on {2,3}
  for (int trial = 0; trial < 10; ++trial) {
    auto C = random_cov(true);
    GrassmannElement f1 = random_element(rng, 4, 6, true);
    GrassmannElement f2_small = random_element(rng, 4, 6, true);
    // shift f2's generators to vertices {2,3}
    GrassmannElement f2;
    for (const auto& t : f2_small.terms()) f2 += GrassmannElement::monomial(t.mask << 4, t.c);
    GrassmannElement lhs = gaussian_convolution(C, mul(f1, f2), table);
    GrassmannElement rhs = mul(gaussian_convolution(C, f1, table), gaussian_convolution(C, f2, table));
    CHECK(max_term_diff(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("size guard on the fermionic model") {
  Graph big = Graph::periodic_box(2, 4, 1.0);  // 16 vertices
  CHECK_THROWS_AS(H02Model(big, 1.0, 0.0), std::invalid_argument);
}
