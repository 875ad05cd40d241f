#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "arbgas/forest.hpp"
#include "arbgas/rng.hpp"

using namespace arbgas;

TEST_CASE("forest weight direct substitution") {
  Graph p3 = Graph::path(3, 1.0);
  ForestState f(p3);

  // empty forest, beta=2, h=0 -> 1
  CHECK(f.weight(2.0, 0.0).value() == doctest::Approx(1.0).epsilon(1e-15));

  // one edge {0,1}, beta=2, h=0.5 -> 2 * (1 + 2*0.5) * (1 + 0.5) = 6
  REQUIRE(f.toggle(0).kind == ToggleKind::Added);
  CHECK(f.weight(2.0, 0.5).value() == doctest::Approx(6.0).epsilon(1e-14));

  // spanning tree of C3 at h=0 -> beta^2
  Graph c3 = Graph::cycle(3, 1.0);
  ForestState g(c3);
  g.toggle(0);
  g.toggle(1);
  CHECK(g.weight(1.7, 0.0).value() == doctest::Approx(1.7 * 1.7).epsilon(1e-14));
}

TEST_CASE("weight log form matches factored form") {
  Graph g = Graph::periodic_box(2, 3, 1.0);
  ForestState f(g);
  CounterRng rng(7);
  for (int i = 0; i < 200; ++i) f.toggle(static_cast<int>(rng.next_below(g.edge_count())));
  for (double beta : {0.3, 1.0, 2.5}) {
    for (double h : {0.0, 0.2, 1.0}) {
      ForestWeight w = f.weight(beta, h);
      double direct = 1.0;
      for (int i = 0; i < w.edge_count; ++i) direct *= beta;
      for (int s : w.tree_sizes) direct *= 1.0 + h * s;
      CHECK(w.value() == doctest::Approx(direct).epsilon(1e-14));
    }
  }
}

TEST_CASE("toggle semantics on small graphs") {
  Graph c3 = Graph::cycle(3, 1.0);
  ForestState f(c3);

  ToggleOutcome t0 = f.toggle(0);
  CHECK(t0.kind == ToggleKind::Added);
  CHECK(t0.size_a == 2);

  // forest {01}: toggling 01 removes and splits into (1,1)
  ToggleOutcome t1 = f.toggle(0);
  CHECK(t1.kind == ToggleKind::Removed);
  CHECK(t1.size_a == 1);
  CHECK(t1.size_b == 1);

  // forest {01, 12}: toggling 02 closes the triangle
  f.toggle(0);
  f.toggle(1);
  ToggleOutcome t2 = f.toggle(2);
  CHECK(t2.kind == ToggleKind::Rejected);
  CHECK(f.edge_count() == 2);
}

TEST_CASE("tree_of bookkeeping on P3") {
  Graph p3 = Graph::path(3, 1.0);
  ForestState f(p3);
  f.toggle(0);  // {01}
  CHECK(f.component(0) == f.component(1));
  CHECK(f.tree_size(0) == 2);
  CHECK(f.tree_size(2) == 1);
  CHECK(f.component(2) != f.component(0));
  f.toggle(1);  // {01,12}
  CHECK(f.tree_size(0) == 3);
  CHECK(f.tree_size(1) == 3);
  CHECK(f.tree_size(2) == 3);
}

TEST_CASE("acyclicity and size tables survive fuzzing") {
  Graph g = Graph::periodic_box(2, 4, 1.0);  // 16 vertices, 32 edges
  ForestState f(g);
  CounterRng rng(123);
  int checks = 0;
  for (int step = 0; step < 100000; ++step) {
    int e = static_cast<int>(rng.next_below(g.edge_count()));
    if (f.edge_present(e)) {
      auto [su, sv] = f.split_sizes(e);
      ToggleOutcome out = f.toggle(e);
      CHECK(out.kind == ToggleKind::Removed);
      CHECK(out.size_a == su);
      CHECK(out.size_b == sv);
    } else {
      f.toggle(e);
    }
    if (step % 1000 == 0) {
      CHECK(f.check_consistency());
      ++checks;
    }
  }
  CHECK(checks == 100);
  CHECK(f.check_consistency());
}

TEST_CASE("removal weight ratio identity on random states") {
  Graph g = Graph::periodic_box(2, 3, 1.0);
  ForestState f(g);
  CounterRng rng(99);
  double beta = 1.3, h = 0.4;
  for (int step = 0; step < 2000; ++step) {
    int e = static_cast<int>(rng.next_below(g.edge_count()));
    if (!f.edge_present(e)) {
      f.toggle(e);
      continue;
    }
    double w_before = f.weight(beta, h).value();
    int total = f.tree_size(g.edges[e].u);
    ToggleOutcome out = f.toggle(e);
    double w_after = f.weight(beta, h).value();
    double expected = (1.0 + h * out.size_a) * (1.0 + h * out.size_b) / (beta * (1.0 + h * total));
    CHECK(w_after / w_before == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("snapshot round trip") {
  Graph g = Graph::periodic_box(2, 3, 1.0);
  ForestState f(g);
  CounterRng rng(5);
  for (int i = 0; i < 64; ++i) f.toggle(static_cast<int>(rng.next_below(g.edge_count())));
  std::vector<int> edges = f.edge_list();
  ForestState f2(g);
  f2.load_edges(edges);
  CHECK(f2.edge_list() == edges);
  CHECK(f2.check_consistency());
  for (int v = 0; v < g.n; ++v) CHECK(f2.tree_size(v) == f.tree_size(v));
}
