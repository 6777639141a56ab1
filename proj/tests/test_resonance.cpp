#include <catch2/catch_amalgamated.hpp>

#include "giqs/resonance.hpp"

using namespace giqs;

TEST_CASE("resonance relation on the torus, worked cases") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p{0.5, 0.3, 5.0};
  VecI i10(2);
  i10 << 10, 0;
  ActionPoint a = torus.make_point(i10);

  VecI k01(2), k10(2);
  k01 << 0, 1;
  k10 << 1, 0;
  // |w.k| = 0 < 10^0.5, |k| = 1 <= 10^0.3, |a| = 10 >= 5
  CHECK(is_resonant(torus, a, k01, p));
  // |w.k| = 20 >= 10^0.5
  CHECK(!is_resonant(torus, a, k10, p));

  // |a| < R gates everything
  VecI i3(2);
  i3 << 3, 0;
  ActionPoint small = torus.make_point(i3);
  for (const VecI& k : integer_ball(2, 3.0)) CHECK(!is_resonant(torus, small, k, p));
}

TEST_CASE("resonance is even in k") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p{0.5, 0.4, 4.0};
  Rng rng(3);
  for (int it = 0; it < 200; ++it) {
    VecI idx(2);
    idx << rng.uniform_int(-12, 12), rng.uniform_int(-12, 12);
    if (idx.cast<double>().norm() < 1) continue;
    ActionPoint a = torus.make_point(idx);
    VecI k(2);
    k << rng.uniform_int(-3, 3), rng.uniform_int(-3, 3);
    if (k.cast<double>().norm() == 0) continue;
    CHECK(is_resonant(torus, a, k, p) == is_resonant(torus, a, VecI(-k), p));
  }
}

TEST_CASE("module of an on-axis point is the perpendicular line") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p{0.5, 0.3, 5.0};
  VecI i10(2);
  i10 << 10, 0;
  ResonanceModule mod = resonance_module(torus, torus.make_point(i10), p);
  REQUIRE(mod.rank == 1);
  CHECK(mod.basis(0, 0) == 0);
  CHECK(mod.basis(0, 1) == 1);
}

TEST_CASE("generic point is nonresonant for small delta") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p{0.1, 0.25, 8.0};
  VecI idx(2);
  idx << 7, 6;
  ActionPoint a = torus.make_point(idx);
  // brute force: no k within the cutoff satisfies the relation
  for (const VecI& k : integer_ball(2, std::pow(a.norm, p.mu))) {
    double wk = std::abs(2.0 * a.point.dot(k.cast<double>()));
    double thr = std::pow(a.norm, p.delta) * k.cast<double>().norm();
    CHECK(wk >= thr);
  }
  CHECK(resonance_module(torus, a, p).rank == 0);
}

TEST_CASE("module canonicity across equivalent generating sets") {
  // resonant sets {(0,2)} and {(0,1),(0,-2)} span the same line
  ResonanceModule m1 = module_from_vectors({(VecI(2) << 0, 2).finished()}, 2);
  ResonanceModule m2 = module_from_vectors(
      {(VecI(2) << 0, 1).finished(), (VecI(2) << 0, -2).finished()}, 2);
  CHECK(m1 == m2);
  REQUIRE(m1.rank == 1);
  CHECK(m1.basis(0, 1) == 1);
}
