#include <catch2/catch_amalgamated.hpp>

#include "giqs/lattice.hpp"
#include "giqs/resonance.hpp"

using namespace giqs;

namespace {

// independent brute-force annulus scan over the bounding integer box
std::vector<VecI> brute_annulus(const GiqsModel& m, double r_min, double r_max) {
  std::vector<VecI> out;
  int lim = static_cast<int>(r_max) + 2;
  if (m.d == 1) {
    for (int i = -lim; i <= lim; ++i) {
      VecI idx(1);
      idx << i;
      VecD p = idx.cast<double>() + m.kappa;
      double r = p.norm();
      if (r >= r_min && r <= r_max && m.cone.contains(p)) out.push_back(idx);
    }
  } else {
    for (int i = -lim; i <= lim; ++i)
      for (int j = -lim; j <= lim; ++j) {
        VecI idx(2);
        idx << i, j;
        VecD p = idx.cast<double>() + m.kappa;
        double r = p.norm();
        if (r >= r_min && r <= r_max && m.cone.contains(p)) out.push_back(idx);
      }
  }
  return out;
}

}  // namespace

TEST_CASE("torus enumeration: disc of radius 2 has 13 points") {
  GiqsModel torus = make_torus_identity(2);
  auto pts = enumerate_lattice(torus, 0.0, 2.0);
  REQUIRE(pts.size() == 13);  // direct loop over |a_i| <= 2 with a1^2+a2^2 <= 4
  // lexicographic order of the index
  for (size_t i = 1; i < pts.size(); ++i) REQUIRE(lex_less(pts[i - 1].index, pts[i].index));
}

TEST_CASE("sphere enumeration: shifted half-integers") {
  GiqsModel sph = make_sphere(2);
  auto pts = enumerate_lattice(sph, 0.0, 3.0);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].point[0] == 0.5);
  CHECK(pts[1].point[0] == 1.5);
  CHECK(pts[2].point[0] == 2.5);
}

TEST_CASE("anharmonic enumeration respects the half-plane cone") {
  GiqsModel an = make_anharmonic(AnharmonicParams{});
  auto pts = enumerate_lattice(an, 0.0, 1.5);
  for (const auto& p : pts) {
    CHECK(p.point[0] >= 0.0);
    if (p.point[1] < 0.0) CHECK(p.point[0] >= std::abs(p.point[1]));
  }
  // a2 < 0 with a1 < |a2| excluded: (1/2, -1) violates and must be absent
  for (const auto& p : pts) CHECK(!(p.point[0] == 0.5 && p.point[1] == -1.0));
}

TEST_CASE("enumeration completeness equals a brute-force box scan") {
  for (auto mk : {make_torus_identity(2), make_sphere(3), make_anharmonic(AnharmonicParams{})}) {
    auto pts = enumerate_lattice(mk, 1.0, 7.3);
    auto ref = brute_annulus(mk, 1.0, 7.3);
    REQUIRE(pts.size() == ref.size());
    for (size_t i = 0; i < ref.size(); ++i) CHECK(pts[i].index == ref[i]);
  }
}

TEST_CASE("enumeration budget rejection") {
  GiqsModel torus = make_torus_identity(2);
  CHECK_THROWS_AS(enumerate_lattice(torus, 0.0, 1e6, 16.0), BudgetError);
}

TEST_CASE("torus h and gradient, identity metric") {
  GiqsModel torus = make_torus_identity(2);
  VecD a(2);
  a << 3, 4;
  CHECK(h_value(torus, a) == 25.0);
  VecD w = gradient_w(torus, a);
  CHECK(w[0] == 6.0);
  CHECK(w[1] == 8.0);
}

TEST_CASE("torus rational metric is exact") {
  // g = [[1, 1/2], [1/2, 2]]
  std::vector<std::vector<Rational>> g = {{Rational(1), Rational(1, 2)},
                                          {Rational(1, 2), Rational(2)}};
  GiqsModel torus = make_torus(2, g);
  VecI idx(2);
  idx << 3, -1;
  // 9 + 2*(1/2)*3*(-1) + 2*1 = 9 - 3 + 2 = 8
  CHECK(torus.omega_exact(idx) == Rational(8));
  CHECK(h_value(torus, idx.cast<double>()) == 8.0);
}

TEST_CASE("SU(2) eigenvalues match the Casimir oracle") {
  GiqsModel su2 = make_su2();
  // highest weight m irrep: -Delta eigenvalue m(m+2)/4 at a = m+1
  double F = 0.25;  // sum of Gram entries for |f1|^2 = 1/4
  for (int mm = 0; mm <= 10; ++mm) {
    VecD a = VecD::Constant(1, mm + 1.0);
    double casimir = mm * (mm + 2.0) / 4.0;
    CHECK(h_value(su2, a) - F == Catch::Approx(casimir).margin(1e-12));
  }
  VecD a2 = VecD::Constant(1, 2.0);
  CHECK(h_value(su2, a2) == Catch::Approx(1.0));
}

TEST_CASE("Lie gradient is the quadratic-form gradient") {
  LieGroupParams lp;
  lp.weights = (MatD(2, 2) << 1.0, 0.0, 0.5, 1.0).finished();
  GiqsModel lie = make_lie(lp);
  MatD gram = lp.weights * lp.weights.transpose();
  Rng rng(7);
  for (int it = 0; it < 20; ++it) {
    VecD a(2);
    a << rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0);
    VecD w = gradient_w(lie, a);
    VecD expect = 2.0 * gram * a;
    CHECK((w - expect).norm() < 1e-12);
  }
}

TEST_CASE("gradients agree with finite differences of h") {
  std::vector<GiqsModel> models = {make_torus_identity(2), make_sphere(2), make_su2()};
  Rng rng(11);
  for (const auto& m : models) {
    for (int it = 0; it < 25; ++it) {
      VecD a = rng.unit_vector(m.d) * rng.uniform(2.0, 9.0);
      if (!m.cone.contains(a)) a = -a;
      if (!m.cone.contains(a)) continue;
      VecD w = gradient_w(m, a);
      VecD fd(m.d);
      double step = 1e-6 * a.norm();
      for (int i = 0; i < m.d; ++i) {
        VecD ap = a, am = a;
        ap[i] += step;
        am[i] -= step;
        fd[i] = (m.h(ap) - m.h(am)) / (2 * step);
      }
      CHECK((w - fd).norm() <= 1e-5 * w.norm());
    }
  }
}

TEST_CASE("homogeneity at infinity on random rays") {
  std::vector<GiqsModel> models = {make_torus_identity(2), make_sphere(2), make_su2(),
                                   make_anharmonic(AnharmonicParams{2})};
  Rng rng(13);
  for (const auto& m : models) {
    int checked = 0;
    int want = m.kind == "anharmonic" ? 25 : 100;  // quadrature-backed model is slower
    while (checked < want) {
      VecD a = rng.unit_vector(m.d) * rng.uniform(1.5, 4.0);
      if (!m.cone.contains(a) || a.norm() < std::max(1.0, m.r_hom)) continue;
      // stay clear of the cone boundary so scaled finite differences stay inside
      if (m.kind == "anharmonic" && (a[0] < 0.15 || a[0] + a[1] < 0.15)) continue;
      ++checked;
      double base = m.h(a);
      for (double lam : {1.5, 2.0, 4.0}) {
        double lhs = m.h(lam * a);
        double rhs = std::pow(lam, m.homogeneity) * base;
        CHECK(std::abs(lhs - rhs) <= 1e-6 * std::abs(lhs));
      }
    }
  }
}

TEST_CASE("multiplicities") {
  GiqsModel torus = make_torus_identity(2);
  VecI i2(2);
  i2 << 5, -3;
  CHECK(multiplicity(torus, torus.make_point(i2)) == 1);

  GiqsModel sph = make_sphere(2);
  VecI j2 = VecI::Constant(1, 2);  // a = 5/2
  CHECK(multiplicity(sph, sph.make_point(j2)) == 5);
  VecI j0 = VecI::Constant(1, 0);  // a = 1/2
  CHECK(multiplicity(sph, sph.make_point(j0)) == 1);
}

TEST_CASE("sphere spectrum identity a^2 - ((n-1)/2)^2 = j(j+n-1)") {
  for (int n : {2, 3, 4}) {
    GiqsModel sph = make_sphere(n);
    for (int j = 0; j <= 50; ++j) {
      VecI idx = VecI::Constant(1, j);
      ActionPoint a = sph.make_point(idx);
      double lhs = h_value(sph, a.point) - 0.25 * (n - 1.0) * (n - 1.0);
      CHECK(lhs == Catch::Approx(static_cast<double>(j) * (j + n - 1.0)).margin(1e-9));
    }
  }
}

TEST_CASE("k0 weights are bracket-equivalent") {
  std::vector<GiqsModel> models = {make_torus_identity(2), make_sphere(2), make_su2(),
                                   make_anharmonic(AnharmonicParams{2})};
  for (const auto& m : models) {
    double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0;
    for (const ActionPoint& a : enumerate_lattice(m, 1.0, 12.0)) {
      double ratio = m.k0(a) / jbracket(a.norm);
      c1 = std::min(c1, ratio);
      c2 = std::max(c2, ratio);
    }
    INFO(m.kind << ": c1=" << c1 << " c2=" << c2);
    CHECK(c1 > 0.0);
    CHECK(c2 < 10.0);
  }
}

TEST_CASE("out-of-domain evaluations are rejected") {
  GiqsModel an = make_anharmonic(AnharmonicParams{});
  VecD outside(2);
  outside << 0.5, -2.0;  // violates a1 >= |a2|
  CHECK_THROWS_AS(h_value(an, outside), DomainError);
  VecD small(2);
  small << 0.3, 0.1;  // below the regularization radius
  CHECK_THROWS_AS(h_value(an, small), DomainError);
}
