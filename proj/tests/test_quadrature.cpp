#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tailor/quadrature.hpp"

using namespace tailor;

namespace {

// Test-side oracles, independent of the library path under test.
double shoelace_oracle(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double girard_oracle(const Vec3& a, const Vec3& b, const Vec3& c) {
  auto angle = [](const Vec3& u, const Vec3& v, const Vec3& w) {
    Vec3 d1 = v.cross(u.cross(v));  // tangent at v toward u
    Vec3 d2 = v.cross(w.cross(v));
    d1 = d1 * (-1.0);
    d2 = d2 * (-1.0);
    return std::acos(std::clamp(d1.dot(d2) / (d1.norm() * d2.norm()), -1.0, 1.0));
  };
  double e = angle(c, a, b) + angle(a, b, c) + angle(b, c, a) - kPi;
  double det = a.dot(b.cross(c));
  return det >= 0 ? e : -e;
}

Point sphere_cap_point(std::mt19937& rng, const Vec3& center, double radius) {
  std::uniform_real_distribution<double> u(0, 1);
  double ang = radius * std::sqrt(u(rng));
  double az = 2 * kPi * u(rng);
  Vec3 ref = std::abs(center.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = center.cross(ref).normalized();
  Vec3 e2 = center.cross(e1);
  Vec3 p = center * std::cos(ang) + (e1 * std::cos(az) + e2 * std::sin(az)) * std::sin(ang);
  return {p.x, p.y, p.z};
}

}  // namespace

TEST_CASE("constant sheet integrates to zero") {
  Surface s = Surface::plane();
  SheetMap sheet = [&](double, double) { return s.point(0.3, 0.7); };
  CHECK(integrate_form_over_sheet(s, sheet) == 0.0);
}

TEST_CASE("affine plane sheet over a triangle") {
  Surface s = Surface::plane();
  // Affine sheet spanning (0,0), (1,0), (1,1) positively.
  Point a = s.point(0, 0), b = s.point(1, 0), c = s.point(1, 1);
  SheetMap sheet = ruled_triangle_sheet(s, a, b, c);
  double v = integrate_form_over_sheet(s, sheet, 1e-10);
  CHECK(v == Catch::Approx(shoelace_oracle(a, b, c)).margin(1e-9));
  CHECK(v == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("sphere octant sheet") {
  Surface s = Surface::unit_sphere();
  Point a = s.point(0, 0, 1), b = s.point(1, 0, 0), c = s.point(0, 1, 0);
  double v = integrate_form_over_sheet(s, ruled_triangle_sheet(s, a, b, c), 1e-10);
  // Girard excess oracle: E = 3 * (pi/2) - pi.
  CHECK(v == Catch::Approx(kPi / 2).margin(1e-8));
  CHECK(v == Catch::Approx(girard_oracle(a.vec(), b.vec(), c.vec())).margin(1e-8));
}

TEST_CASE("triangle areas: plane orientation") {
  Surface s = Surface::plane();
  CHECK(geodesic_triangle_area(s, s.point(0, 0), s.point(1, 0), s.point(1, 1)) ==
        Catch::Approx(0.5));
  CHECK(geodesic_triangle_area(s, s.point(0, 0), s.point(1, 1), s.point(1, 0)) ==
        Catch::Approx(-0.5));
}

TEST_CASE("triangle areas: sphere octant and antipodes") {
  Surface s = Surface::unit_sphere();
  CHECK(geodesic_triangle_area(s, s.point(0, 0, 1), s.point(1, 0, 0), s.point(0, 1, 0)) ==
        Catch::Approx(kPi / 2));
  CHECK(geodesic_triangle_area(s, s.point(0, 0, 1), s.point(0, 1, 0), s.point(1, 0, 0)) ==
        Catch::Approx(-kPi / 2));
  CHECK_THROWS_AS(
      geodesic_triangle_area(s, s.point(0, 0, 1), s.point(0, 0, -1), s.point(1, 0, 0)), Error);
}

TEST_CASE("triangle areas: torus uses compatible lifts") {
  Surface s = Surface::flat_torus(1, 1);
  // A small triangle across the seam: lifts give the plain shoelace value.
  Point a = s.point(0.95, 0.1), b = s.point(0.05, 0.1), c = s.point(0.0, 0.2);
  double v = geodesic_triangle_area(s, a, b, c);
  // Lift oracle: a=(0.95,0.1), b=(1.05,0.1), c=(1.0,0.2).
  double oracle = shoelace_oracle({0.95, 0.1, 0}, {1.05, 0.1, 0}, {1.0, 0.2, 0});
  CHECK(v == Catch::Approx(oracle).margin(1e-12));
  CHECK(v > 0);
}

TEST_CASE("phase plane form orientation") {
  Surface s = Surface::phase_plane(1.0);
  // Accelerate from rest to momentum p, then translate in position:
  // (0,0) -> (0,p) -> (x,p) must have positive area.
  double p = 2.0, x = 0.5;
  double v = geodesic_triangle_area(s, s.point(0, 0), s.point(0, p), s.point(x, p));
  CHECK(v == Catch::Approx(p * x / 2));
  double q = integrate_form_over_sheet(
      s, ruled_triangle_sheet(s, s.point(0, 0), s.point(0, p), s.point(x, p)), 1e-10);
  CHECK(q == Catch::Approx(p * x / 2).margin(1e-9));
}

TEST_CASE("sheet integral matches the analytic triangle area on random triangles") {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> u(-1.5, 1.5);

  SECTION("plane") {
    Surface s = Surface::plane();
    for (int i = 0; i < 25; ++i) {
      Point a = s.point(u(rng), u(rng)), b = s.point(u(rng), u(rng)), c = s.point(u(rng), u(rng));
      double analytic = geodesic_triangle_area(s, a, b, c);
      CHECK(analytic == Catch::Approx(shoelace_oracle(a, b, c)).margin(1e-12));
      double sheet = integrate_form_over_sheet(s, ruled_triangle_sheet(s, a, b, c), 1e-9);
      REQUIRE(std::abs(sheet - analytic) < 1e-8);
    }
  }
  SECTION("sphere") {
    Surface s = Surface::unit_sphere();
    for (int i = 0; i < 25; ++i) {
      Point a = sphere_cap_point(rng, {0, 0, 1}, 1.1);
      Point b = sphere_cap_point(rng, {0, 0, 1}, 1.1);
      Point c = sphere_cap_point(rng, {0, 0, 1}, 1.1);
      double analytic = geodesic_triangle_area(s, a, b, c);
      CHECK(analytic == Catch::Approx(girard_oracle(a.vec(), b.vec(), c.vec())).margin(1e-9));
      double sheet = integrate_form_over_sheet(s, ruled_triangle_sheet(s, a, b, c), 1e-9);
      REQUIRE(std::abs(sheet - analytic) < 1e-7);
    }
  }
  SECTION("torus") {
    Surface s = Surface::flat_torus(2.0, 1.0);
    std::uniform_real_distribution<double> v(0.0, 0.2);
    for (int i = 0; i < 25; ++i) {
      double bx = 2 * std::abs(u(rng)), by = std::abs(u(rng));
      Point a = s.point(bx, by), b = s.point(bx + v(rng), by + v(rng)),
            c = s.point(bx + v(rng), by - v(rng));
      double analytic = geodesic_triangle_area(s, a, b, c);
      double sheet = integrate_form_over_sheet(s, ruled_triangle_sheet(s, a, b, c), 1e-9);
      REQUIRE(std::abs(sheet - analytic) < 1e-8);
    }
  }
}

TEST_CASE("midpoint rule converges at second order") {
  Surface s = Surface::unit_sphere();
  Point a = s.point(0, 0, 1), b = s.point(1, 0, 0), c = s.point(0, 1, 0);
  SheetMap sheet = ruled_triangle_sheet(s, a, b, c);
  double exact = kPi / 2;
  double e3 = std::abs(midpoint_form_sum(s, sheet, 3) - exact);
  double e4 = std::abs(midpoint_form_sum(s, sheet, 4) - exact);
  double e5 = std::abs(midpoint_form_sum(s, sheet, 5) - exact);
  CHECK(e3 / e4 >= 3.0);
  CHECK(e4 / e5 >= 3.0);
}

TEST_CASE("refinement limit reports the best value") {
  Surface s = Surface::plane();
  // A wiggly sheet that cannot reach an absurd tolerance.
  SheetMap sheet = [&](double uu, double vv) {
    return s.point(uu + 0.03 * std::sin(21.7 * kPi * vv + 0.4) * std::cos(2.3 * uu),
                   vv + 0.03 * std::sin(17.9 * kPi * uu + 0.7) * std::cos(1.7 * vv));
  };
  try {
    integrate_form_over_sheet(s, sheet, 1e-15, 6);
    FAIL("expected RefinementLimitError");
  } catch (const RefinementLimitError& e) {
    CHECK(std::abs(e.best_value() - 1.0) < 0.05);
    CHECK(e.error_estimate() > 0);
  }
}

TEST_CASE("degenerate curve sheet integrates to zero") {
  Surface s = Surface::unit_sphere();
  // Path out and back along one great circle spans no area.
  Point a = s.point(0, 0, 1), b = s.point(1, 0, 0);
  GeodesicSegment ab = geodesic_between(s, a, b);
  SegmentChain two(s, a, {ab, ab.reversed()});
  SegmentChain pt(s, a, {geodesic_between(s, a, a)});
  double v = integrate_form_over_sheet(s, ruled_sheet(s, two, pt), 1e-9);
  CHECK(std::abs(v) < 1e-9);
}
