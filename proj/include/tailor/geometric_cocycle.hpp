#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tailor/path.hpp"
#include "tailor/quadrature.hpp"

namespace tailor {

using Cplx = std::complex<double>;

// The geometric 2-cocycle induced by a surface's canonical form: pairs of
// paths are weighted by the form integral over the homotopy sheet between
// the concatenated shortest geodesics and the direct chord, reduced mod the
// taille. quantum_n drives the quantized weights when taille > 0; lambda
// drives the continuous family when taille = 0.
struct GeometricCocycle {
  Surface surface;
  int quantum_n = 1;
  double lambda = 1.0;
  double quad_tol = kDefaultQuadTol;

  double taille() const { return surface.taille(); }

  Cplx weight_of(double phase) const {
    double tau = taille();
    if (tau > 0) {
      double ang = 2.0 * kPi * quantum_n * phase / tau;
      return {std::cos(ang), std::sin(ang)};
    }
    return {std::exp(lambda * phase), 0};
  }
  Cplx weight_of(const TailleValue& v) const { return weight_of(v.value); }
};

struct CocycleValue {
  enum class Status { Defined, ZeroProduct, Undefined };
  Status status = Status::Undefined;
  TailleValue value;
  std::string reason;

  bool defined() const { return status == Status::Defined; }
  bool zero() const { return status == Status::ZeroProduct; }

  static CocycleValue zero_product() { return {Status::ZeroProduct, {}, {}}; }
  static CocycleValue undefined(std::string why) {
    return {Status::Undefined, {}, std::move(why)};
  }
  static CocycleValue of(double v, double tau) {
    return {Status::Defined, TailleValue(v, tau), {}};
  }
};

namespace detail {

// Signed form integral enclosed by a closed flat polygon given in lifted
// coordinates (exact; the ruled sheet between two lifted chains with common
// endpoints integrates to this).
inline double flat_loop_form_area(const Surface& s, const std::vector<Vec3>& loop) {
  double twice = 0;
  for (size_t i = 0; i < loop.size(); ++i) {
    const Vec3& p = loop[i];
    const Vec3& q = loop[(i + 1) % loop.size()];
    twice += p.x * q.y - p.y * q.x;
  }
  return 0.5 * twice * s.flat_form_sign();
}

// Largest connector distance over a coarse scan of corresponding points;
// ruled sheets degenerate when this approaches pi on the sphere.
inline double max_connector_distance(const Surface& s, const SegmentChain& a,
                                     const SegmentChain& b, int scan = 64) {
  double worst = 0;
  for (int i = 0; i <= scan; ++i) {
    double u = static_cast<double>(i) / scan;
    worst = std::max(worst, distance(s, a.at_fraction(u), b.at_fraction(u)));
  }
  return worst;
}

// Quadrature value of the ruled sheet between two sphere chains; nullopt
// when a connector degenerates or refinement stalls badly.
inline std::optional<double> sphere_ruled_value(const Surface& s, const SegmentChain& a,
                                                const SegmentChain& b, double tol) {
  if (max_connector_distance(s, a, b) > kPi - 0.05) return std::nullopt;
  try {
    SheetIntegral r = ruled_sheet_integral(s, a, b, tol);
    if (!r.converged && r.error_estimate > 1e-6) return std::nullopt;
    return r.value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonUniqueGeodesic) return std::nullopt;
    throw;
  }
}

// Sheet value between [pre-chord + side] and the end-chord anchored at a fan
// point. Chords from the fan are shortest geodesics.
inline std::optional<double> fan_panel(const Surface& s, const Point& fan, const Point& x,
                                       const Point& y,
                                       const std::vector<GeodesicSegment>& side,
                                       double tol) {
  auto cfx = maybe_geodesic_between(s, fan, x);
  auto cfy = maybe_geodesic_between(s, fan, y);
  if (!cfx || !cfy) return std::nullopt;
  std::vector<GeodesicSegment> longway{*cfx};
  longway.insert(longway.end(), side.begin(), side.end());
  SegmentChain chain1(s, fan, std::move(longway));
  SegmentChain chain2(s, fan, {*cfy});
  return sphere_ruled_value(s, chain1, chain2, tol);
}

inline std::vector<Point> fan_candidates(const Surface& s, const Point& a, const Point& b,
                                         const Point& c) {
  std::vector<Point> out;
  Vec3 sum = a.vec() + b.vec() + c.vec();
  if (sum.norm() > 1e-6) {
    Vec3 m = sum.normalized();
    out.push_back({m.x, m.y, m.z});
    out.push_back({-m.x, -m.y, -m.z});
  }
  for (Vec3 v : {Vec3{0, 0, 1}, Vec3{0, 0, -1}, Vec3{1, 0, 0}, Vec3{-1, 0, 0},
                 Vec3{0, 1, 0}, Vec3{0, -1, 0}})
    out.push_back({v.x, v.y, v.z});
  return out;
}

// Sheet integral, modulo the taille, between the two-sided chain
// [side_ab + side_bc] and side_ac on the sphere. Falls back to a fan
// decomposition when the direct ruling degenerates; the fan panel sum has
// the same boundary, so it differs from any homotopy sheet by an element of
// tau Z.
inline std::optional<double> sphere_triangle_value(const Surface& s, const Point& a,
                                                   const Point& b, const Point& c,
                                                   const GeodesicSegment& side_ab,
                                                   const GeodesicSegment& side_bc,
                                                   const GeodesicSegment& side_ac,
                                                   double tol) {
  SegmentChain longway(s, a, {side_ab, side_bc});
  SegmentChain chord(s, a, {side_ac});
  if (auto v = sphere_ruled_value(s, longway, chord, tol)) return v;
  for (const Point& fan : fan_candidates(s, a, b, c)) {
    auto pab = fan_panel(s, fan, a, b, {side_ab}, tol);
    if (!pab) continue;
    auto pbc = fan_panel(s, fan, b, c, {side_bc}, tol);
    if (!pbc) continue;
    auto pca = fan_panel(s, fan, c, a, {side_ac.reversed()}, tol);
    if (!pca) continue;
    return *pab + *pbc + *pca;
  }
  return std::nullopt;
}

// Triangle value for the chord triangle of a pair of paths, with homotopy
// classes carried by the chords themselves. Exact on flat surfaces.
inline std::optional<double> chord_triangle_value(const Surface& s,
                                                  const GeodesicSegment& zeta,
                                                  const GeodesicSegment& zeta_prime,
                                                  const GeodesicSegment& zeta_sec,
                                                  double tol) {
  if (s.flat()) {
    Vec3 origin{zeta.start.x, zeta.start.y, 0};
    Vec3 v1 = origin + zeta.lift_displacement();
    Vec3 v2 = v1 + zeta_prime.lift_displacement();
    return flat_loop_form_area(s, {origin, v1, v2});
  }
  return sphere_triangle_value(s, zeta.start, zeta.end, zeta_prime.end, zeta, zeta_prime,
                               zeta_sec, tol);
}

}  // namespace detail

// The geometric cocycle on a pair of paths: Zero when the endpoints do not
// match; Undefined when one of the three shortest geodesics (of the paths
// and of their concatenation) fails to be unique, or the sheet cannot be
// evaluated; otherwise the sheet integral reduced mod the taille.
inline CocycleValue cocycle_value(const GeometricCocycle& cx, const Path& p, const Path& q) {
  const Surface& s = cx.surface;
  if (!p.surface().same_as(s) || !q.surface().same_as(s))
    raise(ErrorCode::InvalidInput, "paths live on a different surface");
  if (distance(s, p.end(), q.start()) > kPointTol) return CocycleValue::zero_product();

  auto hint = [&](std::array<int, 2> w) -> std::optional<std::array<int, 2>> {
    if (s.is_torus()) return w;
    return std::nullopt;
  };
  auto zeta = maybe_geodesic_between(s, p.start(), p.end(), hint(p.winding()));
  if (!zeta) return CocycleValue::undefined("no unique shortest geodesic for the first path");
  auto zeta_prime = maybe_geodesic_between(s, q.start(), q.end(), hint(q.winding()));
  if (!zeta_prime)
    return CocycleValue::undefined("no unique shortest geodesic for the second path");
  std::array<int, 2> wsum{p.winding()[0] + q.winding()[0], p.winding()[1] + q.winding()[1]};
  auto zeta_sec = maybe_geodesic_between(s, p.start(), q.end(), hint(wsum));
  if (!zeta_sec)
    return CocycleValue::undefined("no unique shortest geodesic for the concatenation");

  auto v = detail::chord_triangle_value(s, *zeta, *zeta_prime, *zeta_sec, cx.quad_tol / 8);
  if (!v) return CocycleValue::undefined("homotopy sheet could not be evaluated");
  return CocycleValue::of(*v, cx.taille());
}

struct ResidualResult {
  bool defined = false;
  double residual = 0;
  std::string reason;
};

// Distance of (delta omega)(p, q, r) from zero in R/tau R; a zero product
// anywhere makes the whole coboundary vanish by the 0-cohomology convention.
inline ResidualResult cocycle_residual(const GeometricCocycle& cx, const Path& p,
                                       const Path& q, const Path& r) {
  const Surface& s = cx.surface;
  bool pq = distance(s, p.end(), q.start()) <= kPointTol;
  bool qr = distance(s, q.end(), r.start()) <= kPointTol;
  if (!pq || !qr) return {true, 0.0, "zero product"};

  auto term = [&](const Path& x, const Path& y) -> std::optional<double> {
    CocycleValue v = cocycle_value(cx, x, y);
    if (v.defined()) return v.value.value;
    if (v.zero()) return 0.0;
    return std::nullopt;
  };
  std::optional<Path> pq_path = concat(p, q);
  std::optional<Path> qr_path = concat(q, r);
  if (!pq_path || !qr_path) return {true, 0.0, "zero product"};

  auto t1 = term(q, r);
  auto t2 = term(*pq_path, r);
  auto t3 = term(p, *qr_path);
  auto t4 = term(p, q);
  if (!t1 || !t2 || !t3 || !t4) return {false, 0.0, "a constituent value is undefined"};
  double delta = *t1 - *t2 + *t3 - *t4;
  return {true, TailleValue(delta, cx.taille()).distance_to(0.0), {}};
}

}  // namespace tailor
