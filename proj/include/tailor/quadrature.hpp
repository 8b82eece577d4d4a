#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "tailor/geometry.hpp"

namespace tailor {

// A parameterized sheet: a map from the unit square into a surface.
using SheetMap = std::function<Point(double u, double v)>;

// Local difference of surface points as an ambient tangent-ish vector.
// On the torus the difference is reduced per component to the principal
// representative, so small steps across the seam stay small.
inline Vec3 surface_difference(const Surface& s, const Point& to, const Point& from) {
  switch (s.kind()) {
    case SurfaceKind::EuclideanPlane:
    case SurfaceKind::PhasePlane:
      return {to.x - from.x, to.y - from.y, 0};
    case SurfaceKind::FlatTorus:
      return {Surface::principal(to.x - from.x, s.period_x()),
              Surface::principal(to.y - from.y, s.period_y()), 0};
    case SurfaceKind::UnitSphere:
      return to.vec() - from.vec();
  }
  return {0, 0, 0};
}

// Composite tensor-midpoint sum of the pulled-back form at dyadic depth d
// (2^d x 2^d cells). Per cell the pullback is evaluated at the midpoint with
// cross-chord differences, which is exact for affine flat sheets and second
// order in general.
inline double midpoint_form_sum(const Surface& s, const SheetMap& sheet, int depth) {
  const int m = 1 << depth;
  const double h = 1.0 / m;
  // Grid caches: u-chord endpoints at v midpoints, v-chord endpoints at u
  // midpoints, and the cell midpoints themselves.
  std::vector<Point> uchord((m + 1) * m);  // S(i*h, (j+.5)h)
  std::vector<Point> vchord(m * (m + 1));  // S((i+.5)h, j*h)
  std::vector<Point> mid(m * m);           // S((i+.5)h, (j+.5)h)
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j < m; ++j) uchord[i * m + j] = sheet(i * h, (j + 0.5) * h);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= m; ++j) vchord[i * (m + 1) + j] = sheet((i + 0.5) * h, j * h);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) mid[i * m + j] = sheet((i + 0.5) * h, (j + 0.5) * h);

  double sum = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Vec3 du = surface_difference(s, uchord[(i + 1) * m + j], uchord[i * m + j]);
      Vec3 dv = surface_difference(s, vchord[i * (m + 1) + j + 1], vchord[i * (m + 1) + j]);
      sum += s.form(mid[i * m + j], du, dv);
    }
  }
  return sum;
}

struct SheetIntegral {
  double value = 0;           // Richardson-extrapolated once converged
  double error_estimate = 0;  // |I_k - I_{k-1}| / 3
  int depth = 0;
  bool converged = false;
};

class RefinementLimitError : public Error {
 public:
  RefinementLimitError(double value, double estimate)
      : Error(ErrorCode::RefinementLimit, "quadrature refinement limit reached"),
        value_(value), estimate_(estimate) {}
  double best_value() const { return value_; }
  double error_estimate() const { return estimate_; }

 private:
  double value_, estimate_;
};

inline constexpr double kDefaultQuadTol = 1e-8;
inline constexpr int kMaxQuadDepth = 12;

// Integral of the canonical 2-form pulled back over the unit square, by
// tensor midpoint quadrature with dyadic refinement until the Richardson
// error estimate of the extrapolated value drops below tol. Degenerate
// sheets yield 0.
inline SheetIntegral integrate_form_over_sheet_detail(const Surface& s, const SheetMap& sheet,
                                                      double tol = kDefaultQuadTol,
                                                      int max_depth = kMaxQuadDepth,
                                                      int min_depth = 3) {
  if (tol <= 0) raise(ErrorCode::InvalidInput, "quadrature tol must be > 0");
  min_depth = std::min(std::max(min_depth, 1), max_depth - 1);
  double prev = midpoint_form_sum(s, sheet, min_depth);
  double cur = midpoint_form_sum(s, sheet, min_depth + 1);
  double extrapolated = cur + (cur - prev) / 3.0;
  SheetIntegral out;
  out.depth = min_depth + 1;
  out.value = extrapolated;
  out.error_estimate = std::abs(cur - prev) / 3.0;
  for (int d = min_depth + 2; d <= max_depth; ++d) {
    prev = cur;
    cur = midpoint_form_sum(s, sheet, d);
    double next_extrapolated = cur + (cur - prev) / 3.0;
    double est = std::abs(next_extrapolated - extrapolated);
    extrapolated = next_extrapolated;
    out.depth = d;
    out.value = extrapolated;
    out.error_estimate = est;
    if (est < tol) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

inline double integrate_form_over_sheet(const Surface& s, const SheetMap& sheet,
                                        double tol = kDefaultQuadTol,
                                        int max_depth = kMaxQuadDepth) {
  SheetIntegral r = integrate_form_over_sheet_detail(s, sheet, tol, max_depth);
  if (!r.converged) throw RefinementLimitError(r.value, r.error_estimate);
  return r.value;
}

namespace detail {

inline double shoelace2(const Vec3& d1, const Vec3& d2) {
  return 0.5 * (d1.x * d2.y - d1.y * d2.x);
}

// Unsigned spherical excess by l'Huilier's formula.
inline double spherical_excess(const Vec3& a, const Vec3& b, const Vec3& c) {
  double sa = std::atan2(b.cross(c).norm(), b.dot(c));
  double sb = std::atan2(c.cross(a).norm(), c.dot(a));
  double sc = std::atan2(a.cross(b).norm(), a.dot(b));
  double sp = 0.5 * (sa + sb + sc);
  double t = std::tan(0.5 * sp) * std::tan(0.5 * (sp - sa)) *
             std::tan(0.5 * (sp - sb)) * std::tan(0.5 * (sp - sc));
  return 4.0 * std::atan(std::sqrt(std::max(0.0, t)));
}

}  // namespace detail

// Signed area (with respect to the canonical form) of the geodesic triangle
// spanned by a, b, c in that order. Plane/phase plane: shoelace against the
// form orientation; sphere: oriented spherical excess; torus: shoelace on
// lifts that follow the shortest geodesics a->b->c.
inline double geodesic_triangle_area(const Surface& s, const Point& a, const Point& b,
                                     const Point& c) {
  switch (s.kind()) {
    case SurfaceKind::EuclideanPlane:
    case SurfaceKind::PhasePlane: {
      Vec3 d1{b.x - a.x, b.y - a.y, 0};
      Vec3 d2{c.x - a.x, c.y - a.y, 0};
      return s.flat_form_sign() * detail::shoelace2(d1, d2);
    }
    case SurfaceKind::FlatTorus: {
      GeodesicSegment gab = geodesic_between(s, a, b);
      GeodesicSegment gbc = geodesic_between(s, b, c);
      geodesic_between(s, c, a);  // uniqueness of the closing side
      Vec3 d1 = gab.lift_displacement();
      Vec3 d2 = d1 + gbc.lift_displacement();
      return s.flat_form_sign() * detail::shoelace2(d1, d2);
    }
    case SurfaceKind::UnitSphere: {
      Vec3 va = a.vec(), vb = b.vec(), vc = c.vec();
      for (auto [u, v] : {std::pair{va, vb}, {vb, vc}, {vc, va}}) {
        if (std::atan2(u.cross(v).norm(), u.dot(v)) > kPi - kAntipodalTol)
          raise(ErrorCode::NonUniqueGeodesic, "triangle has an antipodal side");
      }
      double excess = detail::spherical_excess(va, vb, vc);
      if (excess == 0) return 0;
      double det = va.dot(vb.cross(vc));
      double sign = det > 0 ? 1.0 : (det < 0 ? -1.0 : 0.0);
      return s.form_scale() * sign * excess;
    }
  }
  return 0;
}

// An arclength-normalized chain of geodesic segments. On flat surfaces
// evaluation is in lifted (unreduced) coordinates anchored at the chain
// start, so ruled sheets between chains with a common start stay within one
// homotopy class.
class SegmentChain {
 public:
  SegmentChain(const Surface& s, Point anchor, std::vector<GeodesicSegment> segs)
      : surface_(s), anchor_(anchor), segments_(std::move(segs)) {
    cumulative_.reserve(segments_.size());
    double acc = 0;
    for (const auto& g : segments_) {
      acc += g.length;
      cumulative_.push_back(acc);
    }
    total_ = acc;
  }

  double total_length() const { return total_; }
  const Surface& surface() const { return surface_; }

  // Interior arclength fractions where the chain changes segment.
  std::vector<double> breakpoint_fractions() const {
    std::vector<double> out;
    if (total_ <= 0) return out;
    for (size_t i = 0; i + 1 < cumulative_.size(); ++i)
      out.push_back(cumulative_[i] / total_);
    return out;
  }

  // Point at arclength fraction t in [0, 1] (lifted coordinates when flat).
  Point at_fraction(double t) const {
    if (total_ == 0 || segments_.empty()) return anchor_;
    double target = std::min(std::max(t, 0.0), 1.0) * total_;
    if (!surface_.flat()) {
      for (size_t i = 0; i < segments_.size(); ++i) {
        if (target <= cumulative_[i] || i + 1 == segments_.size()) {
          double local = target - (i ? cumulative_[i - 1] : 0.0);
          local = std::min(local, segments_[i].length);
          return segments_[i].evaluate(local);
        }
      }
    }
    // Flat: accumulate lift displacements from the anchor.
    double xl = anchor_.x, yl = anchor_.y;
    for (size_t i = 0; i < segments_.size(); ++i) {
      double start = i ? cumulative_[i - 1] : 0.0;
      if (target <= cumulative_[i] || i + 1 == segments_.size()) {
        double local = std::min(target - start, segments_[i].length);
        return {xl + segments_[i].direction.x * local,
                yl + segments_[i].direction.y * local, 0};
      }
      xl += segments_[i].direction.x * segments_[i].length;
      yl += segments_[i].direction.y * segments_[i].length;
    }
    return anchor_;
  }

 private:
  Surface surface_;
  Point anchor_;
  std::vector<GeodesicSegment> segments_;
  std::vector<double> cumulative_;
  double total_ = 0;
};

namespace detail {

// Breakpoint fractions of both chains padded to a power-of-two interval
// count, so a piecewise-linear reparameterization puts every parameter kink
// on a dyadic grid point (keeping the midpoint rule second order cellwise).
inline std::vector<double> dyadic_aligned_knots(const SegmentChain& a, const SegmentChain& b) {
  std::vector<double> knots{0.0, 1.0};
  for (double f : a.breakpoint_fractions()) knots.push_back(f);
  for (double f : b.breakpoint_fractions()) knots.push_back(f);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-12; }),
              knots.end());
  size_t intervals = knots.size() - 1;
  size_t target = 1;
  while (target < intervals) target *= 2;
  while (knots.size() - 1 < target) {
    size_t widest = 0;
    for (size_t i = 1; i + 1 < knots.size(); ++i)
      if (knots[i + 1] - knots[i] > knots[widest + 1] - knots[widest]) widest = i;
    knots.insert(knots.begin() + widest + 1, 0.5 * (knots[widest] + knots[widest + 1]));
  }
  return knots;
}

inline double remap_to_knots(const std::vector<double>& knots, double u) {
  size_t m = knots.size() - 1;
  double scaled = std::clamp(u, 0.0, 1.0) * static_cast<double>(m);
  size_t i = std::min(static_cast<size_t>(scaled), m - 1);
  double f = scaled - static_cast<double>(i);
  return knots[i] + f * (knots[i + 1] - knots[i]);
}

}  // namespace detail

// Ruled sheet between two arclength-normalized chains with common endpoints:
// the sheet at (u, v) is the point at fraction v along the shortest geodesic
// from a(u) to b(u), with u reparameterized so that segment kinks sit on
// dyadic grid points. Throws NonUniqueGeodesic from evaluation when a
// connector degenerates (sphere cut locus).
inline SheetMap ruled_sheet(const Surface& s, SegmentChain a, SegmentChain b) {
  std::vector<double> knots = detail::dyadic_aligned_knots(a, b);
  return [s, knots = std::move(knots), a = std::move(a), b = std::move(b)](double u,
                                                                           double v) -> Point {
    double w = detail::remap_to_knots(knots, u);
    Point pa = a.at_fraction(w);
    Point pb = b.at_fraction(w);
    if (s.flat()) {
      double x = (1 - v) * pa.x + v * pb.x;
      double y = (1 - v) * pa.y + v * pb.y;
      return s.is_torus() ? s.point(x, y) : Point{x, y, 0};
    }
    auto g = maybe_geodesic_between(s, pa, pb);
    if (!g) raise(ErrorCode::NonUniqueGeodesic, "ruled sheet connector");
    return g->evaluate(v * g->length);
  };
}

// Integral of the ruled sheet with the refinement floor matched to the
// number of aligned pieces.
inline SheetIntegral ruled_sheet_integral(const Surface& s, const SegmentChain& a,
                                          const SegmentChain& b, double tol,
                                          int max_depth = kMaxQuadDepth) {
  std::vector<double> knots = detail::dyadic_aligned_knots(a, b);
  int pieces = static_cast<int>(knots.size()) - 1;
  int min_depth = 1;
  while ((1 << min_depth) < 2 * pieces) ++min_depth;
  return integrate_form_over_sheet_detail(s, ruled_sheet(s, a, b), tol, max_depth, min_depth);
}

// Ruled sheet of the geodesic triangle (a, b, c): the two-sided chain
// [a->b->c] against the chord [a->c], oriented by the vertex order.
inline SheetMap ruled_triangle_sheet(const Surface& s, const Point& a, const Point& b,
                                     const Point& c) {
  GeodesicSegment ab = geodesic_between(s, a, b);
  GeodesicSegment bc = geodesic_between(s, b, c);
  GeodesicSegment ac = geodesic_between(s, a, c);
  SegmentChain two(s, a, {ab, bc});
  SegmentChain one(s, a, {ac});
  return ruled_sheet(s, std::move(two), std::move(one));
}

}  // namespace tailor
