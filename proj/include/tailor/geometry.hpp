#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "tailor/errors.hpp"

namespace tailor {

inline constexpr double kPi = std::numbers::pi;

// Tolerance for endpoint matching and geodesic uniqueness decisions.
inline constexpr double kPointTol = 1e-9;
// Sphere cut-locus guard: geodesics are non-unique past pi - kAntipodalTol.
inline constexpr double kAntipodalTol = 1e-9;
// Torus half-period tie tolerance for shortest-lift selection.
inline constexpr double kTorusTieTol = 1e-9;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    if (n == 0) raise(ErrorCode::InvalidInput, "cannot normalize zero vector");
    return {x / n, y / n, z / n};
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// A point on a model surface. Plane, phase plane and torus use (x, y);
// the phase plane reads them as (q, p). The unit sphere uses (x, y, z)
// with unit norm.
struct Point {
  double x = 0, y = 0, z = 0;

  Vec3 vec() const { return {x, y, z}; }
};

enum class SurfaceKind { EuclideanPlane, PhasePlane, UnitSphere, FlatTorus };

inline const char* surface_kind_name(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::EuclideanPlane: return "euclidean_plane";
    case SurfaceKind::PhasePlane: return "phase_plane";
    case SurfaceKind::UnitSphere: return "unit_sphere";
    case SurfaceKind::FlatTorus: return "flat_torus";
  }
  return "?";
}

// A model geometry bundling a metric, the canonical closed 2-form scaled by
// form_scale, and the declared taille of that form.
class Surface {
 public:
  static Surface plane(double form_scale = 1.0) {
    return Surface(SurfaceKind::EuclideanPlane, form_scale, 0, 0, 0);
  }
  // Phase plane with coordinates (q, p) and form dp ^ dq; taille h/2.
  static Surface phase_plane(double planck_h, double form_scale = 1.0) {
    if (planck_h <= 0) raise(ErrorCode::InvalidInput, "planck_h must be > 0");
    return Surface(SurfaceKind::PhasePlane, form_scale, planck_h, 0, 0);
  }
  static Surface unit_sphere(double form_scale = 1.0) {
    return Surface(SurfaceKind::UnitSphere, form_scale, 0, 0, 0);
  }
  static Surface flat_torus(double lx, double ly, double form_scale = 1.0) {
    if (lx <= 0 || ly <= 0) raise(ErrorCode::InvalidInput, "periods must be > 0");
    return Surface(SurfaceKind::FlatTorus, form_scale, 0, lx, ly);
  }

  SurfaceKind kind() const { return kind_; }
  double form_scale() const { return form_scale_; }
  double planck_h() const { return planck_h_; }
  double period_x() const { return lx_; }
  double period_y() const { return ly_; }

  bool flat() const { return kind_ != SurfaceKind::UnitSphere; }
  bool is_torus() const { return kind_ == SurfaceKind::FlatTorus; }
  bool is_sphere() const { return kind_ == SurfaceKind::UnitSphere; }

  // Declared taille of the canonical form: the generator of its image on
  // the second homotopy group, read as the discrete subgroup tau * Z.
  double taille() const {
    switch (kind_) {
      case SurfaceKind::EuclideanPlane: return 0.0;
      case SurfaceKind::FlatTorus: return 0.0;
      case SurfaceKind::UnitSphere: return 4.0 * kPi * form_scale_;
      case SurfaceKind::PhasePlane: return planck_h_ / 2.0;
    }
    return 0.0;
  }

  bool same_as(const Surface& o) const {
    return kind_ == o.kind_ && form_scale_ == o.form_scale_ &&
           planck_h_ == o.planck_h_ && lx_ == o.lx_ && ly_ == o.ly_;
  }

  // Canonical 2-form evaluated at p on a pair of tangent vectors.
  // Plane/torus: c * dx ^ dy. Phase plane: c * dp ^ dq, ordered so the
  // accelerate-then-translate triangle has positive area. Sphere: outward
  // oriented area form c * <p, u x v>.
  double form(const Point& p, const Vec3& u, const Vec3& v) const {
    switch (kind_) {
      case SurfaceKind::EuclideanPlane:
      case SurfaceKind::FlatTorus:
        return form_scale_ * (u.x * v.y - u.y * v.x);
      case SurfaceKind::PhasePlane:
        return -form_scale_ * (u.x * v.y - u.y * v.x);
      case SurfaceKind::UnitSphere:
        return form_scale_ * p.vec().dot(u.cross(v));
    }
    return 0.0;
  }

  // Orientation sign of the form against the standard dx ^ dy on flat
  // surfaces (used by exact shoelace evaluation of flat sheet integrals).
  double flat_form_sign() const {
    return kind_ == SurfaceKind::PhasePlane ? -form_scale_ : form_scale_;
  }

  Point point(double x, double y) const {
    if (kind_ == SurfaceKind::UnitSphere)
      raise(ErrorCode::InvalidInput, "sphere points need three coordinates");
    if (kind_ == SurfaceKind::FlatTorus) return {reduce(x, lx_), reduce(y, ly_), 0};
    return {x, y, 0};
  }

  Point point(double x, double y, double z) const {
    if (kind_ != SurfaceKind::UnitSphere) return point(x, y);
    Vec3 v{x, y, z};
    double n = v.norm();
    if (std::abs(n - 1.0) > 1e-6)
      raise(ErrorCode::InvalidInput, "sphere point not on the unit sphere");
    v = v.normalized();
    return {v.x, v.y, v.z};
  }

  Point point(const Vec3& v) const { return point(v.x, v.y, v.z); }

  // Reduces raw coordinates into the fundamental domain (torus); validates
  // and renormalizes otherwise.
  Point canonical(const Point& p) const {
    if (kind_ == SurfaceKind::UnitSphere) return point(p.x, p.y, p.z);
    return point(p.x, p.y);
  }

  static double reduce(double v, double period) {
    double r = std::fmod(v, period);
    if (r < 0) r += period;
    if (r >= period) r = 0;  // fmod rounding at the seam
    return r;
  }

  // Principal representative of a coordinate difference, in (-L/2, L/2].
  static double principal(double d, double period) {
    double r = std::fmod(d, period);
    if (r > period / 2) r -= period;
    if (r <= -period / 2) r += period;
    return r;
  }

 private:
  Surface(SurfaceKind k, double fs, double h, double lx, double ly)
      : kind_(k), form_scale_(fs), planck_h_(h), lx_(lx), ly_(ly) {
    if (fs <= 0) raise(ErrorCode::InvalidInput, "form_scale must be > 0");
  }

  SurfaceKind kind_;
  double form_scale_;
  double planck_h_;
  double lx_, ly_;
};

// Intrinsic metric distance.
inline double distance(const Surface& s, const Point& a, const Point& b) {
  switch (s.kind()) {
    case SurfaceKind::EuclideanPlane:
    case SurfaceKind::PhasePlane:
      return std::hypot(b.x - a.x, b.y - a.y);
    case SurfaceKind::UnitSphere: {
      Vec3 va = a.vec(), vb = b.vec();
      return std::atan2(va.cross(vb).norm(), va.dot(vb));
    }
    case SurfaceKind::FlatTorus: {
      double dx = Surface::principal(b.x - a.x, s.period_x());
      double dy = Surface::principal(b.y - a.y, s.period_y());
      return std::hypot(dx, dy);
    }
  }
  return 0;
}

// A constant-speed geodesic of a model surface, parameterized by arclength.
// The direction is a unit tangent at the start (ambient 3-vector on the
// sphere, an R^2 vector elsewhere); zero-length segments keep a placeholder
// direction.
struct GeodesicSegment {
  Surface surface;
  Point start;
  Vec3 direction;
  double length = 0;
  Point end;

  Point evaluate(double s) const {
    if (s < -1e-12 || s > length + 1e-12)
      raise(ErrorCode::OutOfRange, "arclength outside [0, length]");
    if (s <= 0) return start;
    if (s >= length) return end;
    switch (surface.kind()) {
      case SurfaceKind::EuclideanPlane:
      case SurfaceKind::PhasePlane:
        return {start.x + direction.x * s, start.y + direction.y * s, 0};
      case SurfaceKind::FlatTorus:
        return surface.point(start.x + direction.x * s, start.y + direction.y * s);
      case SurfaceKind::UnitSphere: {
        Vec3 p = start.vec() * std::cos(s) + direction * std::sin(s);
        p = p.normalized();
        return {p.x, p.y, p.z};
      }
    }
    return start;
  }

  // Unit tangent at arclength s.
  Vec3 tangent(double s) const {
    if (surface.kind() != SurfaceKind::UnitSphere) return direction;
    return start.vec() * (-std::sin(s)) + direction * std::cos(s);
  }

  GeodesicSegment reversed() const {
    GeodesicSegment r{surface, end, {0, 0, 0}, length, start};
    if (length == 0) {
      r.direction = direction;
      return r;
    }
    Vec3 t = tangent(length);
    r.direction = t * -1.0;
    return r;
  }

  // Lift displacement vector (flat surfaces): end of the lift minus start.
  Vec3 lift_displacement() const { return direction * length; }

  // Integer winding pair of the lift (torus); zero elsewhere.
  std::array<int, 2> winding() const {
    if (surface.kind() != SurfaceKind::FlatTorus) return {0, 0};
    double wx = (start.x + direction.x * length - end.x) / surface.period_x();
    double wy = (start.y + direction.y * length - end.y) / surface.period_y();
    return {static_cast<int>(std::lround(wx)), static_cast<int>(std::lround(wy))};
  }
};

inline Point geodesic_endpoint(const Surface& s, const Point& start, const Vec3& dir,
                               double len) {
  switch (s.kind()) {
    case SurfaceKind::EuclideanPlane:
    case SurfaceKind::PhasePlane:
      return {start.x + dir.x * len, start.y + dir.y * len, 0};
    case SurfaceKind::FlatTorus:
      return s.point(start.x + dir.x * len, start.y + dir.y * len);
    case SurfaceKind::UnitSphere: {
      Vec3 p = (start.vec() * std::cos(len) + dir * std::sin(len)).normalized();
      return {p.x, p.y, p.z};
    }
  }
  return start;
}

inline GeodesicSegment make_segment(const Surface& s, const Point& start, const Vec3& dir,
                                    double len) {
  return {s, start, dir, len, geodesic_endpoint(s, start, dir, len)};
}

namespace detail {

inline Vec3 any_unit_tangent(const Surface& s, const Point& at) {
  if (s.kind() != SurfaceKind::UnitSphere) return {1, 0, 0};
  Vec3 a = at.vec();
  Vec3 probe = std::abs(a.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  return a.cross(probe).normalized();
}

inline GeodesicSegment flat_segment(const Surface& s, const Point& a, const Point& b,
                                    const Vec3& disp) {
  double len = std::hypot(disp.x, disp.y);
  Vec3 dir = len > 0 ? Vec3{disp.x / len, disp.y / len, 0} : Vec3{1, 0, 0};
  return {s, a, dir, len, b};
}

}  // namespace detail

// The unique shortest geodesic from a to b, or nullopt when it is not
// unique. On the torus, class_hint selects the homotopy class of the lift
// (winding pair), in which the geodesic is always unique.
inline std::optional<GeodesicSegment> maybe_geodesic_between(
    const Surface& s, const Point& a, const Point& b,
    std::optional<std::array<int, 2>> class_hint = std::nullopt) {
  switch (s.kind()) {
    case SurfaceKind::EuclideanPlane:
    case SurfaceKind::PhasePlane:
      return detail::flat_segment(s, a, b, {b.x - a.x, b.y - a.y, 0});
    case SurfaceKind::FlatTorus: {
      double raw_dx = b.x - a.x, raw_dy = b.y - a.y;
      double dx, dy;
      if (class_hint) {
        dx = raw_dx + (*class_hint)[0] * s.period_x();
        dy = raw_dy + (*class_hint)[1] * s.period_y();
      } else {
        dx = Surface::principal(raw_dx, s.period_x());
        dy = Surface::principal(raw_dy, s.period_y());
        if (std::abs(std::abs(dx) - s.period_x() / 2) < kTorusTieTol ||
            std::abs(std::abs(dy) - s.period_y() / 2) < kTorusTieTol)
          return std::nullopt;  // two shortest lifts
      }
      return detail::flat_segment(s, a, b, {dx, dy, 0});
    }
    case SurfaceKind::UnitSphere: {
      Vec3 va = a.vec(), vb = b.vec();
      double ang = std::atan2(va.cross(vb).norm(), va.dot(vb));
      if (ang > kPi - kAntipodalTol) return std::nullopt;
      if (ang < 1e-15) return GeodesicSegment{s, a, detail::any_unit_tangent(s, a), 0, a};
      Vec3 t = (vb - va * va.dot(vb)).normalized();
      return GeodesicSegment{s, a, t, ang, b};
    }
  }
  return std::nullopt;
}

inline GeodesicSegment geodesic_between(
    const Surface& s, const Point& a, const Point& b,
    std::optional<std::array<int, 2>> class_hint = std::nullopt) {
  auto g = maybe_geodesic_between(s, a, b, class_hint);
  if (!g) raise(ErrorCode::NonUniqueGeodesic, "no unique shortest geodesic");
  return *g;
}

// A real number carried modulo a taille tau >= 0. For tau > 0 the value is
// normalized to [0, tau); tau = 0 means a plain real.
struct TailleValue {
  double value = 0;
  double taille = 0;

  TailleValue() = default;
  TailleValue(double v, double tau) : taille(tau) {
    if (tau < 0) raise(ErrorCode::InvalidTaille, "taille must be >= 0");
    value = tau > 0 ? Surface::reduce(v, tau) : v;
  }

  // Distance to another representative in R/tau R (plain |a-b| when tau=0).
  double distance_to(double other) const {
    if (taille == 0) return std::abs(value - other);
    double d = Surface::reduce(value - other, taille);
    return std::min(d, taille - d);
  }
  double distance_to(const TailleValue& other) const { return distance_to(other.value); }

  bool congruent(double other, double tol) const { return distance_to(other) <= tol; }
};

}  // namespace tailor
