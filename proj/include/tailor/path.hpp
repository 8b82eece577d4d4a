#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tailor/geometry.hpp"

namespace tailor {

// A piecewise-geodesic path parameterized by arclength. A path of length
// zero is a point path. On the torus the winding pair records the homotopy
// class of the lift.
class Path {
 public:
  static Path point_path(const Surface& s, const Point& at) {
    Path p(s, s.canonical(at));
    return p;
  }

  static Path from_segments(const Surface& s, std::vector<GeodesicSegment> segs) {
    if (segs.empty()) raise(ErrorCode::InvalidInput, "a path needs at least one segment");
    Path p(s, segs.front().start);
    for (auto& g : segs) {
      if (!g.surface.same_as(s)) raise(ErrorCode::InvalidInput, "segment surface mismatch");
      if (g.length < 1e-12) continue;
      if (!p.segments_.empty() &&
          distance(s, p.segments_.back().end, g.start) > kPointTol)
        raise(ErrorCode::InvalidInput, "segments are not endpoint-continuous");
      p.push_segment(g);
    }
    return p;
  }

  // Consecutive waypoints joined by unique shortest geodesics.
  static Path from_waypoints(const Surface& s, const std::vector<Point>& pts) {
    if (pts.empty()) raise(ErrorCode::InvalidInput, "waypoints empty");
    Path p(s, s.canonical(pts.front()));
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      GeodesicSegment g =
          geodesic_between(s, s.canonical(pts[i]), s.canonical(pts[i + 1]));
      if (g.length < 1e-12) continue;
      p.push_segment(g);
    }
    return p;
  }

  const Surface& surface() const { return surface_; }
  const std::vector<GeodesicSegment>& segments() const { return segments_; }
  const std::vector<double>& cumulative_lengths() const { return cumulative_; }
  double length() const { return total_; }
  bool is_point() const { return segments_.empty(); }

  const Point& start() const { return segments_.empty() ? start_ : segments_.front().start; }
  const Point& end() const { return segments_.empty() ? start_ : segments_.back().end; }

  std::array<int, 2> winding() const { return winding_; }

  Point evaluate(double s) const {
    if (s < -1e-12 || s > total_ + 1e-12)
      raise(ErrorCode::OutOfRange, "arclength outside [0, length]");
    if (segments_.empty()) return start_;
    for (size_t i = 0; i < segments_.size(); ++i) {
      if (s <= cumulative_[i] || i + 1 == segments_.size()) {
        double local = s - (i ? cumulative_[i - 1] : 0.0);
        local = std::min(std::max(local, 0.0), segments_[i].length);
        return segments_[i].evaluate(local);
      }
    }
    return end();
  }

  Path reversed() const {
    Path r(surface_, end());
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it)
      r.push_segment(it->reversed());
    return r;
  }

  // The restriction to [0, x], splitting a segment if needed.
  Path prefix(double x) const {
    if (x < -1e-12 || x > total_ + 1e-12)
      raise(ErrorCode::OutOfRange, "prefix length outside [0, length]");
    Path p(surface_, start());
    double remaining = std::min(std::max(x, 0.0), total_);
    for (const auto& g : segments_) {
      if (remaining <= 1e-12) break;
      if (remaining >= g.length - 1e-15) {
        p.push_segment(g);
        remaining -= g.length;
      } else {
        GeodesicSegment cut{g.surface, g.start, g.direction, remaining,
                            g.evaluate(remaining)};
        p.push_segment(cut);
        remaining = 0;
      }
    }
    return p;
  }

  // Stable identity for formal-sum bases: coordinates rounded to a 1e-12
  // grid.
  std::vector<long long> canonical_key() const {
    auto r = [](double v) { return static_cast<long long>(std::llround(v * 1e12)); };
    std::vector<long long> key;
    key.reserve(8 + segments_.size() * 7);
    key.push_back(static_cast<long long>(surface_.kind()));
    key.push_back(r(surface_.form_scale()));
    key.push_back(r(surface_.planck_h()));
    key.push_back(r(surface_.period_x()));
    key.push_back(r(surface_.period_y()));
    const Point& a = start();
    key.push_back(r(a.x));
    key.push_back(r(a.y));
    key.push_back(r(a.z));
    for (const auto& g : segments_) {
      key.push_back(r(g.direction.x));
      key.push_back(r(g.direction.y));
      key.push_back(r(g.direction.z));
      key.push_back(r(g.length));
    }
    return key;
  }

 private:
  Path(const Surface& s, Point anchor) : surface_(s), start_(anchor) {}

  void push_segment(const GeodesicSegment& g) {
    segments_.push_back(g);
    total_ += g.length;
    cumulative_.push_back(total_);
    auto w = g.winding();
    winding_[0] += w[0];
    winding_[1] += w[1];
  }

  Surface surface_;
  Point start_;  // basepoint when there are no segments
  std::vector<GeodesicSegment> segments_;
  std::vector<double> cumulative_;
  double total_ = 0;
  std::array<int, 2> winding_{0, 0};
};

// Concatenation product; nullopt is the distinguished Zero of the path
// semigroup (endpoints do not match).
inline std::optional<Path> concat(const Path& p, const Path& q) {
  if (!p.surface().same_as(q.surface()))
    raise(ErrorCode::InvalidInput, "concat across different surfaces");
  if (distance(p.surface(), p.end(), q.start()) > kPointTol) return std::nullopt;
  if (q.is_point()) return p;
  if (p.is_point()) return q;
  std::vector<GeodesicSegment> segs = p.segments();
  segs.insert(segs.end(), q.segments().begin(), q.segments().end());
  return Path::from_segments(p.surface(), std::move(segs));
}

// Endpoints plus homotopy class: trivial on simply connected surfaces, the
// winding pair of the lift on the torus.
struct HomotopyTriple {
  Point start;
  Point end;
  std::array<int, 2> winding{0, 0};
};

inline HomotopyTriple homotopy_class(const Path& p) {
  return {p.start(), p.end(), p.winding()};
}

inline std::optional<HomotopyTriple> homotopy_concat(const Surface& s,
                                                     const HomotopyTriple& t1,
                                                     const HomotopyTriple& t2) {
  if (distance(s, t1.end, t2.start) > kPointTol) return std::nullopt;
  return HomotopyTriple{t1.start, t2.end,
                        {t1.winding[0] + t2.winding[0], t1.winding[1] + t2.winding[1]}};
}

}  // namespace tailor
