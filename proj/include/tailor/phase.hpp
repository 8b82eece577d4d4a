#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tailor/geometric_cocycle.hpp"

namespace tailor {

// Sampled phase and weight along a path. Undefined samples (the exceptional
// set of the moving chord) carry no value; phi_unwrapped additionally tracks
// the continuously accumulated sheet area, which is what total-phase-change
// diagnostics read.
struct PhaseTrace {
  double taille = 0;
  std::vector<double> x;
  std::vector<TailleValue> phi;
  std::vector<Cplx> w;
  std::vector<char> defined;
  std::vector<double> phi_unwrapped;

  size_t size() const { return x.size(); }
};

namespace detail {

struct PrefixWalk {
  std::vector<double> xs;
  std::vector<double> phi;  // unwrapped, per sample
  std::vector<char> defined;
};

// Accumulates the sheet area between the moving chord from `base` and the
// walked prefix of `path`, strip by strip. Chord homotopy classes follow the
// walk (flat surfaces track the lift; base_winding seeds the class of a
// pre-travelled leg). Samples where the chord degenerates are marked
// undefined; accumulation continues across them.
inline PrefixWalk accumulate_prefix_phase(const GeometricCocycle& cx, const Path& path,
                                          std::vector<double> samples, const Point& base,
                                          std::array<int, 2> base_winding) {
  const Surface& s = cx.surface;
  const double total = path.length();
  for (double v : samples)
    if (v < -1e-12 || v > total + 1e-12)
      raise(ErrorCode::OutOfRange, "sample arclength outside [0, length]");

  PrefixWalk out;
  out.xs = samples;
  out.phi.assign(samples.size(), 0.0);
  out.defined.assign(samples.size(), 0);

  // Breakpoints: samples, segment boundaries, and a length cap that keeps
  // sphere strips thin.
  std::map<double, std::vector<size_t>> marks;
  for (size_t i = 0; i < samples.size(); ++i)
    marks[std::clamp(samples[i], 0.0, total)].push_back(i);
  const auto& cum = path.cumulative_lengths();
  for (double c : cum)
    if (c < total) marks.try_emplace(c);
  marks.try_emplace(0.0);
  marks.try_emplace(total);
  if (s.is_sphere()) {
    const double cap = kPi / 4;
    std::vector<double> extra;
    double prev = -1;
    for (const auto& [xv, idx] : marks) {
      if (prev >= 0 && xv - prev > cap) {
        int k = static_cast<int>(std::ceil((xv - prev) / cap));
        for (int j = 1; j < k; ++j) extra.push_back(prev + (xv - prev) * j / k);
      }
      prev = xv;
    }
    for (double e : extra) marks.try_emplace(e);
  }

  // Lifted coordinates of segment starts (flat surfaces).
  std::vector<Vec3> seg_lift;
  if (s.flat()) {
    Vec3 lift{path.start().x, path.start().y, 0};
    for (const auto& g : path.segments()) {
      seg_lift.push_back(lift);
      lift = lift + g.lift_displacement();
    }
    seg_lift.push_back(lift);  // lift of the path end
  }

  auto segment_index = [&](double xv) -> size_t {
    size_t i = 0;
    while (i + 1 < cum.size() && xv > cum[i] + 1e-15) ++i;
    return i;
  };
  auto point_at = [&](double xv) { return path.evaluate(xv); };
  auto lift_at = [&](double xv) -> Vec3 {
    if (path.segments().empty()) return {path.start().x, path.start().y, 0};
    size_t i = segment_index(xv);
    double local = xv - (i ? cum[i - 1] : 0.0);
    const auto& g = path.segments()[i];
    local = std::clamp(local, 0.0, g.length);
    return seg_lift[i] + g.direction * local;
  };
  // Sub-segments of the path between two arclengths (sphere walk).
  auto piece_segments = [&](double x0, double x1) {
    std::vector<GeodesicSegment> out_segs;
    if (x1 - x0 <= 1e-15 || path.segments().empty()) return out_segs;
    size_t i = segment_index(x0 + 1e-15);
    double pos = x0;
    while (pos < x1 - 1e-15 && i < path.segments().size()) {
      double seg_start = i ? cum[i - 1] : 0.0;
      double lo = pos - seg_start;
      double hi = std::min(x1 - seg_start, path.segments()[i].length);
      if (hi - lo > 1e-15) {
        const auto& g = path.segments()[i];
        Point a = g.evaluate(std::clamp(lo, 0.0, g.length));
        out_segs.push_back(make_segment(s, a, g.direction, hi - lo));
      }
      pos = seg_start + hi;
      ++i;
    }
    return out_segs;
  };

  const Vec3 base_lift_anchor{base.x, base.y, 0};
  const Vec3 winding_shift = s.is_torus()
                                 ? Vec3{-base_winding[0] * s.period_x(),
                                        -base_winding[1] * s.period_y(), 0}
                                 : Vec3{0, 0, 0};
  // In lift coordinates the chord from base to path(x) has displacement
  // lift(x) - (base - winding*L): the pre-travelled leg shifts the anchor.
  const Vec3 anchor = base_lift_anchor + winding_shift;

  double phi = 0;
  bool broken = false;  // accumulation lost (no computable strip)
  std::optional<double> prev_x;
  Point prev_point;
  Vec3 prev_lift;
  std::optional<GeodesicSegment> prev_chord;  // sphere only

  for (const auto& [xv, sample_ids] : marks) {
    Point cur = point_at(xv);
    bool chord_ok = true;
    std::optional<GeodesicSegment> cur_chord;
    Vec3 cur_lift{};
    if (s.flat()) {
      cur_lift = lift_at(xv);
    } else {
      cur_chord = maybe_geodesic_between(s, base, cur);
      chord_ok = cur_chord.has_value();
    }

    if (!prev_x) {
      // Walk start: x = 0.
      if (chord_ok && !broken) {
        prev_x = xv;
        prev_point = cur;
        prev_lift = cur_lift;
        prev_chord = cur_chord;
        for (size_t id : sample_ids) {
          out.defined[id] = 1;
          out.phi[id] = phi;
        }
      } else {
        broken = true;  // chord to the very first point is undefined
        for (size_t id : sample_ids) out.defined[id] = 0;
      }
      continue;
    }

    if (!chord_ok || broken) {
      for (size_t id : sample_ids) out.defined[id] = 0;
      continue;
    }

    // Strip between chords at prev_x and xv across the walked piece.
    double strip = 0;
    bool strip_ok = true;
    if (xv - *prev_x > 1e-15) {
      if (s.flat()) {
        std::vector<Vec3> loop{anchor, prev_lift};
        size_t i0 = segment_index(*prev_x + 1e-15);
        for (size_t i = i0; i < cum.size() && cum[i] < xv - 1e-15; ++i)
          loop.push_back(seg_lift[i + 1]);
        loop.push_back(cur_lift);
        strip = detail::flat_loop_form_area(s, loop);
      } else {
        auto piece = piece_segments(*prev_x, xv);
        std::vector<GeodesicSegment> longway{*prev_chord};
        longway.insert(longway.end(), piece.begin(), piece.end());
        SegmentChain chain1(s, base, std::move(longway));
        SegmentChain chain2(s, base, {*cur_chord});
        double tol = std::min(1e-10, cx.quad_tol);
        auto v = detail::sphere_ruled_value(s, chain1, chain2, tol);
        if (!v) {
          // Fan decomposition of the strip triangle (base, prev, cur).
          strip_ok = false;
          for (const Point& fan : detail::fan_candidates(s, base, prev_point, cur)) {
            auto p1 = detail::fan_panel(s, fan, base, prev_point, {*prev_chord}, tol);
            if (!p1) continue;
            auto p2 = detail::fan_panel(s, fan, prev_point, cur, piece, tol);
            if (!p2) continue;
            auto p3 = detail::fan_panel(s, fan, cur, base, {cur_chord->reversed()}, tol);
            if (!p3) continue;
            strip = *p1 + *p2 + *p3;
            strip_ok = true;
            break;
          }
        } else {
          strip = *v;
        }
      }
    }

    if (!strip_ok) {
      broken = true;
      for (size_t id : sample_ids) out.defined[id] = 0;
      continue;
    }
    phi += strip;
    prev_x = xv;
    prev_point = cur;
    prev_lift = cur_lift;
    prev_chord = cur_chord;
    for (size_t id : sample_ids) {
      out.defined[id] = 1;
      out.phi[id] = phi;
    }
  }
  return out;
}

inline PhaseTrace walk_to_trace(const GeometricCocycle& cx, const PrefixWalk& walk) {
  PhaseTrace t;
  t.taille = cx.taille();
  t.x = walk.xs;
  t.phi_unwrapped = walk.phi;
  t.defined = walk.defined;
  t.phi.reserve(walk.xs.size());
  t.w.reserve(walk.xs.size());
  for (size_t i = 0; i < walk.xs.size(); ++i) {
    if (walk.defined[i]) {
      t.phi.emplace_back(walk.phi[i], t.taille);
      t.w.push_back(cx.weight_of(walk.phi[i]));
    } else {
      t.phi.emplace_back(0.0, t.taille);
      t.w.push_back({0, 0});
    }
  }
  return t;
}

}  // namespace detail

struct PhaseValue {
  bool defined = false;
  TailleValue value;
  std::string reason;
};

// phi_gamma(x): the form integral over the homotopy sheet between the path
// prefix [0, x] and the unique shortest geodesic chord from the start,
// reduced mod the taille. Undefined at exceptional parameters where that
// chord is not unique.
inline PhaseValue phase_function(const GeometricCocycle& cx, const Path& path, double x) {
  auto walk = detail::accumulate_prefix_phase(cx, path, {x}, path.start(), {0, 0});
  if (!walk.defined[0]) return {false, {}, "no unique shortest chord at this arclength"};
  return {true, TailleValue(walk.phi[0], cx.taille()), {}};
}

// The weight trace w_gamma over the given sample arclengths (sorted
// internally; the trace reports samples in increasing order).
inline PhaseTrace weight_function(const GeometricCocycle& cx, const Path& path,
                                  std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  auto walk = detail::accumulate_prefix_phase(cx, path, std::move(samples), path.start(), {0, 0});
  return detail::walk_to_trace(cx, walk);
}

struct DeflectionValue {
  bool defined = false;
  Cplx w{1, 0};
  TailleValue phase;
  std::string reason;
};

// Weight attached to a particle that travelled p and is a distance x along
// q: the phase change accumulated since the deflection, relative to the
// moving chord from the original start. Equals exp of the geometric cocycle
// on (p, prefix(q, x)) whenever p is a geodesic.
inline DeflectionValue deflection_weight(const GeometricCocycle& cx, const Path& p,
                                         const Path& q, double x) {
  if (distance(cx.surface, p.end(), q.start()) > kPointTol)
    raise(ErrorCode::InvalidInput, "second path does not start where the first ends");
  auto walk = detail::accumulate_prefix_phase(cx, q, {x}, p.start(), p.winding());
  if (!walk.defined[0]) return {false, {1, 0}, {}, "chord from the origin is undefined"};
  return {true, cx.weight_of(walk.phi[0]), TailleValue(walk.phi[0], cx.taille()), {}};
}

// Full deflection trace along q (used by the experiments).
inline PhaseTrace deflection_trace(const GeometricCocycle& cx, const Path& p, const Path& q,
                                   std::vector<double> samples) {
  if (distance(cx.surface, p.end(), q.start()) > kPointTol)
    raise(ErrorCode::InvalidInput, "second path does not start where the first ends");
  std::sort(samples.begin(), samples.end());
  auto walk = detail::accumulate_prefix_phase(cx, q, std::move(samples), p.start(), p.winding());
  return detail::walk_to_trace(cx, walk);
}

// CSV trace format: x, phi, taille, w_re, w_im, defined.
inline void trace_to_csv(std::ostream& os, const PhaseTrace& t) {
  os << "x,phi,taille,w_re,w_im,defined\n";
  char buf[512];
  for (size_t i = 0; i < t.size(); ++i) {
    if (t.defined[i]) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,1\n", t.x[i],
                    t.phi[i].value, t.taille, t.w[i].real(), t.w[i].imag());
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,nan,%.17g,nan,nan,0\n", t.x[i], t.taille);
    }
    os << buf;
  }
}

}  // namespace tailor
