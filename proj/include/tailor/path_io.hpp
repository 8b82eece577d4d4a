#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tailor/path.hpp"

namespace tailor {

using Json = nlohmann::ordered_json;

inline Json surface_to_json(const Surface& s) {
  Json j;
  j["kind"] = surface_kind_name(s.kind());
  j["form_scale"] = s.form_scale();
  if (s.kind() == SurfaceKind::PhasePlane) j["planck_h"] = s.planck_h();
  if (s.kind() == SurfaceKind::FlatTorus) j["periods"] = {s.period_x(), s.period_y()};
  return j;
}

inline Surface surface_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind"))
    raise(ErrorCode::InvalidInput, "surface spec must be an object with a kind");
  std::string kind = j.at("kind").get<std::string>();
  double fs = j.value("form_scale", 1.0);
  if (kind == "euclidean_plane" || kind == "plane") return Surface::plane(fs);
  if (kind == "phase_plane") {
    if (!j.contains("planck_h")) raise(ErrorCode::InvalidInput, "phase_plane needs planck_h");
    return Surface::phase_plane(j.at("planck_h").get<double>(), fs);
  }
  if (kind == "unit_sphere" || kind == "sphere") return Surface::unit_sphere(fs);
  if (kind == "flat_torus" || kind == "torus") {
    if (!j.contains("periods") || !j.at("periods").is_array() || j.at("periods").size() != 2)
      raise(ErrorCode::InvalidInput, "flat_torus needs periods [Lx, Ly]");
    return Surface::flat_torus(j.at("periods")[0].get<double>(),
                               j.at("periods")[1].get<double>(), fs);
  }
  raise(ErrorCode::InvalidInput, "unknown surface kind: " + kind);
}

namespace detail {

inline Point point_from_json(const Surface& s, const Json& arr) {
  if (!arr.is_array()) raise(ErrorCode::InvalidInput, "point must be an array");
  if (s.is_sphere()) {
    if (arr.size() != 3) raise(ErrorCode::InvalidInput, "sphere point needs 3 coordinates");
    return s.point(arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>());
  }
  if (arr.size() != 2) raise(ErrorCode::InvalidInput, "point needs 2 coordinates");
  return s.point(arr[0].get<double>(), arr[1].get<double>());
}

inline Json point_to_json(const Surface& s, const Point& p) {
  if (s.is_sphere()) return Json::array({p.x, p.y, p.z});
  return Json::array({p.x, p.y});
}

}  // namespace detail

// Path schema: {"surface": {...}, "waypoints": [[...], ...]} with consecutive
// waypoints joined by unique shortest geodesics, or
// {"surface": {...}, "segments": [{"start": [...], "dir": [...], "len": ...}]}.
inline Path path_from_json(const Json& j) {
  if (!j.is_object()) raise(ErrorCode::InvalidInput, "path spec must be an object");
  if (!j.contains("surface")) raise(ErrorCode::InvalidInput, "path spec needs a surface");
  Surface s = surface_from_json(j.at("surface"));
  if (j.contains("waypoints")) {
    std::vector<Point> pts;
    for (const auto& w : j.at("waypoints")) pts.push_back(detail::point_from_json(s, w));
    return Path::from_waypoints(s, pts);
  }
  if (j.contains("segments")) {
    std::vector<GeodesicSegment> segs;
    for (const auto& e : j.at("segments")) {
      if (!e.contains("start") || !e.contains("dir") || !e.contains("len"))
        raise(ErrorCode::InvalidInput, "segment needs start, dir, len");
      Point start = detail::point_from_json(s, e.at("start"));
      const auto& d = e.at("dir");
      Vec3 dir{d[0].get<double>(), d[1].get<double>(),
               d.size() > 2 ? d[2].get<double>() : 0.0};
      double len = e.at("len").get<double>();
      if (len < 0) raise(ErrorCode::InvalidInput, "segment length must be >= 0");
      double n = dir.norm();
      if (len > 0) {
        if (std::abs(n - 1.0) > 1e-6) raise(ErrorCode::InvalidInput, "dir must be a unit vector");
        dir = dir.normalized();
        if (s.is_sphere() && std::abs(dir.dot(start.vec())) > 1e-6)
          raise(ErrorCode::InvalidInput, "sphere dir must be tangent at start");
      } else if (n == 0) {
        dir = {1, 0, 0};
      }
      segs.push_back(make_segment(s, start, dir, len));
    }
    if (segs.empty()) raise(ErrorCode::InvalidInput, "segments array is empty");
    return Path::from_segments(s, std::move(segs));
  }
  raise(ErrorCode::InvalidInput, "path spec needs waypoints or segments");
}

inline Json path_to_json(const Path& p) {
  Json j;
  j["surface"] = surface_to_json(p.surface());
  Json segs = Json::array();
  for (const auto& g : p.segments()) {
    Json e;
    e["start"] = detail::point_to_json(p.surface(), g.start);
    if (p.surface().is_sphere())
      e["dir"] = Json::array({g.direction.x, g.direction.y, g.direction.z});
    else
      e["dir"] = Json::array({g.direction.x, g.direction.y});
    e["len"] = g.length;
    segs.push_back(e);
  }
  if (p.is_point()) {
    j["waypoints"] = Json::array({detail::point_to_json(p.surface(), p.start())});
  } else {
    j["segments"] = segs;
  }
  return j;
}

inline Path path_from_json_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) raise(ErrorCode::InvalidInput, "invalid JSON for path");
  return path_from_json(j);
}

}  // namespace tailor
