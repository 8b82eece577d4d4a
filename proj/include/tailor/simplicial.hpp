#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "tailor/cohomology.hpp"
#include "tailor/quadrature.hpp"

namespace tailor {

// An oriented triangulated closed surface with vertices on a model surface.
struct SimplicialSurface {
  Surface surface = Surface::unit_sphere();
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> faces;

  std::vector<std::array<int, 2>> edges() const {
    std::vector<std::array<int, 2>> out;
    for (const auto& f : faces) {
      for (int k = 0; k < 3; ++k) {
        int a = f[k], b = f[(k + 1) % 3];
        if (a < b) out.push_back({a, b});
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  int euler_characteristic() const {
    return static_cast<int>(vertices.size()) - static_cast<int>(edges().size()) +
           static_cast<int>(faces.size());
  }
};

// A formal integer combination of the oriented 2-cells of a complex.
struct TwoCycle {
  std::vector<int> coefficients;  // one per face

  // Simplicial boundary as a signed count per directed edge; a cycle has all
  // zeros.
  static bool boundary_vanishes(const SimplicialSurface& K, const std::vector<int>& coeffs) {
    std::map<std::array<int, 2>, long long> edge_sum;
    for (size_t i = 0; i < K.faces.size(); ++i) {
      auto [a, b, c] = K.faces[i];
      int w = coeffs[i];
      for (auto [u, v] : {std::array<int, 2>{a, b}, {b, c}, {c, a}}) {
        if (u < v)
          edge_sum[{u, v}] += w;
        else
          edge_sum[{v, u}] -= w;
      }
    }
    for (const auto& [e, s] : edge_sum)
      if (s != 0) return false;
    return true;
  }
};

// The icosahedron inscribed in the unit sphere, faces oriented outward.
inline SimplicialSurface icosahedron_sphere(double form_scale = 1.0) {
  SimplicialSurface K;
  K.surface = Surface::unit_sphere(form_scale);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::array<std::array<double, 3>, 12> raw = {{{-1, phi, 0},
                                                      {1, phi, 0},
                                                      {-1, -phi, 0},
                                                      {1, -phi, 0},
                                                      {0, -1, phi},
                                                      {0, 1, phi},
                                                      {0, -1, -phi},
                                                      {0, 1, -phi},
                                                      {phi, 0, -1},
                                                      {phi, 0, 1},
                                                      {-phi, 0, -1},
                                                      {-phi, 0, 1}}};
  for (const auto& v : raw) {
    Vec3 u = Vec3{v[0], v[1], v[2]}.normalized();
    K.vertices.push_back({u.x, u.y, u.z});
  }
  K.faces = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (auto& f : K.faces) {
    Vec3 a = K.vertices[f[0]].vec(), b = K.vertices[f[1]].vec(), c = K.vertices[f[2]].vec();
    if (a.dot(b.cross(c)) < 0) std::swap(f[1], f[2]);
  }
  return K;
}

// One 4-to-1 midpoint subdivision with radial projection back to the sphere.
inline SimplicialSurface subdivide_projected(const SimplicialSurface& K) {
  SimplicialSurface out;
  out.surface = K.surface;
  out.vertices = K.vertices;
  std::map<std::array<int, 2>, int> midpoint;
  auto mid = [&](int a, int b) {
    std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3 m = (K.vertices[a].vec() + K.vertices[b].vec()) * 0.5;
    if (out.surface.is_sphere()) m = m.normalized();
    int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back({m.x, m.y, m.z});
    midpoint.emplace(key, idx);
    return idx;
  };
  for (const auto& f : K.faces) {
    int a = f[0], b = f[1], c = f[2];
    int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.faces.push_back({a, ab, ca});
    out.faces.push_back({ab, b, bc});
    out.faces.push_back({ca, bc, c});
    out.faces.push_back({ab, bc, ca});
  }
  return out;
}

// Barycentric subdivision: 6 flags per face, barycenters projected to the
// sphere when applicable.
inline SimplicialSurface barycentric_subdivision(const SimplicialSurface& K) {
  SimplicialSurface out;
  out.surface = K.surface;
  out.vertices = K.vertices;
  std::map<std::array<int, 2>, int> edge_node;
  auto enode = [&](int a, int b) {
    std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    auto it = edge_node.find(key);
    if (it != edge_node.end()) return it->second;
    Vec3 m = (K.vertices[a].vec() + K.vertices[b].vec()) * 0.5;
    if (out.surface.is_sphere()) m = m.normalized();
    int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back({m.x, m.y, m.z});
    edge_node.emplace(key, idx);
    return idx;
  };
  for (const auto& f : K.faces) {
    int a = f[0], b = f[1], c = f[2];
    Vec3 g = (K.vertices[a].vec() + K.vertices[b].vec() + K.vertices[c].vec()) * (1.0 / 3.0);
    if (out.surface.is_sphere()) g = g.normalized();
    int fc = static_cast<int>(out.vertices.size());
    out.vertices.push_back({g.x, g.y, g.z});
    int ab = enode(a, b), bc = enode(b, c), ca = enode(c, a);
    out.faces.push_back({a, ab, fc});
    out.faces.push_back({ab, b, fc});
    out.faces.push_back({b, bc, fc});
    out.faces.push_back({bc, c, fc});
    out.faces.push_back({c, ca, fc});
    out.faces.push_back({ca, a, fc});
  }
  return out;
}

// The finite edge-path semigroup of a triangulation, realized on the face
// poset: nodes are the simplices placed at their (projected) barycenters,
// elements are comparable ordered pairs (x <= y) plus zero, and
// (x, y)(y, z) = (x, z) by transitivity. This is the homotopy-class image of
// the paths generated by the barycentric 1-skeleton, and it is closed and
// associative without any truncation.
struct PosetPathSemigroup {
  SemigroupPtr semigroup;
  std::vector<Point> node_position;             // poset node -> point
  std::vector<int> node_rank;                   // 0 vertex, 1 edge, 2 face
  std::vector<std::array<int, 2>> pair_of;      // element -> (x, y); zero -> (-1,-1)
  std::map<std::array<int, 2>, int> element_of; // (x, y) -> element
  std::vector<std::array<int, 3>> flag_cells;   // (v-node, e-node, f-node)
  std::vector<int> flag_signs;                  // geometric orientation vs the form

  int element(int x, int y) const {
    auto it = element_of.find({x, y});
    return it == element_of.end() ? -1 : it->second;
  }

  // The fundamental 2-cycle, as per-flag pairs ((v,e),(e,f)) with coherent
  // orientation coefficients.
  CochainCycle fundamental_cycle(int multiplier = 1) const {
    CochainCycle z;
    for (size_t i = 0; i < flag_cells.size(); ++i) {
      auto [v, e, f] = flag_cells[i];
      z.cells.push_back({static_cast<std::int32_t>(element_of.at({v, e})),
                         static_cast<std::int32_t>(element_of.at({e, f}))});
      z.coefficients.push_back(multiplier * flag_signs[i]);
    }
    return z;
  }
};

inline PosetPathSemigroup build_poset_path_semigroup(const SimplicialSurface& K,
                                                     int max_elements = 5000) {
  if (K.surface.is_torus())
    raise(ErrorCode::InvalidInput, "poset path semigroups are built for simply connected surfaces");
  PosetPathSemigroup out;
  const int nv = static_cast<int>(K.vertices.size());
  auto edges = K.edges();
  const int ne = static_cast<int>(edges.size());
  const int nf = static_cast<int>(K.faces.size());

  // Nodes: vertices, then edge barycenters, then face barycenters.
  out.node_position = K.vertices;
  out.node_rank.assign(nv, 0);
  std::map<std::array<int, 2>, int> edge_index;
  for (int i = 0; i < ne; ++i) {
    edge_index[edges[i]] = nv + i;
    Vec3 m = (K.vertices[edges[i][0]].vec() + K.vertices[edges[i][1]].vec()) * 0.5;
    if (K.surface.is_sphere()) m = m.normalized();
    out.node_position.push_back({m.x, m.y, m.z});
    out.node_rank.push_back(1);
  }
  for (int i = 0; i < nf; ++i) {
    auto [a, b, c] = K.faces[i];
    Vec3 g = (K.vertices[a].vec() + K.vertices[b].vec() + K.vertices[c].vec()) * (1.0 / 3.0);
    if (K.surface.is_sphere()) g = g.normalized();
    out.node_position.push_back({g.x, g.y, g.z});
    out.node_rank.push_back(2);
  }

  // Comparable pairs: reflexive pairs plus vertex<edge, edge<face,
  // vertex<face inclusions.
  std::vector<std::array<int, 2>> pairs;
  int nodes = static_cast<int>(out.node_position.size());
  for (int x = 0; x < nodes; ++x) pairs.push_back({x, x});
  for (int i = 0; i < ne; ++i) {
    pairs.push_back({edges[i][0], nv + i});
    pairs.push_back({edges[i][1], nv + i});
  }
  for (int i = 0; i < nf; ++i) {
    auto [a, b, c] = K.faces[i];
    int fnode = nv + ne + i;
    for (auto [u, v] : {std::array<int, 2>{a, b}, {b, c}, {c, a}}) {
      std::array<int, 2> key{std::min(u, v), std::max(u, v)};
      pairs.push_back({edge_index.at(key), fnode});
    }
    pairs.push_back({a, fnode});
    pairs.push_back({b, fnode});
    pairs.push_back({c, fnode});
  }

  int n = static_cast<int>(pairs.size()) + 1;  // plus zero
  if (n > max_elements)
    raise(ErrorCode::TooManyTuples, "poset path semigroup exceeds the element cap");
  const int zero = 0;
  out.pair_of.assign(n, {-1, -1});
  std::vector<std::string> labels(n);
  labels[zero] = "0";
  for (size_t i = 0; i < pairs.size(); ++i) {
    int e = static_cast<int>(i) + 1;
    out.pair_of[e] = pairs[i];
    out.element_of[pairs[i]] = e;
    labels[e] = "(" + std::to_string(pairs[i][0]) + "," + std::to_string(pairs[i][1]) + ")";
  }

  std::vector<std::int32_t> table(static_cast<size_t>(n) * n, zero);
  for (int e1 = 1; e1 < n; ++e1) {
    auto [x, y] = out.pair_of[e1];
    for (int e2 = 1; e2 < n; ++e2) {
      auto [y2, z] = out.pair_of[e2];
      if (y != y2) continue;
      auto it = out.element_of.find({x, z});
      if (it == out.element_of.end()) continue;  // incomparable: stays zero
      table[static_cast<size_t>(e1) * n + e2] = it->second;
    }
  }
  out.semigroup = std::make_shared<FiniteSemigroup>(n, zero, std::move(table), std::move(labels));

  // Flag 2-cells with orientation signs against the surface form.
  for (int i = 0; i < nf; ++i) {
    auto [a, b, c] = K.faces[i];
    int fnode = nv + ne + i;
    auto add_flag = [&](int v, int u, int w) {
      std::array<int, 2> key{std::min(u, w), std::max(u, w)};
      int en = edge_index.at(key);
      double area = geodesic_triangle_area(K.surface, out.node_position[v],
                                           out.node_position[en], out.node_position[fnode]);
      out.flag_cells.push_back({v, en, fnode});
      out.flag_signs.push_back(area >= 0 ? 1 : -1);
    };
    add_flag(a, a, b);
    add_flag(b, a, b);
    add_flag(b, b, c);
    add_flag(c, b, c);
    add_flag(c, c, a);
    add_flag(a, c, a);
  }
  return out;
}

// Checks that the signed flag chain is a 2-cycle of the poset nerve: each
// comparable pair must appear with cancelling signs.
inline bool flag_cycle_boundary_vanishes(const PosetPathSemigroup& b) {
  std::map<std::array<int, 2>, long long> sums;
  for (size_t i = 0; i < b.flag_cells.size(); ++i) {
    auto [v, e, f] = b.flag_cells[i];
    int w = b.flag_signs[i];
    sums[{e, f}] += w;
    sums[{v, f}] -= w;
    sums[{v, e}] += w;
  }
  for (const auto& [k, v] : sums)
    if (v != 0) return false;
  return true;
}

}  // namespace tailor
