#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "tailor/phase.hpp"
#include "tailor/simplicial.hpp"

namespace tailor {

// ---------------------------------------------------------------------------
// de Broglie: accelerate from rest along the momentum axis, then translate in
// position; the deflection weight along the position leg is periodic with
// wavelength h/p.

struct DeBroglieResult {
  double h = 0, p = 0, x_max = 0;
  int samples = 0;
  PhaseTrace trace;
  double wavelength_estimate = 0;
  double wavelength_closed_form = 0;  // h / p
  int wraps = 0;
};

namespace detail {

// Mean gap between successive 2*pi wraps of arg w, with wrap positions
// linearly interpolated on the unwrapped angle. Requires at least 4 wraps.
inline std::pair<double, int> wavelength_from_trace(const PhaseTrace& t) {
  std::vector<double> xs, theta;
  for (size_t i = 0; i < t.size(); ++i) {
    if (!t.defined[i]) continue;
    xs.push_back(t.x[i]);
    theta.push_back(std::atan2(t.w[i].imag(), t.w[i].real()));
  }
  // Unwrap.
  for (size_t i = 1; i < theta.size(); ++i) {
    double d = theta[i] - theta[i - 1];
    d -= 2 * kPi * std::round(d / (2 * kPi));
    theta[i] = theta[i - 1] + d;
  }
  std::vector<double> positions;
  if (!theta.empty()) {
    double base = theta.front();
    auto level_index = [&](double th) {
      return static_cast<long long>(std::floor((th - base + 1e-9) / (2 * kPi)));
    };
    for (size_t i = 1; i < theta.size(); ++i) {
      long long k0 = level_index(theta[i - 1]);
      long long k1 = level_index(theta[i]);
      for (long long k = k0 + 1; k <= k1; ++k) {
        double level = base + 2 * kPi * k;
        double span = theta[i] - theta[i - 1];
        double frac = span == 0 ? 0.0 : (level - theta[i - 1]) / span;
        positions.push_back(xs[i - 1] + frac * (xs[i] - xs[i - 1]));
      }
      for (long long k = k0; k > k1; --k) {  // descending phase
        double level = base + 2 * kPi * k;
        double span = theta[i] - theta[i - 1];
        double frac = span == 0 ? 0.0 : (level - theta[i - 1]) / span;
        positions.push_back(xs[i - 1] + frac * (xs[i] - xs[i - 1]));
      }
    }
  }
  int wraps = static_cast<int>(positions.size());
  if (wraps < 4)
    raise(ErrorCode::InsufficientSamples, "fewer than 4 phase wraps captured");
  double mean = 0;
  for (size_t i = 1; i < positions.size(); ++i) mean += positions[i] - positions[i - 1];
  mean /= static_cast<double>(positions.size() - 1);
  return {mean, wraps};
}

}  // namespace detail

inline DeBroglieResult debroglie(double h, double p, double x_max, int samples) {
  if (h <= 0 || p <= 0 || x_max <= 0 || samples < 2)
    raise(ErrorCode::InvalidInput, "debroglie needs positive h, p, x_max and >= 2 samples");
  Surface s = Surface::phase_plane(h);
  GeometricCocycle cx{s, 1, 1.0, kDefaultQuadTol};
  Path momentum_leg = Path::from_waypoints(s, {s.point(0, 0), s.point(0, p)});
  Path position_leg = Path::from_waypoints(s, {s.point(0, p), s.point(x_max, p)});
  std::vector<double> xs(samples + 1);
  for (int i = 0; i <= samples; ++i) xs[i] = x_max * i / samples;
  DeBroglieResult out;
  out.h = h;
  out.p = p;
  out.x_max = x_max;
  out.samples = samples;
  out.trace = deflection_trace(cx, momentum_leg, position_leg, xs);
  out.wavelength_closed_form = h / p;
  auto [wl, wraps] = detail::wavelength_from_trace(out.trace);
  out.wavelength_estimate = wl;
  out.wraps = wraps;
  return out;
}

// ---------------------------------------------------------------------------
// Bohr: the enclosed form integral of a contractible closed path, swept by
// the cone onto its basepoint; the phase returns to its start exactly when
// n * enclosed / tau is an integer.

struct BohrResult {
  bool defined = false;
  TailleValue enclosed;
  double enclosed_unwrapped = 0;
  bool quantized = false;
};

inline BohrResult bohr_check(const Surface& s, const Path& loop, int n, double tol) {
  if (!loop.surface().same_as(s)) raise(ErrorCode::InvalidInput, "path surface mismatch");
  if (distance(s, loop.start(), loop.end()) > kPointTol)
    raise(ErrorCode::InvalidInput, "bohr_check needs a closed path");
  if (loop.winding() != std::array<int, 2>{0, 0})
    raise(ErrorCode::InvalidInput, "bohr_check needs a contractible path");
  GeometricCocycle cx{s, n, 1.0, kDefaultQuadTol};
  auto walk = detail::accumulate_prefix_phase(cx, loop, {loop.length()}, loop.start(), {0, 0});
  BohrResult out;
  if (!walk.defined[0]) return out;
  out.defined = true;
  out.enclosed_unwrapped = walk.phi[0];
  out.enclosed = TailleValue(walk.phi[0], cx.taille());
  double tau = cx.taille();
  if (tau <= 0) {
    if (n != 0) raise(ErrorCode::InvalidTaille, "quantization needs a positive taille");
    out.quantized = true;
    return out;
  }
  double ratio = n * out.enclosed_unwrapped / tau;
  out.quantized = std::abs(ratio - std::round(ratio)) <= tol;
  return out;
}

// ---------------------------------------------------------------------------
// Unit-sphere equator experiment: move south on the 0-degree meridian to the
// equator, deflect eastward, and trace the deflection weight around the
// equator.

struct SphereExperimentResult {
  double theta0_deg = 0;
  int quantum_n = 1;
  int circuits = 2;
  int samples_per_circuit = 0;
  PhaseTrace trace;                          // x = longitude travelled eastward
  double total_phase_change = 0;             // arg-weight change over one circuit
  double max_linearity_deviation = 0;        // vs n*longitude/2 over circuit 1
  bool antipode_probe_undefined = false;     // deflection weight at longitude pi
  std::vector<double> sign_flip_longitudes;  // where Re(w) changes sign
  double steepest_slope_longitude = 0;       // within the first circuit
};

inline SphereExperimentResult sphere_experiment(double theta0_deg, int n,
                                                int samples_per_circuit, int circuits = 2) {
  if (theta0_deg < 0 || theta0_deg > 90)
    raise(ErrorCode::InvalidInput, "colatitude must lie in [0, 90] degrees");
  if (samples_per_circuit < 8) raise(ErrorCode::InvalidInput, "need at least 8 samples");
  Surface s = Surface::unit_sphere();
  GeometricCocycle cx{s, n, 1.0, kDefaultQuadTol};
  double theta0 = theta0_deg * kPi / 180.0;
  Point start{std::sin(theta0), 0, std::cos(theta0)};
  Point equator_point{1, 0, 0};

  Path first_leg = theta0_deg >= 90.0 - 1e-12
                       ? Path::point_path(s, equator_point)
                       : Path::from_waypoints(s, {start, equator_point});

  // Equator split into quarter arcs, 'circuits' times around.
  std::vector<GeodesicSegment> arcs;
  for (int q = 0; q < 4 * circuits; ++q) {
    double lon = q * kPi / 2;
    Point a{std::cos(lon), std::sin(lon), 0};
    Vec3 dir{-std::sin(lon), std::cos(lon), 0};
    arcs.push_back(make_segment(s, a, dir, kPi / 2));
  }
  Path second_leg = Path::from_segments(s, std::move(arcs));

  // Half-step offset grid avoids the exact antipode; circuit marks added.
  std::vector<double> xs;
  const double step = 2 * kPi / samples_per_circuit;
  for (int j = 1; j <= samples_per_circuit * circuits; ++j) xs.push_back((j - 0.5) * step);
  for (int k = 1; k <= circuits; ++k) xs.push_back(k * 2 * kPi);
  xs.push_back(0.0);
  std::sort(xs.begin(), xs.end());

  SphereExperimentResult out;
  out.theta0_deg = theta0_deg;
  out.quantum_n = n;
  out.circuits = circuits;
  out.samples_per_circuit = samples_per_circuit;
  out.trace = deflection_trace(cx, first_leg, second_leg, xs);

  const double tau = cx.taille();
  auto phase_of = [&](double phi_unwrapped) { return 2 * kPi * n * phi_unwrapped / tau; };

  // Total change over the first circuit and linearity against n*longitude/2.
  for (size_t i = 0; i < out.trace.size(); ++i) {
    if (!out.trace.defined[i]) continue;
    double x = out.trace.x[i];
    if (std::abs(x - 2 * kPi) < 1e-12) out.total_phase_change = phase_of(out.trace.phi_unwrapped[i]);
    if (x <= 2 * kPi + 1e-12) {
      double dev = std::abs(phase_of(out.trace.phi_unwrapped[i]) - 0.5 * n * x);
      out.max_linearity_deviation = std::max(out.max_linearity_deviation, dev);
    }
  }

  // Separate probe at the antipodal longitude.
  out.antipode_probe_undefined = !deflection_weight(cx, first_leg, second_leg, kPi).defined;

  // Sign flips of Re(w) between consecutive defined samples.
  double prev_re = 0;
  double prev_x = 0;
  bool have_prev = false;
  for (size_t i = 0; i < out.trace.size(); ++i) {
    if (!out.trace.defined[i]) continue;
    double re = out.trace.w[i].real();
    if (have_prev && prev_re * re < 0)
      out.sign_flip_longitudes.push_back(0.5 * (prev_x + out.trace.x[i]));
    prev_re = re;
    prev_x = out.trace.x[i];
    have_prev = true;
  }

  // Steepest phase slope within the first circuit.
  double best_slope = -1;
  have_prev = false;
  double prev_phase = 0;
  prev_x = 0;
  for (size_t i = 0; i < out.trace.size(); ++i) {
    if (!out.trace.defined[i] || out.trace.x[i] > 2 * kPi + 1e-12) continue;
    double ph = phase_of(out.trace.phi_unwrapped[i]);
    if (have_prev && out.trace.x[i] > prev_x + 1e-12) {
      double slope = std::abs(ph - prev_phase) / (out.trace.x[i] - prev_x);
      if (slope > best_slope) {
        best_slope = slope;
        out.steepest_slope_longitude = 0.5 * (prev_x + out.trace.x[i]);
      }
    }
    prev_phase = ph;
    prev_x = out.trace.x[i];
    have_prev = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Triangulated sphere and the non-triviality pipeline.

struct TriangulatedSphere {
  int level = 0;
  SimplicialSurface complex;
  std::vector<double> face_areas;
  double total_area = 0;
  double max_face_area = 0;
  double min_face_area = 0;
  std::optional<PosetPathSemigroup> poset;
  std::optional<Cochain> restricted_real;        // ruled-sheet representatives
  std::optional<Cochain> restricted_mod_taille;  // reduced mod 4*pi*c
};

inline constexpr int kMaxSubdivisionLevel = 5;
// Semigroup tables are materialized only up to this poset size.
inline constexpr int kMaxPosetElements = 5000;

inline TriangulatedSphere build_triangulated_sphere(int level, double quad_tol = 1e-9,
                                                    bool want_semigroup = true) {
  if (level < 0 || level > kMaxSubdivisionLevel)
    raise(ErrorCode::LevelTooLarge, "subdivision level must lie in [0, 5]");
  TriangulatedSphere out;
  out.level = level;
  out.complex = icosahedron_sphere();
  for (int k = 0; k < level; ++k) out.complex = subdivide_projected(out.complex);

  out.face_areas.reserve(out.complex.faces.size());
  for (const auto& f : out.complex.faces)
    out.face_areas.push_back(geodesic_triangle_area(out.complex.surface,
                                                    out.complex.vertices[f[0]],
                                                    out.complex.vertices[f[1]],
                                                    out.complex.vertices[f[2]]));
  out.total_area = 0;
  out.max_face_area = 0;
  out.min_face_area = out.face_areas.empty() ? 0 : std::abs(out.face_areas.front());
  for (double a : out.face_areas) {
    out.total_area += a;
    out.max_face_area = std::max(out.max_face_area, std::abs(a));
    out.min_face_area = std::min(out.min_face_area, std::abs(a));
  }

  if (!want_semigroup) return out;
  PosetPathSemigroup poset = build_poset_path_semigroup(out.complex, kMaxPosetElements);
  const Surface& s = out.complex.surface;
  double tau = s.taille();

  auto value_on = [&](const Cochain::Tuple& t) -> double {
    auto [x, y] = poset.pair_of[t[0]];
    auto [y2, z] = poset.pair_of[t[1]];
    if (x == y || y2 == z) return 0.0;  // a point-path factor: degenerate sheet
    const Point& px = poset.node_position[x];
    const Point& py = poset.node_position[y];
    const Point& pz = poset.node_position[z];
    GeodesicSegment gxy = geodesic_between(s, px, py);
    GeodesicSegment gyz = geodesic_between(s, py, pz);
    GeodesicSegment gxz = geodesic_between(s, px, pz);
    auto v = detail::sphere_triangle_value(s, px, py, pz, gxy, gyz, gxz, quad_tol);
    if (!v) raise(ErrorCode::NonUniqueGeodesic, "restricted cocycle sheet failed");
    return *v;
  };
  out.restricted_real =
      Cochain::from_function(poset.semigroup, 2, Coefficients::AdditiveReal, 0.0,
                             [&](const Cochain::Tuple& t) { return value_on(t); });
  out.restricted_mod_taille = Cochain::from_function(
      poset.semigroup, 2, Coefficients::AdditiveModTaille, tau,
      [&](const Cochain::Tuple& t) { return out.restricted_real->value(t); });
  out.poset = std::move(poset);
  return out;
}

struct NontrivialityReport {
  int level = 0;
  int quantum_n = 1;
  double taille = 0;
  // Real coefficients: the fundamental-cycle pairing obstructs any solve.
  double fundamental_pairing = 0;
  double real_residual_lower_bound = 0;  // |pairing| / (number of flag equations)
  bool real_trivial = true;
  double real_solve_residual = 0;
  // Mod-taille status for the cochain n * omega.
  ModTailleStatus mod_status = ModTailleStatus::Undecided;
  bool mod_obstruction_free = false;
  double mod_pairing_offset = 0;  // distance of the pairing from tau * Z
  // Continuity engine: cell maxima shrink under subdivision, while any
  // solving 1-cochain must reach at least min-cell/3 somewhere.
  double epsilon_max_element_length = 0;
  double min_cell_value = 0;
  double max_cell_value = 0;
  double pigeonhole_bound = 0;  // min-cell / 3
  bool small_phase_forces_real_case = false;
  std::vector<double> max_cell_by_level;
};

inline NontrivialityReport nontriviality_report(const TriangulatedSphere& ts, int n) {
  if (!ts.poset || !ts.restricted_real || !ts.restricted_mod_taille)
    raise(ErrorCode::InvalidInput, "triangulated sphere was built without its semigroup");
  const PosetPathSemigroup& poset = *ts.poset;
  NontrivialityReport out;
  out.level = ts.level;
  out.quantum_n = n;
  out.taille = ts.restricted_mod_taille->taille();

  CochainCycle fundamental = poset.fundamental_cycle();
  out.fundamental_pairing = cycle_pairing(*ts.restricted_real, fundamental);
  long long weight = 0;
  for (int c : fundamental.coefficients) weight += std::abs(c);
  out.real_residual_lower_bound = std::abs(out.fundamental_pairing) / static_cast<double>(weight);

  CoboundarySolve solve = solve_coboundary_real(*ts.restricted_real, 1e-8);
  out.real_trivial = solve.trivial;
  out.real_solve_residual = solve.max_residual;

  // Quantum number n rescales the additive cocycle before reduction.
  Cochain scaled = Cochain::from_function(
      poset.semigroup, 2, Coefficients::AdditiveModTaille, out.taille,
      [&](const Cochain::Tuple& t) { return n * ts.restricted_real->value(t); });
  double mod_pairing = cycle_pairing(scaled, fundamental);
  out.mod_pairing_offset = TailleValue(mod_pairing, out.taille).distance_to(0.0);
  ModTailleResult mod = mod_taille_triviality(scaled, {fundamental}, 1e-6);
  out.mod_status = mod.status;
  out.mod_obstruction_free = mod.obstruction_free;

  for (size_t i = 0; i < poset.flag_cells.size(); ++i) {
    auto [v, e, f] = poset.flag_cells[i];
    Cochain::Tuple t{static_cast<std::int32_t>(poset.element_of.at({v, e})),
                     static_cast<std::int32_t>(poset.element_of.at({e, f}))};
    double a = std::abs(ts.restricted_real->real_value(t));
    out.min_cell_value = i == 0 ? a : std::min(out.min_cell_value, a);
    out.max_cell_value = std::max(out.max_cell_value, a);
  }
  out.pigeonhole_bound = out.min_cell_value / 3.0;
  for (const auto& [pair, e] : poset.element_of) {
    double len = distance(ts.complex.surface, poset.node_position[pair[0]],
                          poset.node_position[pair[1]]);
    out.epsilon_max_element_length = std::max(out.epsilon_max_element_length, len);
  }
  out.small_phase_forces_real_case =
      out.epsilon_max_element_length + out.max_cell_value < out.taille;

  int top = std::min(ts.level + 1, kMaxSubdivisionLevel);
  for (int k = 0; k <= top; ++k) {
    TriangulatedSphere coarse = build_triangulated_sphere(k, 1e-9, false);
    out.max_cell_by_level.push_back(coarse.max_face_area);
  }
  return out;
}

}  // namespace tailor
