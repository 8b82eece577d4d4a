#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>

#include "tailor/cochain.hpp"

namespace tailor {

namespace detail {

struct CoboundarySystem {
  Eigen::SparseMatrix<double> A;       // rows: nonzero-product pairs
  std::vector<std::array<int, 3>> eqs; // (a, b, ab) per row
  std::vector<int> column_of;          // element -> column (-1 for zero)
  std::vector<int> element_of;         // column -> element
};

// Linear system for delta g = F over the nonzero-product pairs, with the
// convention delta g(a, b) = g(a) + g(b) - g(ab).
inline CoboundarySystem coboundary_system(const FiniteSemigroup& sg) {
  CoboundarySystem sys;
  sys.column_of.assign(sg.size(), -1);
  for (int e : sg.nonzero_elements()) {
    sys.column_of[e] = static_cast<int>(sys.element_of.size());
    sys.element_of.push_back(e);
  }
  for_each_nonzero_tuple(sg, 2, [&](const Cochain::Tuple& t, int prod) {
    sys.eqs.push_back({t[0], t[1], prod});
  });
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(sys.eqs.size() * 3);
  for (size_t r = 0; r < sys.eqs.size(); ++r) {
    auto [a, b, ab] = sys.eqs[r];
    trips.emplace_back(static_cast<int>(r), sys.column_of[a], 1.0);
    trips.emplace_back(static_cast<int>(r), sys.column_of[b], 1.0);
    trips.emplace_back(static_cast<int>(r), sys.column_of[ab], -1.0);
  }
  sys.A.resize(static_cast<int>(sys.eqs.size()), static_cast<int>(sys.element_of.size()));
  sys.A.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

inline Eigen::VectorXd least_squares(const Eigen::SparseMatrix<double>& A,
                                     const Eigen::VectorXd& rhs) {
  Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<double>> solver;
  solver.setTolerance(1e-14);
  solver.setMaxIterations(8 * (A.cols() + A.rows()));
  solver.compute(A);
  return solver.solve(rhs);
}

}  // namespace detail

struct CoboundarySolve {
  bool trivial = false;
  std::vector<double> g;  // indexed by semigroup element; 0 at the zero index
  double max_residual = 0;
};

// Least-squares solve of delta g = F over the nonzero-product pairs of an
// additive real 2-cochain; trivial when the max residual is below tol.
inline CoboundarySolve solve_coboundary_real(const Cochain& F, double tol = 1e-8) {
  if (F.arity() != 2 || F.coefficients() != Coefficients::AdditiveReal)
    raise(ErrorCode::CoefficientMismatch, "solver needs an additive real 2-cochain");
  const auto& sg = F.semigroup();
  detail::CoboundarySystem sys = detail::coboundary_system(sg);
  Eigen::VectorXd rhs(sys.eqs.size());
  Cochain::Tuple pair(2);
  for (size_t r = 0; r < sys.eqs.size(); ++r) {
    pair[0] = sys.eqs[r][0];
    pair[1] = sys.eqs[r][1];
    rhs[static_cast<int>(r)] = F.real_value(pair);
  }
  Eigen::VectorXd x = sys.eqs.empty() ? Eigen::VectorXd::Zero(sys.element_of.size())
                                      : detail::least_squares(sys.A, rhs);
  CoboundarySolve out;
  out.g.assign(sg.size(), 0.0);
  for (size_t c = 0; c < sys.element_of.size(); ++c) out.g[sys.element_of[c]] = x[static_cast<int>(c)];
  if (!sys.eqs.empty()) {
    Eigen::VectorXd res = sys.A * x - rhs;
    out.max_residual = res.cwiseAbs().maxCoeff();
  }
  out.trivial = out.max_residual <= tol;
  return out;
}

// The image of a simplicial 2-cycle inside a semigroup: per 2-cell the pair
// of elements the cochain is evaluated on, with integer coefficients.
struct CochainCycle {
  std::vector<std::array<std::int32_t, 2>> cells;
  std::vector<int> coefficients;
};

// Sum of F's per-cell values weighted by the cycle's coefficients; for a
// fundamental cycle of per-cell form integrals this is the total integral.
inline double cycle_pairing(const Cochain& F, const CochainCycle& z) {
  if (F.arity() != 2 || !F.additive())
    raise(ErrorCode::CoefficientMismatch, "pairing needs an additive 2-cochain");
  if (z.cells.size() != z.coefficients.size())
    raise(ErrorCode::ComplexMismatch, "cycle cells and coefficients differ in length");
  const auto& sg = F.semigroup();
  double sum = 0;
  Cochain::Tuple pair(2);
  for (size_t i = 0; i < z.cells.size(); ++i) {
    auto [e1, e2] = z.cells[i];
    if (e1 < 0 || e1 >= sg.size() || e2 < 0 || e2 >= sg.size())
      raise(ErrorCode::ComplexMismatch, "cycle references an element outside the semigroup");
    if (sg.product(e1, e2) == sg.zero_index())
      raise(ErrorCode::ComplexMismatch, "cycle cell has a zero product");
    pair[0] = e1;
    pair[1] = e2;
    sum += z.coefficients[i] * F.real_value(pair);
  }
  return sum;
}

enum class ModTailleStatus { Trivial, NotTrivial, Undecided };

struct ModTailleResult {
  ModTailleStatus status = ModTailleStatus::Undecided;
  bool obstruction_free = false;  // every cycle pairing lies in tau Z
  int witness_cycle = -1;         // index into the cycle basis when NotTrivial
  double witness_pairing = 0;
  std::vector<double> g;          // mod-tau solution when Trivial
  double max_residual = 0;
};

// Mod-tau triviality of an additive mod-taille 2-cochain: cycle pairings
// outside tau Z give NotTrivial with a witness; otherwise a lifted real
// solve with per-equation integer offsets (seeded by rounding the continuous
// solution) is attempted. Deliberately incomplete: unstable rounding or a
// failed lift gives Undecided.
inline ModTailleResult mod_taille_triviality(const Cochain& F,
                                             const std::vector<CochainCycle>& cycles,
                                             double tol = 1e-8) {
  if (F.arity() != 2 || F.coefficients() != Coefficients::AdditiveModTaille)
    raise(ErrorCode::CoefficientMismatch, "mod-taille solver needs a mod-taille 2-cochain");
  const double tau = F.taille();
  ModTailleResult out;
  for (size_t i = 0; i < cycles.size(); ++i) {
    double p = cycle_pairing(F, cycles[i]);
    if (TailleValue(p, tau).distance_to(0.0) > tol) {
      out.status = ModTailleStatus::NotTrivial;
      out.witness_cycle = static_cast<int>(i);
      out.witness_pairing = p;
      return out;
    }
  }
  out.obstruction_free = true;

  const auto& sg = F.semigroup();
  detail::CoboundarySystem sys = detail::coboundary_system(sg);
  Eigen::VectorXd rhs(sys.eqs.size());
  Cochain::Tuple pair(2);
  for (size_t r = 0; r < sys.eqs.size(); ++r) {
    pair[0] = sys.eqs[r][0];
    pair[1] = sys.eqs[r][1];
    rhs[static_cast<int>(r)] = F.real_value(pair);
  }
  if (sys.eqs.empty()) {
    out.status = ModTailleStatus::Trivial;
    out.g.assign(sg.size(), 0.0);
    return out;
  }
  Eigen::VectorXd x0 = detail::least_squares(sys.A, rhs);
  Eigen::VectorXd gap = sys.A * x0 - rhs;
  Eigen::VectorXd lifted = rhs;
  for (int r = 0; r < gap.size(); ++r) {
    double offset = gap[r] / tau;
    double frac = offset - std::floor(offset);
    if (std::abs(frac - 0.5) < 0.1) return out;  // Undecided: unstable rounding
    lifted[r] = rhs[r] + tau * std::round(offset);
  }
  Eigen::VectorXd x = detail::least_squares(sys.A, lifted);
  Eigen::VectorXd res = sys.A * x - lifted;
  out.max_residual = res.cwiseAbs().maxCoeff();
  if (out.max_residual <= tol) {
    out.status = ModTailleStatus::Trivial;
    out.g.assign(sg.size(), 0.0);
    for (size_t c = 0; c < sys.element_of.size(); ++c)
      out.g[sys.element_of[c]] = Surface::reduce(x[static_cast<int>(c)], tau);
  }
  return out;
}

}  // namespace tailor
