#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "tailor/geometry.hpp"
#include "tailor/semigroup.hpp"

namespace tailor {

using Cplx = std::complex<double>;

enum class Coefficients {
  AdditiveReal,
  AdditiveModTaille,
  MultiplicativeReal,
  MultiplicativeUnitComplex,
};

inline const char* coefficients_name(Coefficients c) {
  switch (c) {
    case Coefficients::AdditiveReal: return "additive_real";
    case Coefficients::AdditiveModTaille: return "additive_mod_taille";
    case Coefficients::MultiplicativeReal: return "multiplicative_real";
    case Coefficients::MultiplicativeUnitComplex: return "multiplicative_unit_complex";
  }
  return "?";
}

// An n-cochain of the 0-cohomology complex: a total table on tuples of
// nonzero elements, forced to the coefficient-group identity whenever the
// tuple's product is zero (those entries are never stored).
class Cochain {
 public:
  using Tuple = std::vector<std::int32_t>;

  Cochain(SemigroupPtr sg, int arity, Coefficients coeffs, double taille = 0)
      : sg_(std::move(sg)), arity_(arity), coeffs_(coeffs), taille_(taille) {
    if (arity_ < 1) raise(ErrorCode::InvalidInput, "cochain arity must be >= 1");
    if (coeffs_ == Coefficients::AdditiveModTaille && taille_ <= 0)
      raise(ErrorCode::InvalidTaille, "mod-taille coefficients need taille > 0");
    if (coeffs_ != Coefficients::AdditiveModTaille) taille_ = 0;
    for_each_nonzero_tuple(*sg_, arity_, [&](const Tuple& t, int) {
      values_.emplace(t, identity());
    });
  }

  template <class Fn>
  static Cochain from_function(SemigroupPtr sg, int arity, Coefficients coeffs, double taille,
                               Fn&& fn) {
    Cochain c(std::move(sg), arity, coeffs, taille);
    for (auto& [t, v] : c.values_) v = c.normalize(fn(t));
    return c;
  }

  const FiniteSemigroup& semigroup() const { return *sg_; }
  SemigroupPtr semigroup_ptr() const { return sg_; }
  int arity() const { return arity_; }
  Coefficients coefficients() const { return coeffs_; }
  double taille() const { return taille_; }
  bool additive() const {
    return coeffs_ == Coefficients::AdditiveReal || coeffs_ == Coefficients::AdditiveModTaille;
  }

  Cplx identity() const { return additive() ? Cplx{0, 0} : Cplx{1, 0}; }

  // The value on a tuple; the identity when the tuple's product is zero.
  Cplx value(const Tuple& t) const {
    auto it = values_.find(t);
    return it == values_.end() ? identity() : it->second;
  }
  double real_value(const Tuple& t) const { return value(t).real(); }

  void set(const Tuple& t, Cplx v) {
    auto it = values_.find(t);
    if (it == values_.end())
      raise(ErrorCode::InvalidInput, "cannot set a cochain value on a zero-product tuple");
    it->second = normalize(v);
  }

  const std::map<Tuple, Cplx>& values() const { return values_; }
  std::map<Tuple, Cplx>& mutable_values() { return values_; }

  Cplx normalize(Cplx v) const {
    switch (coeffs_) {
      case Coefficients::AdditiveReal:
        return {v.real(), 0};
      case Coefficients::AdditiveModTaille:
        return {Surface::reduce(v.real(), taille_), 0};
      case Coefficients::MultiplicativeReal:
        if (v.real() == 0) raise(ErrorCode::InvalidInput, "multiplicative value must be nonzero");
        return {v.real(), 0};
      case Coefficients::MultiplicativeUnitComplex: {
        double m = std::abs(v);
        if (m == 0) raise(ErrorCode::InvalidInput, "unit-complex value must be nonzero");
        return v / m;
      }
    }
    return v;
  }

  // Distance of a value from the coefficient-group identity.
  double residual_from_identity(Cplx v) const {
    switch (coeffs_) {
      case Coefficients::AdditiveReal:
        return std::abs(v.real());
      case Coefficients::AdditiveModTaille:
        return TailleValue(v.real(), taille_).distance_to(0.0);
      case Coefficients::MultiplicativeReal:
      case Coefficients::MultiplicativeUnitComplex:
        return std::abs(v - Cplx{1, 0});
    }
    return 0;
  }

 private:
  SemigroupPtr sg_;
  int arity_;
  Coefficients coeffs_;
  double taille_;
  std::map<Tuple, Cplx> values_;
};

namespace detail {

// delta F evaluated on an (arity+1)-tuple whose full product is nonzero; all
// face lookups then land on nonzero-product tuples.
inline Cplx coboundary_value(const Cochain& F, const Cochain::Tuple& t) {
  const auto& sg = F.semigroup();
  const int k = F.arity();
  Cochain::Tuple face(t.begin() + 1, t.end());  // drop the first entry
  Cplx head = F.value(face);
  bool additive = F.additive();
  Cplx acc = head;
  for (int i = 1; i <= k; ++i) {
    // replace (a_i, a_{i+1}) by their product (1-based positions)
    face.assign(t.begin(), t.end());
    face[i - 1] = sg.product(t[i - 1], t[i]);
    face.erase(face.begin() + i);
    Cplx v = F.value(face);
    if (additive)
      acc += (i % 2 == 0) ? v : -v;
    else
      acc *= (i % 2 == 0) ? v : Cplx{1, 0} / v;
  }
  face.assign(t.begin(), t.end() - 1);
  Cplx tail = F.value(face);
  if (additive)
    acc += ((k + 1) % 2 == 0) ? tail : -tail;
  else
    acc *= ((k + 1) % 2 == 0) ? tail : Cplx{1, 0} / tail;
  return acc;
}

}  // namespace detail

// The coboundary per the alternating-sum formula (multiplicative form when
// the coefficients are multiplicative); vanishes on zero products.
inline Cochain coboundary(const Cochain& F) {
  return Cochain::from_function(
      F.semigroup_ptr(), F.arity() + 1, F.coefficients(), F.taille(),
      [&](const Cochain::Tuple& t) { return detail::coboundary_value(F, t); });
}

// (F cup+ G)(a_1..a_{m+k}) = F(a_1..a_m) + G(a_{m+1}..a_{m+k}).
inline Cochain cup_sum(const Cochain& F, const Cochain& G) {
  if (!F.additive() || F.coefficients() != G.coefficients() || F.taille() != G.taille() ||
      &F.semigroup() != &G.semigroup())
    raise(ErrorCode::CoefficientMismatch, "cup sum needs matching additive coefficients");
  int m = F.arity();
  return Cochain::from_function(
      F.semigroup_ptr(), m + G.arity(), F.coefficients(), F.taille(),
      [&](const Cochain::Tuple& t) {
        Cochain::Tuple left(t.begin(), t.begin() + m);
        Cochain::Tuple right(t.begin() + m, t.end());
        return F.value(left) + G.value(right);
      });
}

struct CocycleCheck {
  bool ok = false;
  double max_residual = 0;
  Cochain::Tuple worst;
};

// True iff the defining identity delta F = identity holds within tol over
// all tuples with nonzero product.
inline CocycleCheck is_cocycle(const Cochain& F, double tol = 1e-9) {
  CocycleCheck out;
  for_each_nonzero_tuple(F.semigroup(), F.arity() + 1, [&](const Cochain::Tuple& t, int) {
    double r = F.residual_from_identity(detail::coboundary_value(F, t));
    if (r > out.max_residual) {
      out.max_residual = r;
      out.worst = t;
    }
  });
  out.ok = out.max_residual <= tol;
  return out;
}

// Continuous family exp(lambda * F) of multiplicative weights from an
// additive real cochain.
inline Cochain exp_cocycle(const Cochain& F, double lambda) {
  if (F.coefficients() != Coefficients::AdditiveReal)
    raise(ErrorCode::CoefficientMismatch, "lambda-mode exponentiation needs additive real values");
  return Cochain::from_function(F.semigroup_ptr(), F.arity(), Coefficients::MultiplicativeReal,
                                0.0, [&](const Cochain::Tuple& t) {
                                  return std::exp(lambda * F.real_value(t));
                                });
}

// Quantized family exp((2 n pi i / tau) F) from a mod-taille cochain; the
// weight does not depend on the chosen representative.
inline Cochain exp_cocycle_quantized(const Cochain& F, int quantum_n) {
  if (F.coefficients() != Coefficients::AdditiveModTaille || F.taille() <= 0)
    raise(ErrorCode::InvalidTaille, "quantized exponentiation needs mod-taille values");
  double omega = 2.0 * kPi * quantum_n / F.taille();
  return Cochain::from_function(F.semigroup_ptr(), F.arity(),
                                Coefficients::MultiplicativeUnitComplex, 0.0,
                                [&](const Cochain::Tuple& t) {
                                  double v = F.real_value(t);
                                  return Cplx{std::cos(omega * v), std::sin(omega * v)};
                                });
}

// The restriction of a cochain to a subsemigroup: cocycles restrict to
// cocycles and coboundaries to coboundaries.
inline Cochain restrict_cochain(const Cochain& F, const Subsemigroup& sub) {
  return Cochain::from_function(
      sub.semigroup, F.arity(), F.coefficients(), F.taille(), [&](const Cochain::Tuple& t) {
        Cochain::Tuple parent(t.size());
        for (size_t i = 0; i < t.size(); ++i) parent[i] = sub.to_parent[t[i]];
        return F.value(parent);
      });
}

}  // namespace tailor
