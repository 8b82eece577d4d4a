#pragma once

#include <complex>
#include <map>
#include <optional>
#include <utility>

#include "tailor/cochain.hpp"

namespace tailor {

// Formal sum over the nonzero elements of a finite semigroup.
class SemigroupSum {
 public:
  SemigroupSum() = default;

  static SemigroupSum basis(const FiniteSemigroup& sg, int element, Cplx c = 1.0) {
    SemigroupSum s;
    if (element != sg.zero_index()) s.add(element, c);
    return s;
  }

  SemigroupSum& add(int element, Cplx c) {
    auto it = terms_.find(element);
    if (it == terms_.end()) {
      if (std::abs(c) > 1e-14) terms_.emplace(element, c);
    } else {
      it->second += c;
      if (std::abs(it->second) <= 1e-14) terms_.erase(it);
    }
    return *this;
  }

  const std::map<int, Cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Cplx coefficient(int element) const {
    auto it = terms_.find(element);
    return it == terms_.end() ? Cplx{0, 0} : it->second;
  }

  double distance_to(const SemigroupSum& o) const {
    double d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, std::abs(c - o.coefficient(k)));
    for (const auto& [k, c] : o.terms_)
      if (!terms_.count(k)) d = std::max(d, std::abs(c));
    return d;
  }

 private:
  std::map<int, Cplx> terms_;
};

// A semigroup algebra with multiplication a * b = f(a, b) ab for a
// multiplicative 2-cocycle f (or the plain product when f is absent).
class DeformedAlgebra {
 public:
  explicit DeformedAlgebra(SemigroupPtr sg, std::optional<Cochain> weight = std::nullopt)
      : sg_(std::move(sg)), weight_(std::move(weight)) {}

  const FiniteSemigroup& semigroup() const { return *sg_; }
  const std::optional<Cochain>& weight() const { return weight_; }

  SemigroupSum multiply(const SemigroupSum& u, const SemigroupSum& v) const {
    SemigroupSum out;
    Cochain::Tuple pair(2);
    for (const auto& [a, ca] : u.terms()) {
      for (const auto& [b, cb] : v.terms()) {
        int p = sg_->product(a, b);
        if (p == sg_->zero_index()) continue;
        Cplx c = ca * cb;
        if (weight_) {
          pair[0] = a;
          pair[1] = b;
          c *= weight_->value(pair);
        }
        out.add(p, c);
      }
    }
    return out;
  }

  // The basis map a -> g(a) a extended linearly (g a multiplicative
  // 1-cochain); intertwines the deformed and plain products when the weight
  // is the coboundary of g.
  SemigroupSum rescale_basis(const SemigroupSum& u, const Cochain& g) const {
    SemigroupSum out;
    Cochain::Tuple one(1);
    for (const auto& [a, ca] : u.terms()) {
      one[0] = a;
      out.add(a, ca * g.value(one));
    }
    return out;
  }

 private:
  SemigroupPtr sg_;
  std::optional<Cochain> weight_;
};

// Checks the cocycle identity and wraps the weighted product.
inline DeformedAlgebra coherent_deformation(SemigroupPtr sg, Cochain f, double tol = 1e-9) {
  if (f.arity() != 2 || f.additive())
    raise(ErrorCode::InvalidInput, "coherent deformation needs a multiplicative 2-cochain");
  CocycleCheck chk = is_cocycle(f, tol);
  if (!chk.ok) raise(ErrorCode::NotACocycle, "weight fails the 2-cocycle identity");
  return DeformedAlgebra(std::move(sg), std::move(f));
}

}  // namespace tailor
