#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tailor/path.hpp"

namespace tailor {

using Cplx = std::complex<double>;

inline constexpr double kCoeffPruneTol = 1e-14;

// Finite-support linear combination of basis paths. Paths are identified by
// their canonical keys; zero coefficients are pruned.
class PathSum {
 public:
  struct Term {
    Path path;
    Cplx coeff;
  };

  PathSum() = default;

  static PathSum basis(const Path& p, Cplx c = 1.0) {
    PathSum s;
    s.add(p, c);
    return s;
  }

  PathSum& add(const Path& p, Cplx c) {
    auto key = p.canonical_key();
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      if (std::abs(c) > kCoeffPruneTol) terms_.emplace(std::move(key), Term{p, c});
    } else {
      it->second.coeff += c;
      if (std::abs(it->second.coeff) <= kCoeffPruneTol) terms_.erase(it);
    }
    return *this;
  }

  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [k, t] : terms_) out.push_back(t);
    return out;
  }

  Cplx coefficient(const Path& p) const {
    auto it = terms_.find(p.canonical_key());
    return it == terms_.end() ? Cplx{0, 0} : it->second.coeff;
  }

  // Largest coefficient difference over the union of supports.
  double distance_to(const PathSum& o) const {
    double d = 0;
    for (const auto& [k, t] : terms_) {
      auto it = o.terms_.find(k);
      Cplx oc = it == o.terms_.end() ? Cplx{0, 0} : it->second.coeff;
      d = std::max(d, std::abs(t.coeff - oc));
    }
    for (const auto& [k, t] : o.terms_)
      if (!terms_.count(k)) d = std::max(d, std::abs(t.coeff));
    return d;
  }

 private:
  std::map<std::vector<long long>, Term> terms_;
};

// A multiplicative 2-cochain on paths; nullopt marks an undefined weight.
using PathWeight = std::function<std::optional<Cplx>(const Path&, const Path&)>;

// Bilinear extension of the (weighted) concatenation product. Zero products
// drop out; an undefined weight on a needed nonzero product raises
// UndefinedWeight.
inline PathSum algebra_mul(const PathSum& u, const PathSum& v,
                           const PathWeight* weight = nullptr) {
  PathSum out;
  for (const auto& a : u.terms()) {
    for (const auto& b : v.terms()) {
      std::optional<Path> prod = concat(a.path, b.path);
      if (!prod) continue;
      Cplx c = a.coeff * b.coeff;
      if (weight && *weight) {
        std::optional<Cplx> w = (*weight)(a.path, b.path);
        if (!w) raise(ErrorCode::UndefinedWeight, "weight undefined on a nonzero product");
        c *= *w;
      }
      out.add(*prod, c);
    }
  }
  return out;
}

}  // namespace tailor
