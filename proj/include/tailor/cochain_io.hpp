#pragma once

#include <string>

#include <json.hpp>

#include "tailor/cochain.hpp"

namespace tailor {

// Cochain JSON: values as arrays keyed by index tuples,
// {"arity":, "coefficients":, "taille":, "values": [[[i,j], v], ...]};
// unit-complex values serialize as [re, im].
inline nlohmann::ordered_json cochain_to_json(const Cochain& F) {
  nlohmann::ordered_json j;
  j["arity"] = F.arity();
  j["coefficients"] = coefficients_name(F.coefficients());
  if (F.coefficients() == Coefficients::AdditiveModTaille) j["taille"] = F.taille();
  auto values = nlohmann::ordered_json::array();
  for (const auto& [t, v] : F.values()) {
    nlohmann::ordered_json tuple = nlohmann::ordered_json::array();
    for (auto i : t) tuple.push_back(i);
    if (F.coefficients() == Coefficients::MultiplicativeUnitComplex)
      values.push_back({tuple, {v.real(), v.imag()}});
    else
      values.push_back({tuple, v.real()});
  }
  j["values"] = values;
  return j;
}

inline Cochain cochain_from_json(SemigroupPtr sg, const nlohmann::ordered_json& j) {
  if (!j.contains("arity") || !j.contains("coefficients") || !j.contains("values"))
    raise(ErrorCode::InvalidInput, "cochain JSON needs arity, coefficients, values");
  std::string cname = j.at("coefficients").get<std::string>();
  Coefficients coeffs;
  if (cname == "additive_real")
    coeffs = Coefficients::AdditiveReal;
  else if (cname == "additive_mod_taille")
    coeffs = Coefficients::AdditiveModTaille;
  else if (cname == "multiplicative_real")
    coeffs = Coefficients::MultiplicativeReal;
  else if (cname == "multiplicative_unit_complex")
    coeffs = Coefficients::MultiplicativeUnitComplex;
  else
    raise(ErrorCode::InvalidInput, "unknown coefficient kind: " + cname);
  double taille = j.value("taille", 0.0);
  Cochain F(std::move(sg), j.at("arity").get<int>(), coeffs, taille);
  for (const auto& entry : j.at("values")) {
    if (!entry.is_array() || entry.size() != 2)
      raise(ErrorCode::InvalidInput, "cochain value entries are [tuple, value] pairs");
    Cochain::Tuple t;
    for (const auto& i : entry[0]) t.push_back(i.get<std::int32_t>());
    Cplx v;
    if (entry[1].is_array())
      v = {entry[1][0].get<double>(), entry[1][1].get<double>()};
    else
      v = {entry[1].get<double>(), 0.0};
    F.set(t, v);
  }
  return F;
}

}  // namespace tailor
