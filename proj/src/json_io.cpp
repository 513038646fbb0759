#include "blochlab/json_io.hpp"

#include <stdexcept>

namespace blochlab {

nlohmann::json complex_to_json(cplx c) { return nlohmann::json::array({c.real(), c.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument("expected a complex number as [re, im], got " + j.dump());
}

nlohmann::json point_to_json(std::span<const cplx> z) {
  nlohmann::json out = nlohmann::json::array();
  for (const cplx& c : z) out.push_back(complex_to_json(c));
  return out;
}

std::vector<cplx> point_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a point as an array of [re, im] pairs");
  std::vector<cplx> z;
  for (const auto& c : j) z.push_back(complex_from_json(c));
  return z;
}

nlohmann::json polynomial_to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [gamma, c] : p.terms()) {
    terms.push_back({{"exponents", gamma.exponents()}, {"coeff", complex_to_json(c)}});
  }
  return {{"type", "series"}, {"terms", terms}};
}

Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t n) {
  Polynomial p(n);
  for (const auto& t : j.at("terms")) {
    auto e = t.at("exponents").get<std::vector<int>>();
    if (e.size() != n) throw DimensionError("series term exponent count does not match the dimension");
    p.add_term(MultiIndex(std::move(e)), complex_from_json(t.at("coeff")));
  }
  return p;
}

}  // namespace blochlab
