#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "blochlab/polynomial.hpp"
#include "blochlab/types.hpp"

namespace blochlab {

// Complex scalars serialize as [re, im]; points as arrays of such pairs.
nlohmann::json complex_to_json(cplx c);
cplx complex_from_json(const nlohmann::json& j);

nlohmann::json point_to_json(std::span<const cplx> z);
std::vector<cplx> point_from_json(const nlohmann::json& j);

// {"type": "series", "terms": [{"exponents": [...], "coeff": [re, im]}, ...]}
nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t n);

}  // namespace blochlab
