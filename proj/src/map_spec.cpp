#include "blochlab/map_spec.hpp"

#include <fstream>

#include "blochlab/json_io.hpp"
#include "blochlab/test_functions.hpp"

namespace blochlab {

namespace {

std::size_t one_based(const nlohmann::json& node, const char* key, std::size_t n) {
  const auto v = node.at(key).get<long long>();
  if (v < 1 || static_cast<std::size_t>(v) > n) {
    throw std::out_of_range(std::string("spec: '") + key + "' must lie in 1.." + std::to_string(n));
  }
  return static_cast<std::size_t>(v - 1);
}

std::size_t dimension_of(const nlohmann::json& spec) {
  const auto n = spec.at("dimension").get<long long>();
  if (n < 1 || static_cast<std::size_t>(n) > kMaxDim) throw DimensionError("spec: dimension out of range");
  return static_cast<std::size_t>(n);
}

std::vector<HoloFunction> components_from_json(const nlohmann::json& list, std::size_t n, int cap) {
  if (!list.is_array() || list.size() != n) throw DimensionError("spec: component count must equal the dimension");
  std::vector<HoloFunction> out;
  for (const auto& c : list) out.push_back(function_from_json(c, n, cap));
  return out;
}

}  // namespace

HoloFunction function_from_json(const nlohmann::json& node, std::size_t n, int degree_cap) {
  const std::string type = node.at("type").get<std::string>();
  if (type == "series") return HoloFunction::polynomial(polynomial_from_json(node, n));
  if (type == "moebius") {
    return moebius_factor(n, one_based(node, "source", n), complex_from_json(node.at("a")),
                          node.value("theta", 0.0));
  }
  if (type == "kernel_power") {
    return kernel_power(n, one_based(node, "l", n), complex_from_json(node.at("w")), node.at("s").get<double>(),
                        node.contains("c") ? complex_from_json(node.at("c")) : cplx{1.0});
  }
  if (type == "test_function") {
    TestSpec t;
    t.family = family_from_name(node.at("family").get<std::string>());
    t.n = n;
    t.l = one_based(node, "l", n);
    t.w = complex_from_json(node.at("w"));
    t.p = node.at("p").get<double>();
    return make_test(t);
  }
  if (type == "sum") {
    HoloFunction acc = HoloFunction::constant(n, 0.0);
    for (const auto& t : node.at("terms")) {
      const cplx c = t.contains("coeff") ? complex_from_json(t.at("coeff")) : cplx{1.0};
      acc = acc + c * function_from_json(t.at("function"), n, degree_cap);
    }
    return acc;
  }
  if (type == "product") {
    HoloFunction acc = HoloFunction::constant(n, 1.0);
    for (const auto& f : node.at("factors")) acc = acc * function_from_json(f, n, degree_cap);
    return acc;
  }
  if (type == "composition") {
    const auto& inner_json = node.at("inner");
    if (!inner_json.is_array() || inner_json.empty()) throw std::invalid_argument("spec: composition needs inner functions");
    std::vector<HoloFunction> inner;
    for (const auto& g : inner_json) inner.push_back(function_from_json(g, n, degree_cap));
    const HoloFunction outer = function_from_json(node.at("outer"), inner.size(), degree_cap);
    return compose(outer, HoloSelfMap(std::move(inner)), degree_cap);
  }
  throw std::invalid_argument("spec: unknown function type '" + type + "'");
}

HoloSelfMap map_from_json(const nlohmann::json& spec, int degree_cap) {
  const std::size_t n = dimension_of(spec);
  HoloSelfMap outer(components_from_json(spec.at("components"), n, degree_cap));
  if (!spec.contains("compose")) return outer;
  std::optional<HoloSelfMap> chain;
  for (const auto& m : spec.at("compose")) {
    HoloSelfMap step(components_from_json(m.at("components"), n, degree_cap));
    chain = chain ? compose(step, *chain, degree_cap) : step;
  }
  return chain ? compose(outer, *chain, degree_cap) : outer;
}

HoloFunction function_spec_from_json(const nlohmann::json& spec, int degree_cap) {
  return function_from_json(spec.at("function"), dimension_of(spec), degree_cap);
}

nlohmann::json map_to_json(const HoloSelfMap& phi) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& f : phi.components()) comps.push_back(f.node().to_json());
  return {{"dimension", phi.dimension()}, {"components", comps}};
}

nlohmann::json function_spec_to_json(const HoloFunction& f) {
  return {{"dimension", f.dimension()}, {"function", f.node().to_json()}};
}

LoadedSpec parse_spec(const nlohmann::json& spec, int degree_cap) {
  LoadedSpec out;
  if (spec.contains("components")) {
    out.map = map_from_json(spec, degree_cap);
  } else if (spec.contains("function")) {
    out.function = function_spec_from_json(spec, degree_cap);
  } else {
    throw std::invalid_argument("spec: expected a 'components' or a 'function' entry");
  }
  return out;
}

LoadedSpec load_spec(const std::filesystem::path& path, int degree_cap) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path.string());
  return parse_spec(nlohmann::json::parse(in), degree_cap);
}

}  // namespace blochlab
