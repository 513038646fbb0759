// bloch_lab: norms, operator criteria and verification suites on the polydisk.
#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blochlab/experiments.hpp"
#include "blochlab/map_spec.hpp"
#include "blochlab/test_functions.hpp"

using namespace blochlab;

namespace {

void apply_thread_cap() {
  const char* env = std::getenv("BLOCH_LAB_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long t = std::strtol(env, &end, 10);
  if (*end != '\0' || t < 1) {
    std::cerr << "warning: ignoring BLOCH_LAB_THREADS=" << env << "\n";
    return;
  }
  omp_set_num_threads(static_cast<int>(t));
}

std::vector<ExponentPair> zip_exponents(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> ps = p.empty() ? std::vector<double>{1.0} : p;
  std::vector<double> qs = q.empty() ? std::vector<double>{1.0} : q;
  if (ps.size() != qs.size() && ps.size() != 1 && qs.size() != 1) {
    throw std::invalid_argument("--p and --q must have equal lengths or one of them a single value");
  }
  const std::size_t len = std::max(ps.size(), qs.size());
  std::vector<ExponentPair> out;
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back({ps[ps.size() == 1 ? 0 : i], qs[qs.size() == 1 ? 0 : i]});
  }
  return out;
}

cplx parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {std::stod(s), 0.0};
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"Bloch-space norms and composition-operator criteria on the unit polydisk"};
  app.require_subcommand(1);
  app.fallthrough();

  ExperimentConfig config;
  std::string spec;
  std::vector<double> ps;
  std::vector<double> qs;
  std::vector<std::string> theorems;
  std::string out_json;
  std::string out_csv;
  SamplingPlan& plan = config.criteria.plan;

  app.add_option("--spec", spec, "map or function specification (JSON)")->check(CLI::ExistingFile);
  app.add_option("--p", ps, "source exponent(s) p > 0")->delimiter(',');
  app.add_option("--q", qs, "target exponent(s) q > 0")->delimiter(',');
  app.add_option("--levels", plan.radial_levels, "radial levels of the sampling grid");
  app.add_option("--angles", plan.angular_count, "angle tuples per level tuple");
  app.add_option("--rounds", plan.refinement.max_rounds, "refinement rounds");
  app.add_option("--budget", plan.refinement.budget, "objective evaluation budget per search");
  app.add_option("--seed", plan.seed, "seed for every sampled quantity");
  app.add_option("--out-json", out_json, "write the JSON report here");
  app.add_option("--out-csv", out_csv, "write the CSV table here");
  app.add_option("--theorems", theorems, "extra classify checks: schwarz little_bloch lipschitz operator_norm all")
      ->delimiter(',');
  app.add_option("--degree-cap", config.degree_cap, "polynomial degree cap for compositions");
  app.add_option("--little-degree", config.little_degree, "multi-index degree for the little-space check");
  app.add_option("--n", config.n, "dimension of the built-in corpus");
  app.add_flag("--oracle", config.oracle, "cross-check norm estimates against the uniform-grid oracle");

  auto* norm = app.add_subcommand("norm", "estimate Bloch (or Lipschitz) norms of a function or map components");
  norm->add_flag("--lipschitz", config.lipschitz, "Lipschitz quotient norm instead of the Bloch norm (0 < p <= 1)");
  auto* classify_cmd = app.add_subcommand("classify", "boundedness and compactness verdicts for a self-map");
  auto* verify = app.add_subcommand("verify-lemmas", "run the inequality suites on the built-in corpus");
  auto* oracle = app.add_subcommand("oracle", "compare primary values with the independent oracle");
  auto* sweep = app.add_subcommand("sweep", "verdict table over a (p, q) grid");
  auto* emit = app.add_subcommand("emit-test", "print a test function as a specification file");
  std::string family = "F";
  std::size_t l = 1;
  std::string w = "0";
  emit->add_option("--family", family, "F, G or H");
  emit->add_option("--l", l, "coordinate, 1-based")->check(CLI::PositiveNumber);
  emit->add_option("--w", w, "parameter as re or re,im");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!spec.empty()) config.spec_path = spec;
    if (!out_json.empty()) config.out_json = out_json;
    if (!out_csv.empty()) config.out_csv = out_csv;
    for (const auto& t : theorems) {
      if (t == "all") {
        config.theorems = {"schwarz", "little_bloch", "lipschitz", "operator_norm"};
      } else if (t == "schwarz" || t == "little_bloch" || t == "lipschitz" || t == "operator_norm") {
        config.theorems.insert(t);
      } else {
        throw std::invalid_argument("unknown theorem selector '" + t + "'");
      }
    }
    if (*sweep) {
      if (!ps.empty()) config.sweep_p = ps;
      if (!qs.empty()) config.sweep_q = qs;
    } else {
      config.exponents = zip_exponents(ps, qs);
    }

    if (*emit) {
      TestSpec ts{family_from_name(family), config.n, l - 1, parse_complex(w), config.exponents.front().p};
      std::cout << function_spec_to_json(make_test(ts)).dump(2) << "\n";
      return 0;
    }

    CommandResult result;
    if (*norm) result = cmd_norm(config);
    else if (*classify_cmd) result = cmd_classify(config);
    else if (*verify) result = cmd_verify_lemmas(config);
    else if (*oracle) result = cmd_oracle(config);
    else result = cmd_sweep(config);

    std::cout << "seed " << config.seed() << "\n" << result.text;
    write_outputs(config, result);
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
