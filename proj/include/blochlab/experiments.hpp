#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blochlab/corpus.hpp"
#include "blochlab/criteria.hpp"
#include "blochlab/oracle.hpp"

namespace blochlab {

struct ExponentPair {
  double p = 1.0;
  double q = 1.0;
};

struct ExperimentConfig {
  std::optional<std::filesystem::path> spec_path;
  std::vector<ExponentPair> exponents{{1.0, 1.0}};
  CriteriaConfig criteria;  // sampling plan and tolerances
  // Extra checks for classify: "schwarz", "little_bloch", "lipschitz", "operator_norm".
  std::set<std::string> theorems;
  std::optional<std::filesystem::path> out_json;
  std::optional<std::filesystem::path> out_csv;
  bool oracle = false;
  // Polynomial expansion cap for compositions while loading specs.
  int degree_cap = kDefaultDegreeCap;
  // Multi-index degree bound for the little-space check.
  int little_degree = 2;
  // Norm kind for the norm command: Bloch, or Lipschitz with exponent p.
  bool lipschitz = false;
  // Dimension of the built-in corpus when no spec is given.
  std::size_t n = 2;
  // Grids for the sweep command.
  std::vector<double> sweep_p{0.25, 0.5, 0.75};
  std::vector<double> sweep_q{0.25, 0.5, 0.75};

  void validate() const;
  std::uint64_t seed() const { return criteria.plan.seed; }
};

struct CommandResult {
  int exit_code = 0;
  nlohmann::json json;
  std::string csv;
  std::string text;  // human-readable summary for stdout
};

// Writes json/csv to the configured paths (if any). Throws on I/O failure.
void write_outputs(const ExperimentConfig& config, const CommandResult& result);

CommandResult cmd_norm(const ExperimentConfig& config);
CommandResult cmd_classify(const ExperimentConfig& config);

struct VerifyRow {
  std::string suite;
  std::size_t checks = 0;
  std::size_t failures = 0;
  // Smallest (bound - value) over the checks; negative on failure.
  double worst_slack = 0.0;
  std::string witness;
  bool passed = true;
  std::string note;
};

std::vector<VerifyRow> verify_lemmas(const Corpus& corpus, const ExperimentConfig& config);
CommandResult cmd_verify_lemmas(const ExperimentConfig& config);
CommandResult cmd_verify_lemmas(const ExperimentConfig& config, const Corpus& corpus);

std::vector<OracleResult> run_oracle(const Corpus& corpus, const ExperimentConfig& config);
CommandResult cmd_oracle(const ExperimentConfig& config);
CommandResult cmd_oracle(const ExperimentConfig& config, const Corpus& corpus);

inline constexpr const char* kSweepHeader =
    "map_id,p,q,image_radius,bounded_verdict,bounded_sup,compact_verdict,compact_route";
CommandResult cmd_sweep(const ExperimentConfig& config);
CommandResult cmd_sweep(const ExperimentConfig& config, const std::vector<CorpusMap>& maps);

}  // namespace blochlab
