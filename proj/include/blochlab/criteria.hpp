#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blochlab/holo.hpp"
#include "blochlab/norms.hpp"
#include "blochlab/sampling.hpp"
#include "blochlab/test_functions.hpp"

namespace blochlab {

enum class Verdict { Holds, Fails, Inconclusive };
std::string verdict_name(Verdict v);

// Tolerances and probe sizes for the operator criteria.
struct CriteriaConfig {
  SamplingPlan plan;
  TrendThresholds trend;
  // A path tail that decreases below this counts as decay to zero.
  double decay_tol = 1e-3;
  // A path tail that stays at or above this counts as no decay.
  double persist_floor = 1e-2;
  std::size_t tail_length = 4;
  // A tail whose neighbour ratios all stay below power_decay_ratio and agree
  // within the factor power_decay_spread decays like a power of the distance.
  double power_decay_ratio = 0.99;
  double power_decay_spread = 1.05;
  int rays_per_coordinate = 16;
  // Path points aim at image distances 2^-1 .. 2^-path_depth from the boundary.
  int path_depth = 24;
  // ||phi_l||_inf below 1 - image_margin counts as staying inside the polydisk.
  double image_margin = 1e-3;
  // Smallest squared singular value of the weighted Jacobian that counts as
  // bounded away from zero.
  double schwarz_floor = 1e-3;
  // Sampled points for the weighted-Jacobian infimum.
  std::size_t schwarz_samples = 4096;
  // Plateau tolerance for Lipschitz level profiles (pairwise quotients converge slower).
  double lipschitz_plateau = 1e-2;
};

// sum_{k,l} |d phi_l / d z_k| (1 - |z_k|^2)^q / (1 - |phi_l|^2)^p. Throws
// SingularEvaluation when some |phi_l(z)| >= 1.
double criterion_density(const HoloSelfMap& phi, double p, double q, std::span<const cplx> z);
double criterion_density(const HoloSelfMap& phi, double p, double q, const PolydiskPoint& z);
// Row l (zero-based) of the criterion density.
double coordinate_density(const HoloSelfMap& phi, double p, double q, std::size_t l, std::span<const cplx> z);
double coordinate_density(const HoloSelfMap& phi, double p, double q, std::size_t l, const PolydiskPoint& z);

struct BoundaryPath {
  enum class Mode { ImageToBoundary, CoordinateToOne };
  std::string id;
  Mode mode = Mode::ImageToBoundary;
  std::size_t l = 0;  // target component for CoordinateToOne
  std::vector<std::vector<cplx>> points;
};

std::string mode_name(BoundaryPath::Mode m);

// Distance of the path's monitored quantity from the boundary at z:
// boundary_distance(phi(z)) or 1 - |phi_l(z)|.
double approach_distance(const HoloSelfMap& phi, const BoundaryPath& path, std::span<const cplx> z);

// Throws std::invalid_argument unless the path has at least 8 interior points,
// the monitored distance is nonincreasing along it and ends at or below 1e-4.
void validate_path(const HoloSelfMap& phi, const BoundaryPath& path);

// Radial rays t -> t*zeta (coordinate rays at evenly spaced angles, diagonal
// rays and an optional ray through `through`), sampled where the monitored
// distance crosses 2^-j. Rays that never approach the boundary are dropped.
std::vector<BoundaryPath> default_paths(const HoloSelfMap& phi, BoundaryPath::Mode mode, std::size_t l,
                                        const CriteriaConfig& config = {},
                                        const std::vector<cplx>& through = {});

struct BoundednessResult {
  Verdict verdict = Verdict::Inconclusive;
  NormEstimate estimate;  // sup of the criterion density, no |f(0)| offset
  Trend trend = Trend::Undetermined;
  std::string reason;
};

BoundednessResult boundedness_check(const HoloSelfMap& phi, double p, double q, const CriteriaConfig& config = {});

struct PathTable {
  BoundaryPath path;
  std::vector<double> distance;
  std::vector<double> density;
  Verdict verdict = Verdict::Inconclusive;
};

enum class ProfileMode { Global, PerCoordinate };

struct CompactnessResult {
  Verdict verdict = Verdict::Inconclusive;
  bool vacuous = false;
  std::vector<PathTable> tables;
  std::string reason;
};

// Tabulates the criterion density (Global) or the matching row
// (PerCoordinate) along each path and judges the tails. With no paths the
// verdict holds vacuously when every ||phi_l||_inf stays below 1.
CompactnessResult compactness_profile(const HoloSelfMap& phi, double p, double q,
                                      const std::vector<BoundaryPath>& paths, ProfileMode mode,
                                      const CriteriaConfig& config = {});

// Largest and smallest squared singular values of
// diag(1/(1-|phi_l|^2)) J_phi(z) diag(1 - |z_k|^2), i.e. the extreme values of
// H_{phi(z)}(J u) / H_z(u) over u != 0.
double schwarz_expansion_sup(const HoloSelfMap& phi, const PolydiskPoint& z);
double schwarz_expansion_inf(const HoloSelfMap& phi, const PolydiskPoint& z);
double schwarz_expansion_sup(const HoloSelfMap& phi, std::span<const cplx> z);
double schwarz_expansion_inf(const HoloSelfMap& phi, std::span<const cplx> z);

struct ImageBound {
  std::vector<double> sup;     // per component, sampled or bounded above
  std::vector<bool> strict;    // component known to stay below 1 - image_margin
  bool all_strict() const;
};

// Per-component sup |phi_l|: coefficient sums for polynomials, sampling otherwise.
ImageBound image_bound(const HoloSelfMap& phi, const CriteriaConfig& config = {});

struct VerdictEntry {
  std::string id;
  Verdict verdict = Verdict::Inconclusive;
  nlohmann::json evidence;
};

struct CriterionReport {
  std::size_t n = 0;
  double p = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;
  std::string certificate;
  BoundednessResult bounded;
  Verdict compact = Verdict::Inconclusive;
  // Name of the criterion that produced the compactness verdict.
  std::string compact_route;
  std::optional<CompactnessResult> profile;
  std::vector<VerdictEntry> verdicts;

  const VerdictEntry* find(const std::string& id) const;
};

// Throws std::invalid_argument for maps that cannot be certified as self-maps.
CriterionReport classify(const HoloSelfMap& phi, double p, double q, const CriteriaConfig& config = {});

nlohmann::json to_json(const CriterionReport& r);
// One row per path point: path_id,mode,l,index,z,distance,density,path_verdict.
std::string to_csv(const CriterionReport& r);

struct MonomialGap {
  MultiIndex gamma;
  int m = 0;
  std::optional<double> gap;  // empty when no truncation is available
  bool decayed = false;
};

struct LittleBlochResult {
  Verdict verdict = Verdict::Inconclusive;
  Verdict powers = Verdict::Inconclusive;  // phi^gamma close to polynomials
  BoundednessResult bounded;
  std::vector<MonomialGap> gaps;
  std::string note;
};

// Finite check of the little-space conditions: phi^gamma within 1e-3 of its
// Taylor polynomial for every |gamma| <= degree_cap, plus the criterion sup.
LittleBlochResult little_bloch_operator_check(const HoloSelfMap& phi, double p, double q, int degree_cap,
                                              const CriteriaConfig& config = {});

struct LipschitzCheck {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<NormEstimate> components;
  std::vector<Trend> trends;
};

// Each component phi_j has a finite L_1 quotient plateau.
LipschitzCheck lip1_boundedness_check(const HoloSelfMap& phi, const CriteriaConfig& config = {});

struct OperatorNormBound {
  double value = 0.0;
  std::optional<TestSpec> best;
  std::size_t probes = 0;
};

// max over test functions nu of ||nu o phi||_q / ||nu||_p.
OperatorNormBound operator_norm_lower_bound(const HoloSelfMap& phi, double p, double q,
                                            const std::vector<cplx>& w_grid, const CriteriaConfig& config = {});

}  // namespace blochlab
