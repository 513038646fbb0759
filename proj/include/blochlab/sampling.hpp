#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "blochlab/types.hpp"

namespace blochlab {

enum class Execution { Parallel, Serial };

struct RefinementConfig {
  int max_rounds = 12;
  double shrink = 0.5;
  // Total objective evaluations allowed, grid included.
  std::size_t budget = 4'000'000;
};

// Where and how densely suprema over U^n are probed.
//
// Each coordinate is parametrized by a boundary level s and an angle theta,
// with radius r = 1 - 2^-s. The initial grid takes every tuple of integer
// levels s in {0..radial_levels} and, for each tuple, angular_count angle
// tuples from a shifted Kronecker sequence on the torus. Local refinement then
// shrinks (s, theta) boxes around the best points.
struct SamplingPlan {
  int radial_levels = 14;
  int angular_count = 64;
  RefinementConfig refinement;
  std::uint64_t seed = 20061017;
  int refine_centers = 4;
  // Samples per center per round, multiplied by the dimension.
  int refine_samples = 64;
  // Candidate points for pairwise difference quotients.
  std::size_t lipschitz_pool = 768;

  void validate(std::size_t n) const;
  std::size_t grid_size(std::size_t n) const;
  double radius(int level) const;
  double max_radius() const { return radius(radial_levels); }
  // Twice the angular resolution, evaluation budget and pair pool.
  SamplingPlan doubled() const;
};

// Result of a supremum search over U^n.
struct SupSearch {
  double value = 0.0;
  std::vector<cplx> witness;
  // Running best after the grid (entry 0) and after each refinement round.
  std::vector<double> trace;
  // Entry i: best value over evaluated points whose deepest coordinate level is <= i.
  std::vector<double> level_profile;
  bool converged = false;
  std::size_t evaluations = 0;
};

using Objective = std::function<double(std::span<const cplx>)>;

// Estimates sup_z objective(z) over U^n. The value is attained at the witness,
// so it is a lower bound for the true supremum. Identical for both execution
// modes under a fixed seed.
SupSearch search_supremum(const Objective& objective, std::size_t n, const SamplingPlan& plan,
                          Execution exec = Execution::Parallel);

// Grid point number `index` of the plan written into z (size n).
void grid_point(const SamplingPlan& plan, std::size_t n, std::size_t index, std::span<cplx> z);
// Deepest level index of grid point `index`.
int grid_point_level(const SamplingPlan& plan, std::size_t n, std::size_t index);

enum class Trend { Plateau, Divergent, Undetermined };

struct TrendThresholds {
  // Relative change between the last two levels that counts as a plateau.
  double plateau_rel = 1e-3;
  // Growth by at least this factor over growth_levels levels counts as divergence.
  double growth_factor = 2.0;
  int growth_levels = 4;
};

Trend classify_trend(std::span<const double> level_profile, const TrendThresholds& thresholds = {});

// Deterministic uniform variate in [0,1) keyed by a seed and a counter tuple.
double hashed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0);

}  // namespace blochlab
