#include "blochlab/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "blochlab/kernels.hpp"

namespace blochlab {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double frac(double x) { return x - std::floor(x); }

// Kronecker increments for the R_n low-discrepancy sequence: alpha_k = phi_n^-(k+1)
// where phi_n is the positive root of x^(n+1) = x + 1.
std::array<double, kMaxDim> kronecker_alphas(std::size_t n) {
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(n + 1));
  std::array<double, kMaxDim> a{};
  double g = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    g /= phi;
    a[k] = frac(g);
  }
  return a;
}

bool within_rel(double a, double b, double rel) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// Polar parameters (boundary level s, angle theta) of one candidate point.
struct Params {
  std::array<double, kMaxDim> s{};
  std::array<double, kMaxDim> theta{};
  double value = -std::numeric_limits<double>::infinity();
};

void grid_params(const SamplingPlan& plan, std::size_t n, std::size_t index, Params& prm) {
  static thread_local std::size_t cached_n = 0;
  static thread_local std::array<double, kMaxDim> alphas{};
  if (cached_n != n) {
    alphas = kronecker_alphas(n);
    cached_n = n;
  }
  const auto angles = static_cast<std::size_t>(plan.angular_count);
  const auto base = static_cast<std::size_t>(plan.radial_levels + 1);
  std::size_t tuple = index / angles;
  const std::size_t a = index % angles;
  const std::size_t tuple_id = tuple;
  for (std::size_t k = 0; k < n; ++k) {
    prm.s[k] = static_cast<double>(tuple % base);
    tuple /= base;
    const double shift = hashed_uniform(plan.seed, tuple_id, k, 0x9a1d);
    prm.theta[k] = 2.0 * std::numbers::pi * frac(shift + static_cast<double>(a) * alphas[k]);
  }
}

int level_of(const Params& prm, std::size_t n, int max_level) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s = std::max(s, prm.s[k]);
  return std::clamp(static_cast<int>(std::ceil(s - 1e-12)), 0, max_level);
}

}  // namespace

double hashed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ a);
  h = splitmix(h ^ b);
  h = splitmix(h ^ c);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

void SamplingPlan::validate(std::size_t n) const {
  if (n == 0 || n > kMaxDim) throw DimensionError("sampling plan: dimension out of range");
  if (radial_levels < 1 || radial_levels > 50) throw std::invalid_argument("radial_levels must lie in [1, 50]");
  if (angular_count < 1) throw std::invalid_argument("angular_count must be positive");
  if (refinement.max_rounds < 0) throw std::invalid_argument("max_rounds must be nonnegative");
  if (!(refinement.shrink > 0.0 && refinement.shrink < 1.0)) throw std::invalid_argument("shrink must lie in (0, 1)");
  if (refine_centers < 1 || refine_samples < 1) throw std::invalid_argument("refinement sizes must be positive");
  if (grid_size(n) == 0 || refinement.budget < grid_size(n)) {
    throw std::invalid_argument("evaluation budget is smaller than the initial grid");
  }
}

std::size_t SamplingPlan::grid_size(std::size_t n) const {
  const auto base = static_cast<std::size_t>(radial_levels + 1);
  std::size_t size = static_cast<std::size_t>(angular_count);
  for (std::size_t k = 0; k < n; ++k) {
    if (size > std::numeric_limits<std::size_t>::max() / base) return 0;
    size *= base;
  }
  return size;
}

double SamplingPlan::radius(int level) const { return 1.0 - std::exp2(-static_cast<double>(level)); }

SamplingPlan SamplingPlan::doubled() const {
  SamplingPlan d = *this;
  d.angular_count *= 2;
  d.refinement.budget *= 2;
  d.refine_samples *= 2;
  d.lipschitz_pool *= 2;
  return d;
}

void grid_point(const SamplingPlan& plan, std::size_t n, std::size_t index, std::span<cplx> z) {
  Params prm;
  grid_params(plan, n, index, prm);
  for (std::size_t k = 0; k < n; ++k) z[k] = std::polar(1.0 - std::exp2(-prm.s[k]), prm.theta[k]);
}

int grid_point_level(const SamplingPlan& plan, std::size_t n, std::size_t index) {
  Params prm;
  grid_params(plan, n, index, prm);
  return level_of(prm, n, plan.radial_levels);
}

SupSearch search_supremum(const Objective& objective, std::size_t n, const SamplingPlan& plan,
                          Execution exec) {
  plan.validate(n);
  const bool parallel = exec == Execution::Parallel;
  auto evaluate = [&](std::size_t count, const kernels::PointGenerator& gen, std::vector<double>& out) {
    out.assign(count, 0.0);
    if (parallel) {
      kernels::evaluate_points(n, gen, objective, out);
    } else {
      kernels::evaluate_points_serial(n, gen, objective, out);
    }
  };
  auto to_point = [n](const Params& prm, std::span<cplx> z) {
    for (std::size_t k = 0; k < n; ++k) z[k] = std::polar(1.0 - std::exp2(-prm.s[k]), prm.theta[k]);
  };

  const int max_level = plan.radial_levels;
  std::vector<double> per_level(static_cast<std::size_t>(max_level) + 1,
                                -std::numeric_limits<double>::infinity());
  SupSearch out;

  // Initial grid.
  const std::size_t grid = plan.grid_size(n);
  std::vector<double> values;
  evaluate(grid, [&](std::size_t i, std::span<cplx> z) {
    Params prm;
    grid_params(plan, n, i, prm);
    to_point(prm, z);
  }, values);
  out.evaluations = grid;
  for (std::size_t i = 0; i < grid; ++i) {
    auto lvl = static_cast<std::size_t>(grid_point_level(plan, n, i));
    per_level[lvl] = std::max(per_level[lvl], values[i]);
  }

  // Best distinct grid points seed the refinement.
  std::vector<std::size_t> order(grid);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t centers_wanted = std::min<std::size_t>(static_cast<std::size_t>(plan.refine_centers), grid);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(centers_wanted), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return a < b;
                    });
  std::vector<Params> centers(centers_wanted);
  for (std::size_t c = 0; c < centers_wanted; ++c) {
    grid_params(plan, n, order[c], centers[c]);
    centers[c].value = values[order[c]];
  }
  const std::size_t best_grid = parallel ? kernels::argmax(values) : kernels::argmax_serial(values);
  Params best;
  grid_params(plan, n, best_grid, best);
  best.value = values[best_grid];
  out.trace.push_back(best.value);

  // Local refinement: random samples in an (s, theta) box around each center.
  // A center's box shrinks only after a round that fails to improve it.
  const std::size_t per_center = static_cast<std::size_t>(plan.refine_samples) * n;
  const double theta0 = std::numbers::pi * std::pow(static_cast<double>(plan.angular_count), -1.0 / static_cast<double>(n));
  std::vector<double> half_s(centers.size(), 0.5);
  std::vector<double> half_theta(centers.size(), theta0);
  auto clamp_s = [max_level](double s) { return std::clamp(s, 0.0, static_cast<double>(max_level)); };
  auto note_level = [&](const Params& prm, double v) {
    auto lvl = static_cast<std::size_t>(level_of(prm, n, max_level));
    per_level[lvl] = std::max(per_level[lvl], v);
  };
  for (int round = 1; round <= plan.refinement.max_rounds; ++round) {
    const std::size_t count = per_center * centers.size();
    if (out.evaluations + count > plan.refinement.budget) break;
    auto gen_params = [&](std::size_t i, Params& prm) {
      const std::size_t c = i / per_center;
      const auto key = static_cast<std::uint64_t>(round) * 1'000'003ULL + i;
      for (std::size_t k = 0; k < n; ++k) {
        const double us = hashed_uniform(plan.seed, key, 2 * k, 0x5e1f);
        const double ut = hashed_uniform(plan.seed, key, 2 * k + 1, 0x5e1f);
        prm.s[k] = clamp_s(centers[c].s[k] + half_s[c] * (2.0 * us - 1.0));
        prm.theta[k] = centers[c].theta[k] + half_theta[c] * (2.0 * ut - 1.0);
      }
    };
    evaluate(count, [&](std::size_t i, std::span<cplx> z) {
      Params prm;
      gen_params(i, prm);
      to_point(prm, z);
    }, values);
    out.evaluations += count;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      std::span<const double> slice(values.data() + c * per_center, per_center);
      const std::size_t j = parallel ? kernels::argmax(slice) : kernels::argmax_serial(slice);
      for (std::size_t t = 0; t < per_center; ++t) {
        Params prm;
        gen_params(c * per_center + t, prm);
        note_level(prm, slice[t]);
      }
      if (slice[j] > centers[c].value) {
        Params prm;
        gen_params(c * per_center + j, prm);
        prm.value = slice[j];
        centers[c] = prm;
      } else {
        half_s[c] *= plan.refinement.shrink;
        half_theta[c] *= plan.refinement.shrink;
      }
      if (centers[c].value > best.value) best = centers[c];
    }
    out.trace.push_back(best.value);
  }

  // Compass search from the best point: step along +-s_k and +-theta_k,
  // halving the steps whenever no move improves.
  {
    double step_s = 0.25;
    double step_theta = 0.25 * theta0;
    const std::size_t moves = 4 * n;
    bool polished = false;
    while (step_s > 1e-9 && out.evaluations + moves <= plan.refinement.budget) {
      auto gen_params = [&](std::size_t i, Params& prm) {
        prm = best;
        const std::size_t k = i / 4;
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        if ((i / 2) % 2 == 0) {
          prm.s[k] = clamp_s(prm.s[k] + sign * step_s);
        } else {
          prm.theta[k] += sign * step_theta;
        }
      };
      evaluate(moves, [&](std::size_t i, std::span<cplx> z) {
        Params prm;
        gen_params(i, prm);
        to_point(prm, z);
      }, values);
      out.evaluations += moves;
      polished = true;
      const std::size_t j = parallel ? kernels::argmax(values) : kernels::argmax_serial(values);
      for (std::size_t t = 0; t < moves; ++t) {
        Params prm;
        gen_params(t, prm);
        note_level(prm, values[t]);
      }
      if (values[j] > best.value) {
        Params prm;
        gen_params(j, prm);
        prm.value = values[j];
        best = prm;
      } else {
        step_s *= 0.5;
        step_theta *= 0.5;
      }
    }
    if (polished) out.trace.push_back(best.value);
  }

  out.value = best.value;
  out.witness.resize(n);
  to_point(best, out.witness);
  out.level_profile.resize(per_level.size());
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < per_level.size(); ++i) {
    running = std::max(running, per_level[i]);
    out.level_profile[i] = running;
  }
  const std::size_t t = out.trace.size();
  out.converged = t >= 2 && within_rel(out.trace[t - 1], out.trace[t - 2], 1e-3);
  return out;
}

Trend classify_trend(std::span<const double> profile, const TrendThresholds& th) {
  if (profile.empty()) return Trend::Undetermined;
  const std::size_t last = profile.size() - 1;
  const double c_last = profile[last];
  if (std::isinf(c_last) && c_last > 0) return Trend::Divergent;
  if (last >= 1) {
    const double c_prev = profile[last - 1];
    if (c_last == c_prev || std::abs(c_last - c_prev) <= th.plateau_rel * std::abs(c_last)) {
      return Trend::Plateau;
    }
  }
  const auto g = static_cast<std::size_t>(th.growth_levels);
  if (g >= 1 && last >= g) {
    const double c_early = profile[last - g];
    bool increasing = true;
    for (std::size_t i = last - g; i < last; ++i) increasing = increasing && profile[i + 1] > profile[i];
    if (increasing && c_early > 0.0 && c_last >= th.growth_factor * c_early) return Trend::Divergent;
  }
  return Trend::Undetermined;
}

}  // namespace blochlab
