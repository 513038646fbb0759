#include "blochlab/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "blochlab/json_io.hpp"
#include "blochlab/kernels.hpp"

namespace blochlab {

namespace {

double weight(cplx zk, double p) {
  const double w = one_minus_abs2(zk);
  return p == 1.0 ? w : std::pow(w, p);
}

double level_of_point(std::span<const cplx> z, int max_level) {
  double r = 0.0;
  for (const cplx& c : z) r = std::max(r, std::abs(c));
  if (r >= 1.0) return max_level;
  const double s = -std::log2(1.0 - r);
  return std::clamp(std::ceil(s - 1e-9), 0.0, static_cast<double>(max_level));
}

bool within_rel(double a, double b, double rel) {
  return a == b || std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

BlochParams::BlochParams(double p) : p_(p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("Bloch exponent p must be positive");
}

nlohmann::json to_json(const NormEstimate& e) {
  nlohmann::json j{{"value", e.value},
                   {"offset", e.offset},
                   {"witness", point_to_json(e.witness)},
                   {"trace", e.trace},
                   {"level_profile", e.level_profile},
                   {"converged", e.converged},
                   {"evaluations", e.evaluations}};
  if (!e.partner.empty()) j["partner"] = point_to_json(e.partner);
  return j;
}

double bloch_density(const HoloFunction& f, BlochParams p, std::span<const cplx> z) {
  const std::size_t n = f.dimension();
  if (z.size() != n) throw DimensionError("bloch_density: dimension mismatch");
  std::array<cplx, kMaxDim> g{};
  f.gradient(z, std::span<cplx>(g.data(), n));
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (g[k] != cplx{}) s += std::abs(g[k]) * weight(z[k], p.p());
  }
  return s;
}

double bloch_density(const HoloFunction& f, BlochParams p, const PolydiskPoint& z) {
  return bloch_density(f, p, z.span());
}

NormEstimate bloch_norm_estimate(const HoloFunction& f, BlochParams p, const SamplingPlan& plan, Execution exec) {
  const std::size_t n = f.dimension();
  const std::vector<cplx> origin(n);
  const double offset = std::abs(f.value(origin));
  auto sup = search_supremum([&f, p](std::span<const cplx> z) { return bloch_density(f, p, z); }, n, plan, exec);
  NormEstimate e;
  e.offset = offset;
  e.value = offset + sup.value;
  e.witness = std::move(sup.witness);
  e.trace = std::move(sup.trace);
  for (double& t : e.trace) t += offset;
  e.level_profile = std::move(sup.level_profile);
  for (double& t : e.level_profile) t += offset;
  e.converged = sup.converged;
  e.evaluations = sup.evaluations;
  return e;
}

double timoney_q(const HoloFunction& f, std::span<const cplx> z) {
  const std::size_t n = f.dimension();
  if (z.size() != n) throw DimensionError("timoney_q: dimension mismatch");
  std::array<cplx, kMaxDim> g{};
  f.gradient(z, std::span<cplx>(g.data(), n));
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = one_minus_abs2(z[k]);
    s += std::norm(g[k]) * w * w;
  }
  return std::sqrt(s);
}

double timoney_q(const HoloFunction& f, const PolydiskPoint& z) { return timoney_q(f, z.span()); }

NormEstimate lipschitz_norm_estimate(const HoloFunction& f, double p, const SamplingPlan& plan, Execution exec) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("Lipschitz exponent must lie in (0, 1]");
  const std::size_t n = f.dimension();
  plan.validate(n);
  const bool parallel = exec == Execution::Parallel;
  const int max_level = plan.radial_levels;
  const double two_pi = 2.0 * std::numbers::pi;
  auto value_of = [&f](std::span<const cplx> z) { return f.value(z); };
  auto quotient = [p](cplx a, cplx b, double d) { return std::abs(a - b) / (p == 1.0 ? d : std::pow(d, p)); };
  auto separation = [n](std::span<const cplx> a, std::span<const cplx> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::norm(a[k] - b[k]);
    return std::sqrt(s);
  };

  // Pool: the origin, then points with boundary levels uniform in [0, L] and
  // uniform angles. Sorted by level so pair (i < j) has level(j).
  const std::size_t pool = std::max<std::size_t>(plan.lipschitz_pool, 2);
  std::vector<cplx> pts(pool * n);
  std::vector<double> lvl(pool, 0.0);
  for (std::size_t i = 1; i < pool; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double s = static_cast<double>(max_level) * hashed_uniform(plan.seed, i, 2 * k, 0x11b);
      const double t = two_pi * hashed_uniform(plan.seed, i, 2 * k + 1, 0x11b);
      pts[i * n + k] = std::polar(1.0 - std::exp2(-s), t);
    }
    lvl[i] = level_of_point(std::span<const cplx>(pts).subspan(i * n, n), max_level);
  }
  std::vector<std::size_t> order(pool);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lvl[a] < lvl[b]; });
  {
    std::vector<cplx> sorted(pool * n);
    std::vector<double> sorted_lvl(pool);
    for (std::size_t i = 0; i < pool; ++i) {
      std::copy_n(pts.begin() + static_cast<std::ptrdiff_t>(order[i] * n), n, sorted.begin() + static_cast<std::ptrdiff_t>(i * n));
      sorted_lvl[i] = lvl[order[i]];
    }
    pts.swap(sorted);
    lvl.swap(sorted_lvl);
  }

  std::vector<cplx> vals(pool);
  std::vector<double> row_best(pool);
  std::vector<std::size_t> row_partner(pool);
  if (parallel) {
    kernels::evaluate_values(pts, n, value_of, vals);
    kernels::pair_quotient_rows(pts, vals, n, p, row_best, row_partner);
  } else {
    kernels::evaluate_values_serial(pts, n, value_of, vals);
    kernels::pair_quotient_rows_serial(pts, vals, n, p, row_best, row_partner);
  }

  std::vector<double> per_level(static_cast<std::size_t>(max_level) + 1, 0.0);
  auto record = [&](double q, std::span<const cplx> a, std::span<const cplx> b) {
    const auto l = static_cast<std::size_t>(std::max(level_of_point(a, max_level), level_of_point(b, max_level)));
    per_level[l] = std::max(per_level[l], q);
  };
  for (std::size_t j = 1; j < pool; ++j) {
    const auto l = static_cast<std::size_t>(lvl[j]);
    per_level[l] = std::max(per_level[l], row_best[j]);
  }

  struct Pair {
    std::vector<cplx> a, b;
    double value = 0.0;
  };
  const std::size_t best_row = parallel ? kernels::argmax(row_best) : kernels::argmax_serial(row_best);
  auto pair_from_row = [&](std::size_t j) {
    Pair pr;
    pr.a.assign(pts.begin() + static_cast<std::ptrdiff_t>(j * n), pts.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
    const std::size_t i = row_partner[j];
    pr.b.assign(pts.begin() + static_cast<std::ptrdiff_t>(i * n), pts.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    pr.value = row_best[j];
    return pr;
  };
  Pair best = pair_from_row(best_row);
  std::size_t evaluations = pool;

  NormEstimate e;
  e.trace.push_back(best.value);

  // Refinement: jitter both endpoints of the best rows in shrinking boxes.
  std::vector<std::size_t> rows(pool);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const std::size_t k_centers = std::min<std::size_t>(static_cast<std::size_t>(plan.refine_centers), pool - 1);
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k_centers), rows.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (row_best[a] != row_best[b]) return row_best[a] > row_best[b];
                      return a < b;
                    });
  std::vector<Pair> centers;
  for (std::size_t c = 0; c < k_centers; ++c) centers.push_back(pair_from_row(rows[c]));

  const std::size_t per_center = static_cast<std::size_t>(plan.refine_samples) * n;
  double half_s = 0.5;
  double half_t = std::numbers::pi / 8.0;
  auto perturb = [&](std::span<const cplx> base, std::uint64_t key, std::uint64_t salt, std::span<cplx> out) {
    for (std::size_t k = 0; k < n; ++k) {
      const double r = std::abs(base[k]);
      const double s = r >= 1.0 ? max_level : -std::log2(1.0 - r);
      const double us = hashed_uniform(plan.seed, key, 2 * k, salt);
      const double ut = hashed_uniform(plan.seed, key, 2 * k + 1, salt);
      const double s2 = std::clamp(s + half_s * (2.0 * us - 1.0), 0.0, static_cast<double>(max_level));
      const double t2 = std::arg(base[k]) + half_t * (2.0 * ut - 1.0);
      out[k] = std::polar(1.0 - std::exp2(-s2), t2);
    }
  };
  for (int round = 1; round <= plan.refinement.max_rounds; ++round) {
    const std::size_t count = per_center * centers.size();
    if (evaluations + 2 * count > plan.refinement.budget) break;
    std::vector<cplx> cand(2 * count * n);
    for (std::size_t i = 0; i < count; ++i) {
      const Pair& c = centers[i / per_center];
      const auto key = static_cast<std::uint64_t>(round) * 1'000'003ULL + i;
      perturb(c.a, key, 0xa, std::span<cplx>(cand).subspan(2 * i * n, n));
      perturb(c.b, key, 0xb, std::span<cplx>(cand).subspan((2 * i + 1) * n, n));
    }
    std::vector<cplx> cv(2 * count);
    if (parallel) {
      kernels::evaluate_values(cand, n, value_of, cv);
    } else {
      kernels::evaluate_values_serial(cand, n, value_of, cv);
    }
    evaluations += 2 * count;
    for (std::size_t i = 0; i < count; ++i) {
      std::span<const cplx> a(cand.data() + 2 * i * n, n);
      std::span<const cplx> b(cand.data() + (2 * i + 1) * n, n);
      const double d = separation(a, b);
      if (d == 0.0) continue;
      const double q = quotient(cv[2 * i], cv[2 * i + 1], d);
      record(q, a, b);
      Pair& c = centers[i / per_center];
      if (q > c.value) {
        c.a.assign(a.begin(), a.end());
        c.b.assign(b.begin(), b.end());
        c.value = q;
      }
    }
    for (const Pair& c : centers) {
      if (c.value > best.value) best = c;
    }
    e.trace.push_back(best.value);
    half_s *= plan.refinement.shrink;
    half_t *= plan.refinement.shrink;
  }

  // Short separations in coordinate directions around the witnesses.
  {
    std::vector<std::vector<cplx>> anchors;
    for (const Pair& c : centers) {
      anchors.push_back(c.a);
      anchors.push_back(c.b);
    }
    anchors.push_back(best.a);
    anchors.push_back(best.b);
    for (const auto& z : anchors) {
      const cplx fz = f.value(z);
      for (double delta : {1e-2, 1e-4}) {
        for (std::size_t k = 0; k < n; ++k) {
          for (int ph = 0; ph < 8; ++ph) {
            std::vector<cplx> w(z);
            w[k] += std::polar(delta, two_pi * ph / 8.0);
            if (!(std::abs(w[k]) < 1.0)) continue;
            const double q = quotient(fz, f.value(w), delta);
            ++evaluations;
            record(q, z, w);
            if (q > best.value) best = Pair{z, w, q};
          }
        }
      }
    }
    e.trace.push_back(best.value);
  }

  const std::vector<cplx> origin(n);
  e.offset = std::abs(f.value(origin));
  e.value = e.offset + best.value;
  e.witness = best.a;
  e.partner = best.b;
  for (double& t : e.trace) t += e.offset;
  double running = 0.0;
  for (double v : per_level) {
    running = std::max(running, v);
    e.level_profile.push_back(e.offset + running);
  }
  const std::size_t t = e.trace.size();
  e.converged = t >= 2 && within_rel(e.trace[t - 1], e.trace[t - 2], 1e-3);
  e.evaluations = evaluations;
  return e;
}

double pointeval_bound(BlochParams bp, std::size_t n, std::span<const cplx> z) {
  if (z.size() != n) throw DimensionError("pointeval_bound: dimension mismatch");
  const double p = bp.p();
  const double nd = static_cast<double>(n);
  if (p < 1.0) return (nd - p + 1.0) / (1.0 - p);
  if (p == 1.0) {
    const double ln2 = std::numbers::ln2;
    double s = 0.0;
    for (const cplx& c : z) s += std::log(2.0 / one_minus_abs2(c));
    return (nd * ln2 + 1.0) / (nd * ln2) * s;
  }
  double s = 0.0;
  for (const cplx& c : z) s += std::pow(one_minus_abs2(c), -(p - 1.0));
  return (std::exp2(p - 1.0) * nd + p - 1.0) / (nd * (p - 1.0)) * s;
}

double pointeval_bound(BlochParams p, std::size_t n, const PolydiskPoint& z) {
  return pointeval_bound(p, n, z.span());
}

HoloFunction truncation_residual(const HoloFunction& f, int m) {
  if (m < 0) throw std::invalid_argument("truncation degree must be nonnegative");
  auto t = f.taylor(m);
  if (!t) throw Unsupported("no Taylor truncation available for " + f.node().describe());
  return f - HoloFunction::polynomial(std::move(*t));
}

double little_bloch_gap(const HoloFunction& f, BlochParams p, int m, const SamplingPlan& plan, Execution exec) {
  return bloch_norm_estimate(truncation_residual(f, m), p, plan, exec).value;
}

}  // namespace blochlab
