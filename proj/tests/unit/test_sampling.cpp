#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <numeric>

#include "blochlab/kernels.hpp"
#include "blochlab/sampling.hpp"

using namespace blochlab;

namespace {

struct ForceThreads {
  ForceThreads() { omp_set_num_threads(4); }
} force_threads;

double bump(std::span<const cplx> z) {
  double s = 0.0;
  for (cplx c : z) s += std::norm(c - cplx(0.3, 0.4));
  return std::exp(-s) + 0.1 * std::abs(z[0]);
}

}  // namespace

TEST_CASE("plan validation") {
  SamplingPlan plan;
  CHECK_NOTHROW(plan.validate(2));
  plan.radial_levels = -1;
  CHECK_THROWS(plan.validate(2));
  plan = {};
  plan.angular_count = 0;
  CHECK_THROWS(plan.validate(2));
  plan = {};
  plan.refinement.budget = 1;
  CHECK_THROWS(plan.validate(2));
}

TEST_CASE("grid radii follow the dyadic levels") {
  SamplingPlan plan;
  CHECK(plan.radius(0) == 0.0);
  CHECK(plan.radius(1) == 0.5);
  CHECK(plan.radius(14) == doctest::Approx(1.0 - std::ldexp(1.0, -14)).epsilon(1e-15));
  const std::size_t n = 2;
  std::vector<cplx> z(n);
  for (std::size_t i = 0; i < plan.grid_size(n); i += 97) {
    grid_point(plan, n, i, z);
    const int level = grid_point_level(plan, n, i);
    double r = 0.0;
    for (cplx c : z) r = std::max(r, std::abs(c));
    CHECK(r == doctest::Approx(plan.radius(level)).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_points matches its serial twin") {
  const std::size_t n = 3;
  const std::size_t count = 5000;
  auto gen = [](std::size_t i, std::span<cplx> z) {
    for (std::size_t k = 0; k < z.size(); ++k) {
      z[k] = std::polar(0.99 * hashed_uniform(7, i, k), 6.28 * hashed_uniform(8, i, k));
    }
  };
  std::vector<double> a(count), b(count);
  kernels::evaluate_points(n, gen, bump, a);
  kernels::evaluate_points_serial(n, gen, bump, b);
  CHECK(a == b);
  CHECK(kernels::argmax(a) == kernels::argmax_serial(b));
}

TEST_CASE("argmax ties and NaN") {
  const double nan = std::nan("");
  std::vector<double> v{1.0, nan, 3.0, 3.0, 2.0};
  CHECK(kernels::argmax(v) == 2);
  CHECK(kernels::argmax_serial(v) == 2);
  std::vector<double> big(10000, 1.0);
  big[7777] = 2.0;
  big[8888] = 2.0;
  CHECK(kernels::argmax(big) == 7777);
}

TEST_CASE("evaluate_points rethrows objective errors") {
  std::vector<double> v(100);
  auto gen = [](std::size_t, std::span<cplx> z) { z[0] = 0.0; };
  auto bad = [](std::span<const cplx>) -> double { throw std::runtime_error("boom"); };
  CHECK_THROWS_AS(kernels::evaluate_points(1, gen, bad, v), std::runtime_error);
}

TEST_CASE("pair quotient rows match their serial twin") {
  const std::size_t n = 2;
  const std::size_t count = 300;
  std::vector<cplx> pts(count * n), vals(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t k = 0; k < n; ++k) pts[i * n + k] = std::polar(0.95 * hashed_uniform(1, i, k), 6.28 * hashed_uniform(2, i, k));
  }
  pts[5 * n] = pts[3 * n];  // a duplicate point must be skipped
  pts[5 * n + 1] = pts[3 * n + 1];
  auto f = [](std::span<const cplx> z) { return z[0] * z[0] + 3.0 * z[1]; };
  std::vector<cplx> v2(count);
  kernels::evaluate_values(pts, n, f, vals);
  kernels::evaluate_values_serial(pts, n, f, v2);
  CHECK(vals == v2);
  for (double p : {0.5, 1.0}) {
    std::vector<double> ra(count), rb(count);
    std::vector<std::size_t> pa(count), pb(count);
    kernels::pair_quotient_rows(pts, vals, n, p, ra, pa);
    kernels::pair_quotient_rows_serial(pts, vals, n, p, rb, pb);
    CHECK(ra == rb);
    CHECK(pa == pb);
    CHECK(ra[0] == 0.0);
    for (double r : ra) CHECK(std::isfinite(r));
  }
}

TEST_CASE("supremum search is identical in both execution modes") {
  SamplingPlan plan;
  plan.radial_levels = 6;
  plan.angular_count = 16;
  const auto a = search_supremum(bump, 2, plan, Execution::Parallel);
  const auto b = search_supremum(bump, 2, plan, Execution::Serial);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
  CHECK(a.trace == b.trace);
  CHECK(a.level_profile == b.level_profile);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("supremum search finds an interior maximum") {
  // exp(-|z - c|^2) + 0.1|z| in one variable peaks near c = 0.3+0.4i.
  SamplingPlan plan;
  auto f = [](std::span<const cplx> z) { return std::exp(-std::norm(z[0] - cplx(0.3, 0.4))); };
  const auto s = search_supremum(f, 1, plan);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(s.witness[0] - cplx(0.3, 0.4)) < 1e-3);
  CHECK(s.converged);
  CHECK(s.evaluations <= plan.refinement.budget);
  for (std::size_t i = 1; i < s.trace.size(); ++i) CHECK(s.trace[i] >= s.trace[i - 1]);
  for (std::size_t i = 1; i < s.level_profile.size(); ++i) CHECK(s.level_profile[i] >= s.level_profile[i - 1]);
}

TEST_CASE("supremum search respects the budget") {
  SamplingPlan plan;
  plan.radial_levels = 4;
  plan.angular_count = 8;
  plan.refinement.budget = plan.grid_size(2) + 100;
  const auto s = search_supremum(bump, 2, plan);
  CHECK(s.evaluations <= plan.refinement.budget);
}

TEST_CASE("trend classification") {
  const std::vector<double> flat{1.0, 1.5, 1.9, 2.0, 2.0, 2.0};
  const std::vector<double> grow{1, 2, 4, 8, 16, 32, 64};
  const std::vector<double> slow{1.0, 1.1, 1.2, 1.3, 1.4};
  CHECK(classify_trend(flat) == Trend::Plateau);
  CHECK(classify_trend(grow) == Trend::Divergent);
  CHECK(classify_trend(slow) == Trend::Undetermined);
  CHECK(classify_trend(std::vector<double>{}) == Trend::Undetermined);
}

TEST_CASE("hashed uniforms are deterministic and in range") {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = hashed_uniform(42, i, 3);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == hashed_uniform(42, i, 3));
  }
  CHECK(hashed_uniform(1, 2) != hashed_uniform(2, 2));
}
