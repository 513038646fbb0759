// Parallel kernels against their serial twins.
#include <benchmark/benchmark.h>

#include <cmath>

#include "blochlab/corpus.hpp"
#include "blochlab/kernels.hpp"
#include "blochlab/norms.hpp"
#include "blochlab/test_functions.hpp"

using namespace blochlab;

namespace {

const HoloFunction& sample_function() {
  static const HoloFunction f = make_h(2, 1, cplx(0.6, -0.3), 1.0);
  return f;
}

void generate(std::size_t i, std::span<cplx> z) {
  for (std::size_t k = 0; k < z.size(); ++k) {
    z[k] = std::polar(0.999 * hashed_uniform(3, i, k), 6.283185307179586 * hashed_uniform(4, i, k));
  }
}

double density(std::span<const cplx> z) { return bloch_density(sample_function(), BlochParams(1.0), z); }

void BM_EvaluatePoints(benchmark::State& state) {
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    kernels::evaluate_points(2, generate, density, v);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluatePointsSerial(benchmark::State& state) {
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    kernels::evaluate_points_serial(2, generate, density, v);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct PairData {
  std::vector<cplx> points;
  std::vector<cplx> values;
  explicit PairData(std::size_t count) : points(count * 2), values(count) {
    for (std::size_t i = 0; i < count; ++i) generate(i, std::span<cplx>(points).subspan(i * 2, 2));
    kernels::evaluate_values_serial(points, 2, [](std::span<const cplx> z) { return sample_function().value(z); },
                                    values);
  }
};

void BM_PairQuotients(benchmark::State& state) {
  const std::size_t count = static_cast<std::size_t>(state.range(0));
  PairData d(count);
  std::vector<double> best(count);
  std::vector<std::size_t> partner(count);
  for (auto _ : state) {
    kernels::pair_quotient_rows(d.points, d.values, 2, 0.5, best, partner);
    benchmark::DoNotOptimize(best.data());
  }
}

void BM_PairQuotientsSerial(benchmark::State& state) {
  const std::size_t count = static_cast<std::size_t>(state.range(0));
  PairData d(count);
  std::vector<double> best(count);
  std::vector<std::size_t> partner(count);
  for (auto _ : state) {
    kernels::pair_quotient_rows_serial(d.points, d.values, 2, 0.5, best, partner);
    benchmark::DoNotOptimize(best.data());
  }
}

void BM_NormEstimate(benchmark::State& state) {
  const Execution exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bloch_norm_estimate(sample_function(), BlochParams(1.0), {}, exec).value);
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_EvaluatePoints)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_EvaluatePointsSerial)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_PairQuotients)->Arg(512)->Arg(2048);
BENCHMARK(BM_PairQuotientsSerial)->Arg(512)->Arg(2048);
BENCHMARK(BM_NormEstimate)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
