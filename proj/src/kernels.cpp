#include "blochlab/kernels.hpp"

#include <array>
#include <cmath>
#include <exception>
#include <limits>

#include <omp.h>

namespace blochlab::kernels {

namespace {

double separation(const cplx* a, const cplx* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::norm(a[k] - b[k]);
  return std::sqrt(s);
}

double quotient(double diff, double dist, double p) {
  return p == 1.0 ? diff / dist : diff / std::pow(dist, p);
}

}  // namespace

void evaluate_points(std::size_t n, const PointGenerator& generate, const PointObjective& objective,
                     std::span<double> values) {
  const auto count = static_cast<std::ptrdiff_t>(values.size());
  std::exception_ptr error;
#pragma omp parallel
  {
    std::array<cplx, kMaxDim> z{};
#pragma omp for schedule(dynamic, 256)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        generate(static_cast<std::size_t>(i), std::span<cplx>(z.data(), n));
        values[static_cast<std::size_t>(i)] = objective(std::span<const cplx>(z.data(), n));
      } catch (...) {
        values[static_cast<std::size_t>(i)] = std::numeric_limits<double>::quiet_NaN();
#pragma omp critical(blochlab_kernel_error)
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

void evaluate_points_serial(std::size_t n, const PointGenerator& generate,
                            const PointObjective& objective, std::span<double> values) {
  std::array<cplx, kMaxDim> z{};
  for (std::size_t i = 0; i < values.size(); ++i) {
    generate(i, std::span<cplx>(z.data(), n));
    values[i] = objective(std::span<const cplx>(z.data(), n));
  }
}

std::size_t argmax(std::span<const double> values) {
  const auto count = static_cast<std::ptrdiff_t>(values.size());
  std::size_t best = values.size();
  double best_value = -std::numeric_limits<double>::infinity();
#pragma omp parallel
  {
    std::size_t local = values.size();
    double local_value = -std::numeric_limits<double>::infinity();
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const double v = values[static_cast<std::size_t>(i)];
      if (std::isnan(v)) continue;
      if (local == values.size() || v > local_value) {
        local = static_cast<std::size_t>(i);
        local_value = v;
      }
    }
#pragma omp critical(blochlab_argmax)
    if (local != values.size()) {
      if (best == values.size() || local_value > best_value ||
          (local_value == best_value && local < best)) {
        best = local;
        best_value = local_value;
      }
    }
  }
  return best == values.size() ? 0 : best;
}

std::size_t argmax_serial(std::span<const double> values) {
  std::size_t best = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    if (best == values.size() || values[i] > values[best]) best = i;
  }
  return best == values.size() ? 0 : best;
}

namespace {

void pair_row(std::span<const cplx> points, std::span<const cplx> values, std::size_t n, double p,
              std::size_t j, double& best, std::size_t& partner) {
  best = 0.0;
  partner = j;
  const cplx* zj = points.data() + j * n;
  for (std::size_t i = 0; i < j; ++i) {
    const double d = separation(points.data() + i * n, zj, n);
    if (d == 0.0) continue;
    const double q = quotient(std::abs(values[i] - values[j]), d, p);
    if (partner == j || q > best) {
      best = q;
      partner = i;
    }
  }
}

}  // namespace

void pair_quotient_rows(std::span<const cplx> points, std::span<const cplx> values, std::size_t n,
                        double p, std::span<double> row_best, std::span<std::size_t> row_partner) {
  const auto count = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    const auto u = static_cast<std::size_t>(j);
    pair_row(points, values, n, p, u, row_best[u], row_partner[u]);
  }
}

void pair_quotient_rows_serial(std::span<const cplx> points, std::span<const cplx> values,
                               std::size_t n, double p, std::span<double> row_best,
                               std::span<std::size_t> row_partner) {
  for (std::size_t j = 0; j < values.size(); ++j) {
    double best = 0.0;
    std::size_t partner = j;
    for (std::size_t i = 0; i < j; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += std::norm(points[i * n + k] - points[j * n + k]);
      const double d = std::sqrt(s);
      if (d == 0.0) continue;
      const double q = quotient(std::abs(values[i] - values[j]), d, p);
      if (partner == j || q > best) {
        best = q;
        partner = i;
      }
    }
    row_best[j] = best;
    row_partner[j] = partner;
  }
}

void evaluate_values(std::span<const cplx> points, std::size_t n, const ComplexFunction& f,
                     std::span<cplx> values) {
  const auto count = static_cast<std::ptrdiff_t>(values.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      values[u] = f(points.subspan(u * n, n));
    } catch (...) {
#pragma omp critical(blochlab_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void evaluate_values_serial(std::span<const cplx> points, std::size_t n, const ComplexFunction& f,
                            std::span<cplx> values) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(points.subspan(i * n, n));
}

}  // namespace blochlab::kernels
