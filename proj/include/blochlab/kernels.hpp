#pragma once

// Data-parallel inner loops. Each OpenMP kernel has a plain serial twin that
// the tests hold it against; both return identical results.

#include <cstddef>
#include <functional>
#include <span>

#include "blochlab/types.hpp"

namespace blochlab::kernels {

// Fills z (size n) with candidate point i.
using PointGenerator = std::function<void(std::size_t i, std::span<cplx> z)>;
using PointObjective = std::function<double(std::span<const cplx>)>;

// values[i] = objective(generate(i)). An exception thrown by the objective is
// rethrown on the calling thread after the loop.
void evaluate_points(std::size_t n, const PointGenerator& generate, const PointObjective& objective,
                     std::span<double> values);
void evaluate_points_serial(std::size_t n, const PointGenerator& generate,
                            const PointObjective& objective, std::span<double> values);

// Index of the largest value; ties go to the smallest index. NaN entries are skipped.
std::size_t argmax(std::span<const double> values);
std::size_t argmax_serial(std::span<const double> values);

// For each j, the best quotient |f_i - f_j| / |z_i - z_j|^p over i < j, with
// points stored row-major (count x n). Pairs at zero separation are skipped;
// ties go to the smallest i. Row 0 has no partner and reports value 0.
void pair_quotient_rows(std::span<const cplx> points, std::span<const cplx> values, std::size_t n,
                        double p, std::span<double> row_best, std::span<std::size_t> row_partner);
void pair_quotient_rows_serial(std::span<const cplx> points, std::span<const cplx> values,
                               std::size_t n, double p, std::span<double> row_best,
                               std::span<std::size_t> row_partner);

// values[i] = f(point i) for a function given as a callback.
using ComplexFunction = std::function<cplx(std::span<const cplx>)>;
void evaluate_values(std::span<const cplx> points, std::size_t n, const ComplexFunction& f,
                     std::span<cplx> values);
void evaluate_values_serial(std::span<const cplx> points, std::size_t n, const ComplexFunction& f,
                            std::span<cplx> values);

}  // namespace blochlab::kernels
