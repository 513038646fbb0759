#pragma once

// Independent recomputation of primary quantities. Derivatives come from
// function values only (finite differences or Cauchy integrals), suprema from
// plain uniform polar grids without refinement.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blochlab/holo.hpp"

namespace blochlab {

struct OracleResult {
  std::string quantity;
  double primary = 0.0;
  double oracle = 0.0;
  double discrepancy = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

nlohmann::json to_json(const OracleResult& r);

// |a - b| / max(|a|, |b|, 1e-300)
double relative_discrepancy(double a, double b);

// Central differences (f(z + h e_k) - f(z - h e_k)) / 2h.
std::vector<cplx> fd_gradient(const HoloFunction& f, std::span<const cplx> z, double h = 1e-5);
// Trapezoidal Cauchy integral over a circle of radius (1 - |z_k|)/4 in each coordinate.
std::vector<cplx> contour_gradient(const HoloFunction& f, std::span<const cplx> z, int nodes = 24);

// sum_k |df/dz_k| (1 - |z_k|^2)^p from contour partials.
double oracle_bloch_density(const HoloFunction& f, double p, std::span<const cplx> z);

// Uniform polar grid: `radii` radii evenly spaced in [0, max_radius] and
// `angles` angles per coordinate, full product over coordinates.
struct UniformGrid {
  int radii = 64;
  int angles = 64;
  double max_radius = 1.0 - 0x1p-14;
  std::size_t size(std::size_t n) const;
  void point(std::size_t n, std::size_t index, std::span<cplx> z) const;
};

UniformGrid default_oracle_grid(std::size_t n, double max_radius);

// |f(0)| + max over the grid of the oracle density.
double oracle_bloch_norm(const HoloFunction& f, double p, const UniformGrid& grid);

// Max of |<grad f, u>| / sqrt(H(z, u)) over `draws` random directions.
double oracle_timoney_q(const HoloFunction& f, std::span<const cplx> z, std::size_t draws, std::uint64_t seed);

// Closed-form antiderivative of (1 - conj(w) t)^(-p) from 0 to z.
cplx f_family_closed_form(cplx w, double p, cplx z);

}  // namespace blochlab
