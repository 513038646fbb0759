#include "blochlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blochlab/sampling.hpp"

namespace blochlab {

nlohmann::json to_json(const OracleResult& r) {
  return {{"quantity", r.quantity},   {"primary", r.primary},     {"oracle", r.oracle},
          {"discrepancy", r.discrepancy}, {"threshold", r.threshold}, {"passed", r.passed}};
}

double relative_discrepancy(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

std::vector<cplx> fd_gradient(const HoloFunction& f, std::span<const cplx> z, double h) {
  std::vector<cplx> g(z.size());
  std::vector<cplx> a(z.begin(), z.end());
  std::vector<cplx> b(z.begin(), z.end());
  for (std::size_t k = 0; k < z.size(); ++k) {
    a[k] = z[k] + h;
    b[k] = z[k] - h;
    g[k] = (f.value(a) - f.value(b)) / (2.0 * h);
    a[k] = z[k];
    b[k] = z[k];
  }
  return g;
}

std::vector<cplx> contour_gradient(const HoloFunction& f, std::span<const cplx> z, int nodes) {
  std::vector<cplx> g(z.size());
  std::vector<cplx> y(z.begin(), z.end());
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double rho = 0.25 * (1.0 - std::abs(z[k]));
    cplx s{};
    for (int j = 0; j < nodes; ++j) {
      const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * j / nodes);
      y[k] = z[k] + rho * e;
      s += f.value(y) / e;
    }
    y[k] = z[k];
    g[k] = s / (static_cast<double>(nodes) * rho);
  }
  return g;
}

double oracle_bloch_density(const HoloFunction& f, double p, std::span<const cplx> z) {
  const auto g = contour_gradient(f, z);
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double r = std::abs(z[k]);
    s += std::abs(g[k]) * std::pow(1.0 - r * r, p);
  }
  return s;
}

std::size_t UniformGrid::size(std::size_t n) const {
  std::size_t per = static_cast<std::size_t>(radii) * static_cast<std::size_t>(angles);
  std::size_t s = 1;
  for (std::size_t k = 0; k < n; ++k) s *= per;
  return s;
}

void UniformGrid::point(std::size_t n, std::size_t index, std::span<cplx> z) const {
  const std::size_t per = static_cast<std::size_t>(radii) * static_cast<std::size_t>(angles);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t c = index % per;
    index /= per;
    const auto ri = static_cast<double>(c / static_cast<std::size_t>(angles));
    const auto ai = static_cast<double>(c % static_cast<std::size_t>(angles));
    const double r = radii > 1 ? max_radius * ri / (radii - 1) : 0.0;
    z[k] = std::polar(r, 2.0 * std::numbers::pi * ai / angles);
  }
}

UniformGrid default_oracle_grid(std::size_t n, double max_radius) {
  UniformGrid g;
  g.max_radius = max_radius;
  if (n == 1) {
    g.radii = 256;
    g.angles = 128;
  } else if (n == 2) {
    g.radii = 12;
    g.angles = 16;
  } else {
    g.radii = 5;
    g.angles = 6;
  }
  return g;
}

double oracle_bloch_norm(const HoloFunction& f, double p, const UniformGrid& grid) {
  const std::size_t n = f.dimension();
  const std::size_t total = grid.size(n);
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) {
    std::vector<cplx> z(n);
    grid.point(n, static_cast<std::size_t>(i), z);
    best = std::max(best, oracle_bloch_density(f, p, z));
  }
  const std::vector<cplx> origin(n);
  return std::abs(f.value(origin)) + best;
}

double oracle_timoney_q(const HoloFunction& f, std::span<const cplx> z, std::size_t draws, std::uint64_t seed) {
  const std::size_t n = z.size();
  const auto g = fd_gradient(f, z);
  double best = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    cplx inner{};
    double h = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      // Gaussian direction via Box-Muller on hashed uniforms.
      const double u1 = 1.0 - hashed_uniform(seed, d, 2 * k, 0x71);
      const double u2 = hashed_uniform(seed, d, 2 * k + 1, 0x71);
      const cplx u = std::polar(std::sqrt(-2.0 * std::log(u1)), 2.0 * std::numbers::pi * u2);
      inner += g[k] * u;
      const double r = std::abs(z[k]);
      const double w = 1.0 - r * r;
      h += std::norm(u) / (w * w);
    }
    if (h > 0.0) best = std::max(best, std::abs(inner) / std::sqrt(h));
  }
  return best;
}

cplx f_family_closed_form(cplx w, double p, cplx z) {
  const cplx wbar = std::conj(w);
  if (wbar == cplx{}) return z;
  const cplx b = 1.0 - wbar * z;
  if (p == 1.0) return -std::log(b) / wbar;
  return (std::pow(b, 1.0 - p) - 1.0) / (wbar * (p - 1.0));
}

}  // namespace blochlab
