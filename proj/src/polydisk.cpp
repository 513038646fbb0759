#include "blochlab/polydisk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace blochlab {

namespace {

void require_nonempty(std::size_t n) {
  if (n == 0) throw DimensionError("polydisk points need at least one coordinate");
  if (n > kMaxDim) throw DimensionError("dimension exceeds kMaxDim");
}

}  // namespace

ClosedPolydiskPoint::ClosedPolydiskPoint(std::vector<cplx> coords) : coords_(std::move(coords)) {
  require_nonempty(coords_.size());
  for (const cplx& c : coords_) {
    if (!(std::abs(c) <= 1.0)) throw DomainError("coordinate outside the closed unit disk");
  }
}

bool ClosedPolydiskPoint::is_interior() const {
  return std::all_of(coords_.begin(), coords_.end(), [](cplx c) { return std::abs(c) < 1.0; });
}

PolydiskPoint::PolydiskPoint(std::vector<cplx> coords)
    : ClosedPolydiskPoint(Unchecked{}, std::move(coords)) {
  require_nonempty(coords_.size());
  for (const cplx& c : coords_) {
    if (!(std::abs(c) < 1.0)) throw DomainError("coordinate outside the open unit disk");
  }
}

PolydiskPoint PolydiskPoint::origin(std::size_t n) { return PolydiskPoint(std::vector<cplx>(n)); }

PolydiskPoint PolydiskPoint::from_closed(const ClosedPolydiskPoint& p) {
  return PolydiskPoint(p.coords());
}

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw std::invalid_argument("multi-index exponents must be nonnegative");
  }
}

MultiIndex MultiIndex::unit(std::size_t n, std::size_t k) {
  if (k >= n) throw DimensionError("unit multi-index position out of range");
  std::vector<int> e(n, 0);
  e[k] = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::degree() const { return std::accumulate(exponents_.begin(), exponents_.end(), 0); }

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dimension() != dimension()) throw DimensionError("multi-index dimension mismatch");
  std::vector<int> e(exponents_);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] += other.exponents_[k];
  return MultiIndex(std::move(e));
}

cplx MultiIndex::monomial(std::span<const cplx> z) const {
  if (z.size() != dimension()) throw DimensionError("multi-index dimension mismatch");
  cplx out{1.0, 0.0};
  for (std::size_t k = 0; k < z.size(); ++k) {
    for (int j = 0; j < exponents_[k]; ++j) out *= z[k];
  }
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t n, int max_degree) {
  std::vector<MultiIndex> out;
  std::vector<int> e(n, 0);
  for (int d = 0; d <= max_degree; ++d) {
    // Enumerate compositions of d into n parts.
    auto rec = [&](auto&& self, std::size_t k, int left) -> void {
      if (k + 1 == n) {
        e[k] = left;
        out.emplace_back(e);
        return;
      }
      for (int v = left; v >= 0; --v) {
        e[k] = v;
        self(self, k + 1, left - v);
      }
    };
    if (n > 0) rec(rec, 0, d);
  }
  return out;
}

double bergman_metric(const PolydiskPoint& z, const Direction& u) {
  if (z.dimension() != u.dimension()) throw DimensionError("bergman_metric: dimension mismatch");
  double h = 0.0;
  for (std::size_t k = 0; k < z.dimension(); ++k) {
    const double w = one_minus_abs2(z[k]);
    h += std::norm(u[k]) / (w * w);
  }
  return h;
}

double boundary_distance(std::span<const cplx> z) {
  double d = 1.0;
  for (const cplx& c : z) d = std::min(d, 1.0 - std::abs(c));
  return std::max(d, 0.0);
}

double boundary_distance(const ClosedPolydiskPoint& z) { return boundary_distance(z.span()); }

ClosedPolydiskPoint segment_point(const ClosedPolydiskPoint& z, const ClosedPolydiskPoint& w,
                                  std::size_t j) {
  const std::size_t n = z.dimension();
  if (w.dimension() != n) throw DimensionError("segment_point: dimension mismatch");
  if (j > n) throw std::out_of_range("segment_point: j must lie in [0, n]");
  std::vector<cplx> c(z.coords());
  for (std::size_t k = n - j; k < n; ++k) c[k] = w[k];
  return ClosedPolydiskPoint(std::move(c));
}

ClosedPolydiskPoint replace_coord(const ClosedPolydiskPoint& z, std::size_t j, cplx a) {
  if (j >= z.dimension()) throw std::out_of_range("replace_coord: coordinate index out of range");
  if (std::abs(a) > 1.0) throw DomainError("replace_coord: |a| > 1");
  std::vector<cplx> c(z.coords());
  c[j] = a;
  return ClosedPolydiskPoint(std::move(c));
}

}  // namespace blochlab
