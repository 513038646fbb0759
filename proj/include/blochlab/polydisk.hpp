#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "blochlab/types.hpp"

namespace blochlab {

// A point of the closed unit polydisk: |z_k| <= 1 for every k.
class ClosedPolydiskPoint {
 public:
  explicit ClosedPolydiskPoint(std::vector<cplx> coords);
  ClosedPolydiskPoint(std::initializer_list<cplx> coords)
      : ClosedPolydiskPoint(std::vector<cplx>(coords)) {}

  std::size_t dimension() const { return coords_.size(); }
  const std::vector<cplx>& coords() const { return coords_; }
  std::span<const cplx> span() const { return coords_; }
  cplx operator[](std::size_t k) const { return coords_[k]; }
  bool is_interior() const;

  friend bool operator==(const ClosedPolydiskPoint&, const ClosedPolydiskPoint&) = default;

 protected:
  struct Unchecked {};
  ClosedPolydiskPoint(Unchecked, std::vector<cplx> coords) : coords_(std::move(coords)) {}

  std::vector<cplx> coords_;
};

// A point of the open unit polydisk U^n.
class PolydiskPoint : public ClosedPolydiskPoint {
 public:
  explicit PolydiskPoint(std::vector<cplx> coords);
  PolydiskPoint(std::initializer_list<cplx> coords) : PolydiskPoint(std::vector<cplx>(coords)) {}

  static PolydiskPoint origin(std::size_t n);
  // Throws DomainError when p is on the boundary.
  static PolydiskPoint from_closed(const ClosedPolydiskPoint& p);
};

// A tangent vector u in C^n.
class Direction {
 public:
  explicit Direction(std::vector<cplx> components) : components_(std::move(components)) {}
  Direction(std::initializer_list<cplx> components) : components_(components) {}
  static Direction zero(std::size_t n) { return Direction(std::vector<cplx>(n)); }

  std::size_t dimension() const { return components_.size(); }
  const std::vector<cplx>& components() const { return components_; }
  cplx operator[](std::size_t k) const { return components_[k]; }

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  std::vector<cplx> components_;
};

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);
  MultiIndex(std::initializer_list<int> exponents) : MultiIndex(std::vector<int>(exponents)) {}
  static MultiIndex zero(std::size_t n) { return MultiIndex(std::vector<int>(n, 0)); }
  static MultiIndex unit(std::size_t n, std::size_t k);

  std::size_t dimension() const { return exponents_.size(); }
  const std::vector<int>& exponents() const { return exponents_; }
  int operator[](std::size_t k) const { return exponents_[k]; }
  int degree() const;

  MultiIndex operator+(const MultiIndex& other) const;
  // z^gamma
  cplx monomial(std::span<const cplx> z) const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> exponents_;
};

// All multi-indices of dimension n and total degree <= max_degree, graded
// lexicographic order.
std::vector<MultiIndex> multi_indices_up_to(std::size_t n, int max_degree);

// H(z,u) = sum_k |u_k|^2 / (1 - |z_k|^2)^2.
double bergman_metric(const PolydiskPoint& z, const Direction& u);

// min_k (1 - |z_k|), the Euclidean distance to the boundary of U^n.
double boundary_distance(const ClosedPolydiskPoint& z);
double boundary_distance(std::span<const cplx> z);

// [z,w]_j: the last j coordinates of z replaced by those of w.
ClosedPolydiskPoint segment_point(const ClosedPolydiskPoint& z, const ClosedPolydiskPoint& w,
                                  std::size_t j);

// (a, z_j'): coordinate j (zero-based) replaced by a.
ClosedPolydiskPoint replace_coord(const ClosedPolydiskPoint& z, std::size_t j, cplx a);

// 1 - |x|^2 evaluated as (1 - |x|)(1 + |x|).
inline double one_minus_abs2(cplx x) {
  const double r = std::abs(x);
  return (1.0 - r) * (1.0 + r);
}

}  // namespace blochlab
