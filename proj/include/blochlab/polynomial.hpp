#pragma once

#include <climits>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "blochlab/polydisk.hpp"
#include "blochlab/types.hpp"

namespace blochlab {

// Sparse multivariate polynomial over C with exact (exponent-shift)
// differentiation and degree-truncated arithmetic.
class Polynomial {
 public:
  explicit Polynomial(std::size_t n);

  static Polynomial constant(std::size_t n, cplx c);
  static Polynomial monomial(const MultiIndex& gamma, cplx c = 1.0);
  static Polynomial coordinate(std::size_t n, std::size_t k);

  std::size_t dimension() const { return n_; }
  const std::map<MultiIndex, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Largest total degree among nonzero terms; 0 for the zero polynomial.
  int degree() const;
  cplx coefficient(const MultiIndex& gamma) const;
  // sum_gamma |a_gamma|, an upper bound for sup |p| on the closed polydisk.
  double coefficient_l1() const;

  void add_term(const MultiIndex& gamma, cplx c);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial scaled(cplx c) const;
  Polynomial multiply(const Polynomial& other, int max_degree = INT_MAX) const;
  Polynomial truncated(int max_degree) const;
  Polynomial derivative(std::size_t k) const;

  // this(q_1, ..., q_n), each q_m over a common dimension, truncated at max_degree.
  Polynomial substitute(std::span<const Polynomial> inner, int max_degree = INT_MAX) const;

  cplx evaluate(std::span<const cplx> z) const;

 private:
  std::size_t n_;
  std::map<MultiIndex, cplx> terms_;
};

// c_j = p(p+1)...(p+j-1)/j! for j = 0..count-1, by c_{j+1} = c_j (p+j)/(j+1).
std::vector<double> rising_coefficients(double p, std::size_t count);

}  // namespace blochlab
