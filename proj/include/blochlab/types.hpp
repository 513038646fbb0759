#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace blochlab {

using cplx = std::complex<double>;

// Upper bound on the ambient dimension; evaluation scratch lives on the stack.
inline constexpr std::size_t kMaxDim = 16;

// Absolute tolerance used for membership and equality comparisons.
inline constexpr double kEps = 1e-12;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A self-map component left (numerically) the open disk where the
// criterion needs 1 - |phi_l|^2 > 0.
class SingularEvaluation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A representation cannot provide the requested operation (e.g. a Taylor
// truncation of a composite whose inner map is not centered).
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blochlab
