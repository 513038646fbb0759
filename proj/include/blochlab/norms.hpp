#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "blochlab/holo.hpp"
#include "blochlab/sampling.hpp"

namespace blochlab {

// Exponent p > 0 of a p-Bloch space.
class BlochParams {
 public:
  explicit BlochParams(double p);
  double p() const { return p_; }

 private:
  double p_;
};

// Estimated norm |f(0)| + sup(...): a lower bound of the true norm, attained at
// the witness (and, for difference quotients, at the partner point).
struct NormEstimate {
  double value = 0.0;
  double offset = 0.0;  // |f(0)|
  std::vector<cplx> witness;
  std::vector<cplx> partner;
  std::vector<double> trace;
  std::vector<double> level_profile;
  bool converged = false;
  std::size_t evaluations = 0;
};

nlohmann::json to_json(const NormEstimate& e);

// sum_k |df/dz_k(z)| (1 - |z_k|^2)^p
double bloch_density(const HoloFunction& f, BlochParams p, std::span<const cplx> z);
double bloch_density(const HoloFunction& f, BlochParams p, const PolydiskPoint& z);

NormEstimate bloch_norm_estimate(const HoloFunction& f, BlochParams p, const SamplingPlan& plan = {},
                                 Execution exec = Execution::Parallel);

// sup over u != 0 of |<grad f(z), u>| / sqrt(H(z,u)), in closed form
// sqrt(sum_k |df/dz_k|^2 (1 - |z_k|^2)^2).
double timoney_q(const HoloFunction& f, std::span<const cplx> z);
double timoney_q(const HoloFunction& f, const PolydiskPoint& z);

// |f(0)| + sup_{z != w} |f(z) - f(w)| / |z - w|^p for 0 < p <= 1.
NormEstimate lipschitz_norm_estimate(const HoloFunction& f, double p, const SamplingPlan& plan = {},
                                     Execution exec = Execution::Parallel);

// B(p, n, z) with |f(z)| <= B ||f||_{B^p} for every f in the p-Bloch space.
double pointeval_bound(BlochParams p, std::size_t n, std::span<const cplx> z);
double pointeval_bound(BlochParams p, std::size_t n, const PolydiskPoint& z);

// f minus its degree-m Taylor polynomial; throws Unsupported when the
// representation has no truncation.
HoloFunction truncation_residual(const HoloFunction& f, int m);
// Estimated B^p distance from f to its degree-m Taylor polynomial.
double little_bloch_gap(const HoloFunction& f, BlochParams p, int m, const SamplingPlan& plan = {},
                        Execution exec = Execution::Parallel);

}  // namespace blochlab
