#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "blochlab/polydisk.hpp"
#include "blochlab/polynomial.hpp"
#include "blochlab/sampling.hpp"
#include "blochlab/types.hpp"

namespace blochlab {

class HoloFunction;

// One node of a holomorphic function representation on U^n. Nodes are
// immutable; every node reports its value and all first partials exactly.
class HoloNode {
 public:
  explicit HoloNode(std::size_t n);
  virtual ~HoloNode() = default;

  std::size_t dimension() const { return n_; }

  virtual cplx value(std::span<const cplx> z) const = 0;
  // Writes dimension() partials into grad.
  virtual void gradient(std::span<const cplx> z, std::span<cplx> grad) const = 0;
  virtual cplx value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const;
  // Structural derivative with respect to coordinate k (zero-based).
  virtual HoloFunction partial(std::size_t k) const = 0;

  // Degree <= m Taylor polynomial at the origin, when the representation provides one.
  virtual std::optional<Polynomial> taylor(int m) const;
  // The exact polynomial this node equals, if it is one.
  virtual const Polynomial* as_polynomial() const { return nullptr; }
  // 1 - |f(z)|^2.
  virtual double gap(std::span<const cplx> z) const;
  // True when the function extends continuously to the closed polydisk and
  // value() may be called there.
  virtual bool extends_to_closure() const { return false; }
  // Map-specification JSON of this node; throws Unsupported when there is none.
  virtual nlohmann::json to_json() const;
  virtual std::string describe() const = 0;

 private:
  std::size_t n_;
};

// Value-semantic handle to a shared immutable HoloNode.
class HoloFunction {
 public:
  explicit HoloFunction(std::shared_ptr<const HoloNode> node);

  static HoloFunction polynomial(Polynomial p);
  static HoloFunction constant(std::size_t n, cplx c);
  static HoloFunction coordinate(std::size_t n, std::size_t k);
  static HoloFunction monomial(const MultiIndex& gamma, cplx c = 1.0);

  std::size_t dimension() const { return node_->dimension(); }
  const HoloNode& node() const { return *node_; }
  const std::shared_ptr<const HoloNode>& node_ptr() const { return node_; }

  cplx value(std::span<const cplx> z) const { return node_->value(z); }
  void gradient(std::span<const cplx> z, std::span<cplx> grad) const { node_->gradient(z, grad); }
  cplx value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const {
    return node_->value_and_gradient(z, grad);
  }
  double gap(std::span<const cplx> z) const { return node_->gap(z); }
  const Polynomial* as_polynomial() const { return node_->as_polynomial(); }
  std::optional<Polynomial> taylor(int m) const { return node_->taylor(m); }

  friend HoloFunction operator+(const HoloFunction& a, const HoloFunction& b);
  friend HoloFunction operator-(const HoloFunction& a, const HoloFunction& b);
  friend HoloFunction operator*(const HoloFunction& a, const HoloFunction& b);
  friend HoloFunction operator*(cplx c, const HoloFunction& f);

 private:
  std::shared_ptr<const HoloNode> node_;
};

// Exact value; closed (boundary) points are accepted only for functions that
// extend continuously to the closed polydisk.
cplx eval(const HoloFunction& f, const ClosedPolydiskPoint& z);
HoloFunction partial(const HoloFunction& f, std::size_t k);
Direction gradient(const HoloFunction& f, const PolydiskPoint& z);

// c * (1 - conj(w) z_l)^(-s), a building block closed under differentiation.
HoloFunction kernel_power(std::size_t n, std::size_t l, cplx w, double s, cplx c = 1.0);
// e^{i theta} (z_source - a) / (1 - conj(a) z_source), |a| < 1.
HoloFunction moebius_factor(std::size_t n, std::size_t source, cplx a, double theta);

struct Certificate {
  enum class Kind { Automorphism, Coefficients, Sampling, Unverified };
  Kind kind = Kind::Unverified;
  // Sampling margin; sampled sup max_l |phi_l| <= 1 - margin.
  double margin = 0.0;
  // Largest per-component bound sup|phi_l| established by the evidence (1 when unknown).
  double sup_bound = 1.0;

  bool certified() const { return kind != Kind::Unverified; }
  std::string name() const;
};

// A holomorphic map U^n -> C^n with a record of the self-map evidence.
class HoloSelfMap {
 public:
  explicit HoloSelfMap(std::vector<HoloFunction> components, Certificate certificate = {});

  static HoloSelfMap identity(std::size_t n);

  std::size_t dimension() const { return components_.size(); }
  const std::vector<HoloFunction>& components() const { return components_; }
  const HoloFunction& component(std::size_t l) const { return components_.at(l); }
  const Certificate& certificate() const { return certificate_; }
  HoloSelfMap with_certificate(Certificate c) const;

  void evaluate(std::span<const cplx> z, std::span<cplx> out) const;
  std::vector<cplx> operator()(const PolydiskPoint& z) const;
  // Every component is exactly the matching coordinate polynomial.
  bool is_identity() const;
  bool is_polynomial() const;

 private:
  std::vector<HoloFunction> components_;
  Certificate certificate_;
};

// Entry (l, k) = d phi_l / d z_k (z).
Eigen::MatrixXcd jacobian(const HoloSelfMap& phi, const PolydiskPoint& z);

inline constexpr int kDefaultDegreeCap = 64;

// f o phi. Polynomial pairs whose product degree stays <= degree_cap are
// expanded into a polynomial; otherwise the composition stays lazy.
HoloFunction compose(const HoloFunction& f, const HoloSelfMap& phi, int degree_cap = kDefaultDegreeCap);
// outer o inner, componentwise; the certificate is left Unverified.
HoloSelfMap compose(const HoloSelfMap& outer, const HoloSelfMap& inner, int degree_cap = kDefaultDegreeCap);

// Coefficient test first (sum |a_gamma| <= 1 per polynomial component, Moebius
// factors accepted outright), then sampling over the plan with the given margin.
Certificate certify_self_map(const HoloSelfMap& phi, const SamplingPlan& plan = {}, double margin = 1e-6);

// Component k = e^{i theta_k} (z_{sigma(k)} - a_k) / (1 - conj(a_k) z_{sigma(k)}).
HoloSelfMap moebius_automorphism(std::span<const cplx> a, std::span<const double> theta,
                                 std::span<const std::size_t> sigma);

}  // namespace blochlab
