#include "blochlab/holo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "blochlab/json_io.hpp"

namespace blochlab {

namespace {

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) throw DimensionError(std::string(what) + ": dimension mismatch");
}

// ---------------------------------------------------------------------------
// Polynomial

class PolynomialNode final : public HoloNode {
 public:
  explicit PolynomialNode(Polynomial p) : HoloNode(p.dimension()), poly_(std::move(p)) {
    const std::size_t n = dimension();
    max_exp_.assign(n, 0);
    for (const auto& [gamma, c] : poly_.terms()) {
      Term t;
      t.coeff = c;
      for (std::size_t k = 0; k < n; ++k) {
        t.exps[k] = gamma[k];
        max_exp_[k] = std::max(max_exp_[k], gamma[k]);
      }
      terms_.push_back(t);
    }
    stride_ = static_cast<std::size_t>(*std::max_element(max_exp_.begin(), max_exp_.end())) + 1;
  }

  cplx value(std::span<const cplx> z) const override {
    const cplx* pw = powers(z);
    cplx v{};
    for (const Term& t : terms_) {
      cplx m = t.coeff;
      for (std::size_t k = 0; k < dimension(); ++k) m *= pw[k * stride_ + static_cast<std::size_t>(t.exps[k])];
      v += m;
    }
    return v;
  }

  void gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    value_and_gradient(z, grad);
  }

  cplx value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    const std::size_t n = dimension();
    const cplx* pw = powers(z);
    std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(n), cplx{});
    cplx v{};
    for (const Term& t : terms_) {
      cplx m = t.coeff;
      for (std::size_t k = 0; k < n; ++k) m *= pw[k * stride_ + static_cast<std::size_t>(t.exps[k])];
      v += m;
      for (std::size_t k = 0; k < n; ++k) {
        const int e = t.exps[k];
        if (e == 0) continue;
        cplx d = t.coeff * static_cast<double>(e) * pw[k * stride_ + static_cast<std::size_t>(e - 1)];
        for (std::size_t j = 0; j < n; ++j) {
          if (j != k) d *= pw[j * stride_ + static_cast<std::size_t>(t.exps[j])];
        }
        grad[k] += d;
      }
    }
    return v;
  }

  HoloFunction partial(std::size_t k) const override {
    if (k >= dimension()) throw std::out_of_range("partial: coordinate index out of range");
    return HoloFunction::polynomial(poly_.derivative(k));
  }

  std::optional<Polynomial> taylor(int m) const override { return poly_.truncated(m); }
  const Polynomial* as_polynomial() const override { return &poly_; }
  bool extends_to_closure() const override { return true; }
  nlohmann::json to_json() const override { return polynomial_to_json(poly_); }

  std::string describe() const override {
    std::ostringstream os;
    os << "polynomial(" << poly_.terms().size() << " terms, degree " << poly_.degree() << ")";
    return os.str();
  }

 private:
  struct Term {
    std::array<int, kMaxDim> exps{};
    cplx coeff;
  };

  const cplx* powers(std::span<const cplx> z) const {
    thread_local std::vector<cplx> scratch;
    const std::size_t n = dimension();
    scratch.resize(n * stride_);
    for (std::size_t k = 0; k < n; ++k) {
      cplx* row = scratch.data() + k * stride_;
      row[0] = 1.0;
      for (int e = 1; e <= max_exp_[k]; ++e) row[e] = row[e - 1] * z[k];
    }
    return scratch.data();
  }

  Polynomial poly_;
  std::vector<Term> terms_;
  std::vector<int> max_exp_;
  std::size_t stride_ = 1;
};

// ---------------------------------------------------------------------------
// c (1 - conj(w) z_l)^(-s)

class KernelPowerNode final : public HoloNode {
 public:
  KernelPowerNode(std::size_t n, std::size_t l, cplx w, double s, cplx c)
      : HoloNode(n), l_(l), w_(w), s_(s), c_(c) {
    if (l >= n) throw std::out_of_range("kernel_power: coordinate index out of range");
    if (!(std::abs(w) < 1.0)) throw DomainError("kernel_power: |w| must be < 1");
  }

  cplx value(std::span<const cplx> z) const override {
    return c_ * std::exp(-s_ * std::log(base(z)));
  }

  void gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(dimension()), cplx{});
    grad[l_] = c_ * s_ * std::conj(w_) * std::exp(-(s_ + 1.0) * std::log(base(z)));
  }

  cplx value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(dimension()), cplx{});
    const cplx b = base(z);
    const cplx v = c_ * std::exp(-s_ * std::log(b));
    grad[l_] = v * s_ * std::conj(w_) / b;
    return v;
  }

  HoloFunction partial(std::size_t k) const override {
    if (k >= dimension()) throw std::out_of_range("partial: coordinate index out of range");
    if (k != l_ || w_ == cplx{} || s_ == 0.0) return HoloFunction::constant(dimension(), 0.0);
    return kernel_power(dimension(), l_, w_, s_ + 1.0, c_ * s_ * std::conj(w_));
  }

  std::optional<Polynomial> taylor(int m) const override {
    Polynomial p(dimension());
    if (m < 0) return p;
    const auto coef = rising_coefficients(s_, static_cast<std::size_t>(m) + 1);
    cplx wj = 1.0;
    std::vector<int> e(dimension(), 0);
    for (int j = 0; j <= m; ++j) {
      e[l_] = j;
      p.add_term(MultiIndex(e), c_ * coef[static_cast<std::size_t>(j)] * wj);
      wj *= std::conj(w_);
    }
    return p;
  }

  bool extends_to_closure() const override { return true; }

  nlohmann::json to_json() const override {
    return {{"type", "kernel_power"}, {"l", l_ + 1}, {"w", complex_to_json(w_)}, {"s", s_},
            {"c", complex_to_json(c_)}};
  }

  std::string describe() const override { return "kernel_power"; }

 private:
  cplx base(std::span<const cplx> z) const {
    const cplx b = 1.0 - std::conj(w_) * z[l_];
    if (std::abs(b) < kEps) throw DomainError("kernel_power: evaluation at the kernel singularity");
    return b;
  }

  std::size_t l_;
  cplx w_;
  double s_;
  cplx c_;
};

// ---------------------------------------------------------------------------
// e^{i theta} (z_src - a) / (1 - conj(a) z_src)

class MoebiusNode final : public HoloNode {
 public:
  MoebiusNode(std::size_t n, std::size_t src, cplx a, double theta)
      : HoloNode(n), src_(src), a_(a), theta_(theta), rot_(std::polar(1.0, theta)) {
    if (src >= n) throw std::out_of_range("moebius: source coordinate out of range");
    if (!(std::abs(a) < 1.0)) throw DomainError("moebius: |a| must be < 1");
  }

  cplx value(std::span<const cplx> z) const override {
    return rot_ * (z[src_] - a_) / (1.0 - std::conj(a_) * z[src_]);
  }

  void gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(dimension()), cplx{});
    const cplx d = 1.0 - std::conj(a_) * z[src_];
    grad[src_] = rot_ * one_minus_abs2(a_) / (d * d);
  }

  cplx value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    gradient(z, grad);
    return value(z);
  }

  HoloFunction partial(std::size_t k) const override {
    if (k >= dimension()) throw std::out_of_range("partial: coordinate index out of range");
    if (k != src_) return HoloFunction::constant(dimension(), 0.0);
    return kernel_power(dimension(), src_, a_, 2.0, rot_ * one_minus_abs2(a_));
  }

  // (1 - |a|^2)(1 - |z|^2) / |1 - conj(a) z|^2, free of cancellation near the circle.
  double gap(std::span<const cplx> z) const override {
    return one_minus_abs2(a_) * one_minus_abs2(z[src_]) / std::norm(1.0 - std::conj(a_) * z[src_]);
  }

  std::optional<Polynomial> taylor(int m) const override {
    Polynomial p(dimension());
    if (m < 0) return p;
    std::vector<int> e(dimension(), 0);
    p.add_term(MultiIndex(e), -rot_ * a_);
    const double scale = one_minus_abs2(a_);
    cplx ab = 1.0;
    for (int j = 1; j <= m; ++j) {
      e[src_] = j;
      p.add_term(MultiIndex(e), rot_ * scale * ab);
      ab *= std::conj(a_);
    }
    return p;
  }

  bool extends_to_closure() const override { return true; }

  nlohmann::json to_json() const override {
    return {{"type", "moebius"}, {"a", complex_to_json(a_)}, {"theta", theta_}, {"source", src_ + 1}};
  }

  std::string describe() const override { return "moebius"; }

  std::size_t source() const { return src_; }

 private:
  std::size_t src_;
  cplx a_;
  double theta_;
  cplx rot_;
};

// ---------------------------------------------------------------------------
// sum_i c_i f_i

class SumNode final : public HoloNode {
 public:
  explicit SumNode(std::vector<std::pair<cplx, HoloFunction>> terms)
      : HoloNode(terms.front().second.dimension()), terms_(std::move(terms)) {
    for (const auto& [c, f] : terms_) check_dim(f.dimension(), dimension(), "sum");
  }

  cplx value(std::span<const cplx> z) const override {
    cplx v{};
    for (const auto& [c, f] : terms_) v += c * f.value(z);
    return v;
  }

  void gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    value_and_gradient(z, grad);
  }

  cplx value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    const std::size_t n = dimension();
    std::array<cplx, kMaxDim> g{};
    std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(n), cplx{});
    cplx v{};
    for (const auto& [c, f] : terms_) {
      v += c * f.value_and_gradient(z, std::span<cplx>(g.data(), n));
      for (std::size_t k = 0; k < n; ++k) grad[k] += c * g[k];
    }
    return v;
  }

  HoloFunction partial(std::size_t k) const override {
    std::vector<std::pair<cplx, HoloFunction>> parts;
    for (const auto& [c, f] : terms_) parts.emplace_back(c, blochlab::partial(f, k));
    return HoloFunction(std::make_shared<SumNode>(std::move(parts)));
  }

  std::optional<Polynomial> taylor(int m) const override {
    Polynomial p(dimension());
    for (const auto& [c, f] : terms_) {
      auto t = f.taylor(m);
      if (!t) return std::nullopt;
      p = p + t->scaled(c);
    }
    return p;
  }

  bool extends_to_closure() const override {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.node().extends_to_closure(); });
  }

  nlohmann::json to_json() const override {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [c, f] : terms_) terms.push_back({{"coeff", complex_to_json(c)}, {"function", f.node().to_json()}});
    return {{"type", "sum"}, {"terms", terms}};
  }

  std::string describe() const override { return "sum(" + std::to_string(terms_.size()) + ")"; }

 private:
  std::vector<std::pair<cplx, HoloFunction>> terms_;
};

// ---------------------------------------------------------------------------
// f * g

class ProductNode final : public HoloNode {
 public:
  ProductNode(HoloFunction f, HoloFunction g) : HoloNode(f.dimension()), f_(std::move(f)), g_(std::move(g)) {
    check_dim(g_.dimension(), dimension(), "product");
  }

  cplx value(std::span<const cplx> z) const override { return f_.value(z) * g_.value(z); }

  void gradient(std::span<const cplx> z, std::span<cplx> grad) const override { value_and_gradient(z, grad); }

  cplx value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    const std::size_t n = dimension();
    std::array<cplx, kMaxDim> gf{};
    std::array<cplx, kMaxDim> gg{};
    const cplx vf = f_.value_and_gradient(z, std::span<cplx>(gf.data(), n));
    const cplx vg = g_.value_and_gradient(z, std::span<cplx>(gg.data(), n));
    for (std::size_t k = 0; k < n; ++k) grad[k] = gf[k] * vg + vf * gg[k];
    return vf * vg;
  }

  HoloFunction partial(std::size_t k) const override {
    return blochlab::partial(f_, k) * g_ + f_ * blochlab::partial(g_, k);
  }

  std::optional<Polynomial> taylor(int m) const override {
    auto tf = f_.taylor(m);
    auto tg = g_.taylor(m);
    if (!tf || !tg) return std::nullopt;
    return tf->multiply(*tg, m);
  }

  bool extends_to_closure() const override {
    return f_.node().extends_to_closure() && g_.node().extends_to_closure();
  }

  nlohmann::json to_json() const override {
    return {{"type", "product"}, {"factors", {f_.node().to_json(), g_.node().to_json()}}};
  }

  std::string describe() const override { return "product"; }

 private:
  HoloFunction f_;
  HoloFunction g_;
};

// ---------------------------------------------------------------------------
// f o phi

class CompositionNode final : public HoloNode {
 public:
  CompositionNode(HoloFunction f, std::vector<HoloFunction> inner)
      : HoloNode(inner.front().dimension()), f_(std::move(f)), inner_(std::move(inner)) {
    check_dim(f_.dimension(), inner_.size(), "composition");
    for (const auto& g : inner_) check_dim(g.dimension(), dimension(), "composition");
  }

  cplx value(std::span<const cplx> z) const override {
    std::array<cplx, kMaxDim> w{};
    for (std::size_t m = 0; m < inner_.size(); ++m) w[m] = inner_[m].value(z);
    return f_.value(std::span<const cplx>(w.data(), inner_.size()));
  }

  void gradient(std::span<const cplx> z, std::span<cplx> grad) const override { value_and_gradient(z, grad); }

  cplx value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    const std::size_t n = dimension();
    const std::size_t mdim = inner_.size();
    std::array<cplx, kMaxDim> w{};
    std::array<cplx, kMaxDim * kMaxDim> jac{};
    for (std::size_t m = 0; m < mdim; ++m) {
      w[m] = inner_[m].value_and_gradient(z, std::span<cplx>(jac.data() + m * n, n));
    }
    std::array<cplx, kMaxDim> gf{};
    const cplx v = f_.value_and_gradient(std::span<const cplx>(w.data(), mdim), std::span<cplx>(gf.data(), mdim));
    for (std::size_t k = 0; k < n; ++k) {
      cplx s{};
      for (std::size_t m = 0; m < mdim; ++m) s += gf[m] * jac[m * n + k];
      grad[k] = s;
    }
    return v;
  }

  HoloFunction partial(std::size_t k) const override {
    if (k >= dimension()) throw std::out_of_range("partial: coordinate index out of range");
    HoloSelfMap phi(inner_);
    std::vector<std::pair<cplx, HoloFunction>> parts;
    for (std::size_t m = 0; m < inner_.size(); ++m) {
      parts.emplace_back(1.0, compose(blochlab::partial(f_, m), phi) * blochlab::partial(inner_[m], k));
    }
    return HoloFunction(std::make_shared<SumNode>(std::move(parts)));
  }

  std::optional<Polynomial> taylor(int m) const override {
    std::vector<Polynomial> inner;
    bool centered = true;
    const std::vector<cplx> origin(dimension());
    for (const auto& g : inner_) {
      auto t = g.taylor(m);
      if (!t) return std::nullopt;
      centered = centered && std::abs(g.value(origin)) == 0.0;
      inner.push_back(std::move(*t));
    }
    // Substituting truncated inner series is exact up to degree m when the outer
    // function is a polynomial, or when every inner series starts at degree >= 1.
    if (const Polynomial* p = f_.as_polynomial()) return p->substitute(inner, m);
    if (!centered) return std::nullopt;
    auto outer = f_.taylor(m);
    if (!outer) return std::nullopt;
    return outer->substitute(inner, m);
  }

  bool extends_to_closure() const override {
    return f_.node().extends_to_closure() &&
           std::all_of(inner_.begin(), inner_.end(), [](const HoloFunction& g) { return g.node().extends_to_closure(); });
  }

  nlohmann::json to_json() const override {
    nlohmann::json inner = nlohmann::json::array();
    for (const auto& g : inner_) inner.push_back(g.node().to_json());
    return {{"type", "composition"}, {"outer", f_.node().to_json()}, {"inner", inner}};
  }

  std::string describe() const override { return "composition"; }

 private:
  HoloFunction f_;
  std::vector<HoloFunction> inner_;
};

}  // namespace

// ---------------------------------------------------------------------------

HoloNode::HoloNode(std::size_t n) : n_(n) {
  if (n == 0 || n > kMaxDim) throw DimensionError("holomorphic function dimension out of range");
}

cplx HoloNode::value_and_gradient(std::span<const cplx> z, std::span<cplx> grad) const {
  gradient(z, grad);
  return value(z);
}

std::optional<Polynomial> HoloNode::taylor(int) const { return std::nullopt; }

double HoloNode::gap(std::span<const cplx> z) const { return one_minus_abs2(value(z)); }

nlohmann::json HoloNode::to_json() const {
  throw Unsupported("no map-specification form for " + describe());
}

HoloFunction::HoloFunction(std::shared_ptr<const HoloNode> node) : node_(std::move(node)) {
  if (!node_) throw std::invalid_argument("HoloFunction: null node");
}

HoloFunction HoloFunction::polynomial(Polynomial p) {
  return HoloFunction(std::make_shared<PolynomialNode>(std::move(p)));
}

HoloFunction HoloFunction::constant(std::size_t n, cplx c) { return polynomial(Polynomial::constant(n, c)); }

HoloFunction HoloFunction::coordinate(std::size_t n, std::size_t k) {
  return polynomial(Polynomial::coordinate(n, k));
}

HoloFunction HoloFunction::monomial(const MultiIndex& gamma, cplx c) {
  return polynomial(Polynomial::monomial(gamma, c));
}

HoloFunction operator+(const HoloFunction& a, const HoloFunction& b) {
  check_dim(b.dimension(), a.dimension(), "sum");
  if (a.as_polynomial() && b.as_polynomial()) return HoloFunction::polynomial(*a.as_polynomial() + *b.as_polynomial());
  return HoloFunction(std::make_shared<SumNode>(std::vector<std::pair<cplx, HoloFunction>>{{1.0, a}, {1.0, b}}));
}

HoloFunction operator-(const HoloFunction& a, const HoloFunction& b) {
  check_dim(b.dimension(), a.dimension(), "difference");
  if (a.as_polynomial() && b.as_polynomial()) return HoloFunction::polynomial(*a.as_polynomial() - *b.as_polynomial());
  return HoloFunction(std::make_shared<SumNode>(std::vector<std::pair<cplx, HoloFunction>>{{1.0, a}, {-1.0, b}}));
}

HoloFunction operator*(cplx c, const HoloFunction& f) {
  if (f.as_polynomial()) return HoloFunction::polynomial(f.as_polynomial()->scaled(c));
  return HoloFunction(std::make_shared<SumNode>(std::vector<std::pair<cplx, HoloFunction>>{{c, f}}));
}

HoloFunction operator*(const HoloFunction& a, const HoloFunction& b) {
  check_dim(b.dimension(), a.dimension(), "product");
  const Polynomial* pa = a.as_polynomial();
  const Polynomial* pb = b.as_polynomial();
  if (pa && pb) return HoloFunction::polynomial(pa->multiply(*pb));
  if (pa && pa->is_zero()) return a;
  if (pb && pb->is_zero()) return b;
  if (pa && pa->degree() == 0) return pa->coefficient(MultiIndex::zero(a.dimension())) * b;
  if (pb && pb->degree() == 0) return pb->coefficient(MultiIndex::zero(a.dimension())) * a;
  return HoloFunction(std::make_shared<ProductNode>(a, b));
}

cplx eval(const HoloFunction& f, const ClosedPolydiskPoint& z) {
  check_dim(z.dimension(), f.dimension(), "eval");
  if (!z.is_interior() && !f.node().extends_to_closure()) {
    throw DomainError("eval: boundary point for a function without continuous extension");
  }
  return f.value(z.span());
}

HoloFunction partial(const HoloFunction& f, std::size_t k) {
  if (k >= f.dimension()) throw std::out_of_range("partial: coordinate index out of range");
  return f.node().partial(k);
}

Direction gradient(const HoloFunction& f, const PolydiskPoint& z) {
  check_dim(z.dimension(), f.dimension(), "gradient");
  std::vector<cplx> g(f.dimension());
  f.gradient(z.span(), g);
  return Direction(std::move(g));
}

HoloFunction kernel_power(std::size_t n, std::size_t l, cplx w, double s, cplx c) {
  return HoloFunction(std::make_shared<KernelPowerNode>(n, l, w, s, c));
}

HoloFunction moebius_factor(std::size_t n, std::size_t source, cplx a, double theta) {
  return HoloFunction(std::make_shared<MoebiusNode>(n, source, a, theta));
}

std::string Certificate::name() const {
  switch (kind) {
    case Kind::Automorphism: return "automorphism";
    case Kind::Coefficients: return "coefficients";
    case Kind::Sampling: return "sampling";
    case Kind::Unverified: return "unverified";
  }
  return "unverified";
}

HoloSelfMap::HoloSelfMap(std::vector<HoloFunction> components, Certificate certificate)
    : components_(std::move(components)), certificate_(certificate) {
  if (components_.empty()) throw DimensionError("self-map needs at least one component");
  for (const auto& f : components_) check_dim(f.dimension(), components_.size(), "self-map component");
}

HoloSelfMap HoloSelfMap::identity(std::size_t n) {
  std::vector<HoloFunction> c;
  for (std::size_t k = 0; k < n; ++k) c.push_back(HoloFunction::coordinate(n, k));
  return HoloSelfMap(std::move(c), Certificate{Certificate::Kind::Automorphism, 0.0, 1.0});
}

HoloSelfMap HoloSelfMap::with_certificate(Certificate c) const {
  HoloSelfMap m(*this);
  m.certificate_ = c;
  return m;
}

void HoloSelfMap::evaluate(std::span<const cplx> z, std::span<cplx> out) const {
  for (std::size_t l = 0; l < components_.size(); ++l) out[l] = components_[l].value(z);
}

std::vector<cplx> HoloSelfMap::operator()(const PolydiskPoint& z) const {
  check_dim(z.dimension(), dimension(), "self-map evaluation");
  std::vector<cplx> out(dimension());
  evaluate(z.span(), out);
  return out;
}

bool HoloSelfMap::is_identity() const {
  const std::size_t n = dimension();
  for (std::size_t l = 0; l < n; ++l) {
    const Polynomial* p = components_[l].as_polynomial();
    if (!p || p->terms().size() != 1) return false;
    const auto& [gamma, c] = *p->terms().begin();
    if (gamma != MultiIndex::unit(n, l) || c != cplx{1.0, 0.0}) return false;
  }
  return true;
}

bool HoloSelfMap::is_polynomial() const {
  return std::all_of(components_.begin(), components_.end(), [](const HoloFunction& f) { return f.as_polynomial() != nullptr; });
}

Eigen::MatrixXcd jacobian(const HoloSelfMap& phi, const PolydiskPoint& z) {
  const std::size_t n = phi.dimension();
  check_dim(z.dimension(), n, "jacobian");
  Eigen::MatrixXcd j(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<cplx> g(n);
  for (std::size_t l = 0; l < n; ++l) {
    phi.component(l).gradient(z.span(), g);
    for (std::size_t k = 0; k < n; ++k) j(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = g[k];
  }
  return j;
}

HoloFunction compose(const HoloFunction& f, const HoloSelfMap& phi, int degree_cap) {
  check_dim(phi.dimension(), f.dimension(), "compose");
  if (phi.is_identity()) return f;
  if (const Polynomial* p = f.as_polynomial(); p && phi.is_polynomial()) {
    int inner_degree = 0;
    std::vector<Polynomial> inner;
    for (const auto& g : phi.components()) {
      inner.push_back(*g.as_polynomial());
      inner_degree = std::max(inner_degree, inner.back().degree());
    }
    if (p->degree() * std::max(inner_degree, 1) <= degree_cap) {
      return HoloFunction::polynomial(p->substitute(inner));
    }
  }
  return HoloFunction(std::make_shared<CompositionNode>(f, phi.components()));
}

HoloSelfMap compose(const HoloSelfMap& outer, const HoloSelfMap& inner, int degree_cap) {
  check_dim(inner.dimension(), outer.dimension(), "map composition");
  std::vector<HoloFunction> c;
  for (const auto& f : outer.components()) c.push_back(compose(f, inner, degree_cap));
  return HoloSelfMap(std::move(c));
}

Certificate certify_self_map(const HoloSelfMap& phi, const SamplingPlan& plan, double margin) {
  const std::size_t n = phi.dimension();
  if (phi.certificate().kind == Certificate::Kind::Automorphism) return phi.certificate();

  bool all_moebius = true;
  std::vector<bool> used(n, false);
  bool by_coefficients = true;
  double bound = 0.0;
  for (const auto& f : phi.components()) {
    if (const auto* m = dynamic_cast<const MoebiusNode*>(&f.node())) {
      bound = std::max(bound, 1.0);
      if (used[m->source()]) all_moebius = false;
      used[m->source()] = true;
      continue;
    }
    all_moebius = false;
    const Polynomial* p = f.as_polynomial();
    if (!p) {
      by_coefficients = false;
      continue;
    }
    const double l1 = p->coefficient_l1();
    if (l1 > 1.0 + 4.0 * std::numeric_limits<double>::epsilon()) by_coefficients = false;
    bound = std::max(bound, l1);
  }
  if (all_moebius) return {Certificate::Kind::Automorphism, 0.0, 1.0};
  if (by_coefficients) return {Certificate::Kind::Coefficients, 0.0, std::min(bound, 1.0)};

  auto sup = search_supremum(
      [&phi, n](std::span<const cplx> z) {
        double m = 0.0;
        for (std::size_t l = 0; l < n; ++l) m = std::max(m, std::abs(phi.component(l).value(z)));
        return m;
      },
      n, plan);
  if (sup.value <= 1.0 - margin) return {Certificate::Kind::Sampling, margin, 1.0};
  return {Certificate::Kind::Unverified, 0.0, 1.0};
}

HoloSelfMap moebius_automorphism(std::span<const cplx> a, std::span<const double> theta,
                                 std::span<const std::size_t> sigma) {
  const std::size_t n = a.size();
  if (theta.size() != n || sigma.size() != n) throw DimensionError("moebius_automorphism: argument lengths differ");
  std::vector<bool> seen(n, false);
  for (std::size_t s : sigma) {
    if (s >= n || seen[s]) throw std::invalid_argument("moebius_automorphism: sigma is not a permutation");
    seen[s] = true;
  }
  std::vector<HoloFunction> c;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(std::abs(a[k]) < 1.0)) throw DomainError("moebius_automorphism: |a_k| must be < 1");
    c.push_back(moebius_factor(n, sigma[k], a[k], theta[k]));
  }
  return HoloSelfMap(std::move(c), Certificate{Certificate::Kind::Automorphism, 0.0, 1.0});
}

}  // namespace blochlab
