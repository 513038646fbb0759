#include "blochlab/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "blochlab/json_io.hpp"

namespace blochlab {

namespace {

constexpr double kSeriesRel = 1e-14;
constexpr std::size_t kSeriesTermCap = 200'000;

// (1 - conj(w) z_l) raised to -s on the principal branch; the base has
// positive real part on the closed polydisk when |w| < 1.
cplx kernel(cplx base, double s) { return std::exp(-s * std::log(base)); }

class TestFunctionNode final : public HoloNode {
 public:
  explicit TestFunctionNode(const TestSpec& spec) : HoloNode(spec.n), spec_(spec) {
    if (spec.n == 0 || spec.n > kMaxDim) throw DimensionError("test function: dimension out of range");
    if (spec.l >= spec.n) throw std::out_of_range("test function: coordinate index out of range");
    if (!(std::abs(spec.w) < 1.0)) throw DomainError("test function: |w| must be < 1");
    if (!(spec.p > 0.0) || !std::isfinite(spec.p)) throw std::invalid_argument("test function: p must be positive");
    if (spec.family == Family::H && (spec.n < 2 || spec.l == 0)) {
      throw std::invalid_argument("family H needs n >= 2 and l different from the first coordinate");
    }
    wbar_ = std::conj(spec.w);
    damp_ = one_minus_abs2(spec.w);
  }

  const TestSpec& spec() const { return spec_; }

  cplx value(std::span<const cplx> z) const override {
    const cplx zl = z[spec_.l];
    const cplx b = base(zl);
    switch (spec_.family) {
      case Family::F:
        return antiderivative(zl, b);
      case Family::G:
        return damp_ * kernel(b, spec_.p);
      case Family::H:
        return (z[0] + 2.0) * std::pow(damp_, spec_.p) * kernel(b, spec_.p);
    }
    return {};
  }

  void gradient(std::span<const cplx> z, std::span<cplx> grad) const override {
    std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(dimension()), cplx{});
    const cplx b = base(z[spec_.l]);
    const double p = spec_.p;
    switch (spec_.family) {
      case Family::F:
        grad[spec_.l] = kernel(b, p);
        break;
      case Family::G:
        grad[spec_.l] = p * wbar_ * damp_ * kernel(b, p + 1.0);
        break;
      case Family::H:
        grad[0] = kernel(b / damp_, p);
        grad[spec_.l] = p * (z[0] + 2.0) * wbar_ * std::pow(damp_, p) * kernel(b, p + 1.0);
        break;
    }
  }

  HoloFunction partial(std::size_t k) const override {
    const std::size_t n = dimension();
    if (k >= n) throw std::out_of_range("partial: coordinate index out of range");
    const double p = spec_.p;
    const std::size_t l = spec_.l;
    switch (spec_.family) {
      case Family::F:
        if (k == l) return kernel_power(n, l, spec_.w, p);
        break;
      case Family::G:
        if (k == l) return kernel_power(n, l, spec_.w, p + 1.0, p * wbar_ * damp_);
        break;
      case Family::H:
        if (k == 0) return kernel_power(n, l, spec_.w, p, std::pow(damp_, p));
        if (k == l) {
          const HoloFunction z1_plus_2 = HoloFunction::coordinate(n, 0) + HoloFunction::constant(n, 2.0);
          return z1_plus_2 * kernel_power(n, l, spec_.w, p + 1.0, p * wbar_ * std::pow(damp_, p));
        }
        break;
    }
    return HoloFunction::constant(n, 0.0);
  }

  std::optional<Polynomial> taylor(int m) const override {
    if (m < 0) return Polynomial(dimension());
    return truncate_test(spec_, m).truncated(m);
  }

  bool extends_to_closure() const override { return true; }

  nlohmann::json to_json() const override {
    return {{"type", "test_function"},
            {"family", family_name(spec_.family)},
            {"l", spec_.l + 1},
            {"w", complex_to_json(spec_.w)},
            {"p", spec_.p}};
  }

  std::string describe() const override { return "test_function_" + family_name(spec_.family); }

 private:
  cplx base(cplx zl) const {
    const cplx b = 1.0 - wbar_ * zl;
    if (std::abs(b) < kEps) throw DomainError("test function: evaluation at the kernel singularity");
    return b;
  }

  // sum_j c_j conj(w)^j z^(j+1) / (j+1). Summation stops once the geometric
  // bound on the remaining terms is below kSeriesRel of the sum; if that needs
  // more than kSeriesTermCap terms the closed-form antiderivative is used.
  cplx antiderivative(cplx zl, cplx b) const {
    const double p = spec_.p;
    const cplx x = wbar_ * zl;
    const double ax = std::abs(x);
    cplx sum = zl;
    if (ax == 0.0) return sum;
    cplx power = zl;  // conj(w)^j z^(j+1)
    double c = 1.0;
    for (std::size_t j = 1; j < kSeriesTermCap; ++j) {
      c *= (p + static_cast<double>(j) - 1.0) / static_cast<double>(j);
      power *= x;
      const cplx term = c * power / static_cast<double>(j + 1);
      sum += term;
      const double ratio = ax * (p + static_cast<double>(j)) / static_cast<double>(j + 1);
      if (ratio < 1.0 && std::abs(term) * ratio / (1.0 - ratio) <= kSeriesRel * std::abs(sum)) return sum;
    }
    if (p == 1.0) return -std::log(b) / wbar_;
    return (std::exp((1.0 - p) * std::log(b)) - 1.0) / (wbar_ * (p - 1.0));
  }

  TestSpec spec_;
  cplx wbar_;
  double damp_;
};

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::F:
      return "F";
    case Family::G:
      return "G";
    case Family::H:
      return "H";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  if (s == "F" || s == "f" || s == "1") return Family::F;
  if (s == "G" || s == "g" || s == "2") return Family::G;
  if (s == "H" || s == "h" || s == "3") return Family::H;
  throw std::invalid_argument("unknown test family '" + s + "'");
}

HoloFunction make_test(const TestSpec& spec) { return HoloFunction(std::make_shared<TestFunctionNode>(spec)); }

HoloFunction make_f(std::size_t n, std::size_t l, cplx w, double p) { return make_test({Family::F, n, l, w, p}); }
HoloFunction make_g(std::size_t n, std::size_t l, cplx w, double p) { return make_test({Family::G, n, l, w, p}); }
HoloFunction make_h(std::size_t n, std::size_t l, cplx w, double p) { return make_test({Family::H, n, l, w, p}); }

std::optional<TestSpec> test_spec_of(const HoloFunction& f) {
  if (const auto* t = dynamic_cast<const TestFunctionNode*>(&f.node())) return t->spec();
  return std::nullopt;
}

double family_norm_bound(Family family, double p) {
  switch (family) {
    case Family::F:
      return std::exp2(p);
    case Family::G:
      return 1.0 + p * std::exp2(p + 1.0);
    case Family::H:
      return 2.0 + std::exp2(p) + 3.0 * p * std::exp2(p + 1.0);
  }
  return 0.0;
}

Polynomial truncate_test(const TestSpec& spec, int m) {
  if (m < 0) throw std::invalid_argument("truncation index must be nonnegative");
  const std::size_t n = spec.n;
  const auto c = rising_coefficients(spec.p, static_cast<std::size_t>(m) + 1);
  const cplx wbar = std::conj(spec.w);
  Polynomial series(n);
  std::vector<int> e(n, 0);
  cplx wj = 1.0;
  for (int j = 0; j <= m; ++j) {
    const auto cj = c[static_cast<std::size_t>(j)];
    if (spec.family == Family::F) {
      e[spec.l] = j + 1;
      series.add_term(MultiIndex(e), cj * wj / static_cast<double>(j + 1));
    } else {
      e[spec.l] = j;
      series.add_term(MultiIndex(e), cj * wj);
    }
    wj *= wbar;
  }
  const double damp = one_minus_abs2(spec.w);
  switch (spec.family) {
    case Family::F:
      return series;
    case Family::G:
      return series.scaled(damp);
    case Family::H: {
      Polynomial prefactor = Polynomial::coordinate(n, 0) + Polynomial::constant(n, 2.0);
      return prefactor.multiply(series).scaled(std::pow(damp, spec.p));
    }
  }
  return series;
}

double tail_bound(double p, cplx w, int m) {
  if (!(std::abs(w) < 1.0)) throw DomainError("tail_bound: |w| must be < 1");
  if (m < 0) throw std::invalid_argument("tail_bound: m must be nonnegative");
  const double a = std::abs(w);
  if (a == 0.0) return 0.0;
  double term = 1.0;  // c_j a^j
  for (int j = 1; j <= m; ++j) term *= a * (p + j - 1.0) / j;
  double sum = 0.0;
  for (long j = m + 1;; ++j) {
    term *= a * (p + static_cast<double>(j) - 1.0) / static_cast<double>(j);
    sum += term;
    const double ratio = a * (p + static_cast<double>(j)) / static_cast<double>(j + 1);
    if (ratio < 1.0 && term < 1e-16 * sum) break;
    if (term == 0.0) break;
  }
  return sum;
}

double tail_bound_closed_form(double p, cplx w, int m) {
  if (!(std::abs(w) < 1.0)) throw DomainError("tail_bound: |w| must be < 1");
  const double a = std::abs(w);
  if (p == 1.0) return std::pow(a, m + 1) / (1.0 - a);
  double partial = 0.0;
  double term = 1.0;
  for (int j = 0; j <= m; ++j) {
    if (j > 0) term *= a * (p + j - 1.0) / j;
    partial += term;
  }
  return std::pow(1.0 - a, -p) - partial;
}

}  // namespace blochlab
