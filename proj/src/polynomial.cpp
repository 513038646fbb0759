#include "blochlab/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace blochlab {

Polynomial::Polynomial(std::size_t n) : n_(n) {
  if (n == 0 || n > kMaxDim) throw DimensionError("polynomial dimension out of range");
}

Polynomial Polynomial::constant(std::size_t n, cplx c) {
  Polynomial p(n);
  p.add_term(MultiIndex::zero(n), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& gamma, cplx c) {
  Polynomial p(gamma.dimension());
  p.add_term(gamma, c);
  return p;
}

Polynomial Polynomial::coordinate(std::size_t n, std::size_t k) {
  return monomial(MultiIndex::unit(n, k));
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [gamma, c] : terms_) d = std::max(d, gamma.degree());
  return d;
}

cplx Polynomial::coefficient(const MultiIndex& gamma) const {
  auto it = terms_.find(gamma);
  return it == terms_.end() ? cplx{} : it->second;
}

double Polynomial::coefficient_l1() const {
  double s = 0.0;
  for (const auto& [gamma, c] : terms_) s += std::abs(c);
  return s;
}

void Polynomial::add_term(const MultiIndex& gamma, cplx c) {
  if (gamma.dimension() != n_) throw DimensionError("polynomial term dimension mismatch");
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(gamma, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.n_ != n_) throw DimensionError("polynomial dimension mismatch");
  Polynomial out(*this);
  for (const auto& [gamma, c] : other.terms_) out.add_term(gamma, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other.scaled(-1.0); }

Polynomial Polynomial::scaled(cplx c) const {
  Polynomial out(n_);
  if (c == cplx{}) return out;
  for (const auto& [gamma, a] : terms_) out.terms_.emplace(gamma, a * c);
  return out;
}

Polynomial Polynomial::multiply(const Polynomial& other, int max_degree) const {
  if (other.n_ != n_) throw DimensionError("polynomial dimension mismatch");
  Polynomial out(n_);
  for (const auto& [ga, a] : terms_) {
    const int da = ga.degree();
    if (da > max_degree) continue;
    for (const auto& [gb, b] : other.terms_) {
      if (da + gb.degree() > max_degree) continue;
      out.add_term(ga + gb, a * b);
    }
  }
  return out;
}

Polynomial Polynomial::truncated(int max_degree) const {
  Polynomial out(n_);
  for (const auto& [gamma, c] : terms_) {
    if (gamma.degree() <= max_degree) out.terms_.emplace(gamma, c);
  }
  return out;
}

Polynomial Polynomial::derivative(std::size_t k) const {
  if (k >= n_) throw std::out_of_range("polynomial derivative index out of range");
  Polynomial out(n_);
  for (const auto& [gamma, c] : terms_) {
    const int e = gamma[k];
    if (e == 0) continue;
    std::vector<int> shifted(gamma.exponents());
    shifted[k] -= 1;
    out.add_term(MultiIndex(std::move(shifted)), c * static_cast<double>(e));
  }
  return out;
}

Polynomial Polynomial::substitute(std::span<const Polynomial> inner, int max_degree) const {
  if (inner.size() != n_) throw DimensionError("substitute: need one inner polynomial per variable");
  const std::size_t m = inner.front().dimension();
  for (const auto& q : inner) {
    if (q.dimension() != m) throw DimensionError("substitute: inner dimensions differ");
  }
  // powers[k][e] = q_k^e truncated
  std::vector<std::vector<Polynomial>> powers(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    int emax = 0;
    for (const auto& [gamma, c] : terms_) emax = std::max(emax, gamma[k]);
    powers[k].reserve(static_cast<std::size_t>(emax) + 1);
    powers[k].push_back(Polynomial::constant(m, 1.0));
    for (int e = 1; e <= emax; ++e) {
      powers[k].push_back(powers[k].back().multiply(inner[k], max_degree));
    }
  }
  Polynomial out(m);
  for (const auto& [gamma, c] : terms_) {
    Polynomial term = Polynomial::constant(m, c);
    for (std::size_t k = 0; k < n_ && !term.is_zero(); ++k) {
      if (gamma[k] > 0) term = term.multiply(powers[k][static_cast<std::size_t>(gamma[k])], max_degree);
    }
    out = out + term;
  }
  return out;
}

cplx Polynomial::evaluate(std::span<const cplx> z) const {
  if (z.size() != n_) throw DimensionError("polynomial evaluation: dimension mismatch");
  cplx s{};
  for (const auto& [gamma, c] : terms_) s += c * gamma.monomial(z);
  return s;
}

std::vector<double> rising_coefficients(double p, std::size_t count) {
  std::vector<double> c;
  c.reserve(count);
  double cur = 1.0;
  for (std::size_t j = 0; j < count; ++j) {
    c.push_back(cur);
    cur *= (p + static_cast<double>(j)) / static_cast<double>(j + 1);
  }
  return c;
}

}  // namespace blochlab
