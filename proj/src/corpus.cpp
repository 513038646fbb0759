#include "blochlab/corpus.hpp"

#include <cmath>
#include <numbers>

#include "blochlab/test_functions.hpp"

namespace blochlab {

namespace {

cplx disk_sample(std::uint64_t seed, std::uint64_t a, std::uint64_t b, double radius) {
  const double r = radius * std::sqrt(hashed_uniform(seed, a, 2 * b, 0xd15c));
  const double t = 2.0 * std::numbers::pi * hashed_uniform(seed, a, 2 * b + 1, 0xd15c);
  return std::polar(r, t);
}

}  // namespace

std::vector<HoloFunction> random_polynomials(std::size_t n, std::size_t count, int max_degree, std::uint64_t seed) {
  const auto gammas = multi_indices_up_to(n, max_degree);
  std::vector<HoloFunction> out;
  for (std::size_t i = 0; i < count; ++i) {
    Polynomial p(n);
    for (std::size_t g = 0; g < gammas.size(); ++g) p.add_term(gammas[g], disk_sample(seed, i, g, 1.0));
    out.push_back(HoloFunction::polynomial(std::move(p)));
  }
  return out;
}

HoloSelfMap random_automorphism(std::size_t n, std::uint64_t seed, std::size_t index) {
  std::vector<cplx> a(n);
  std::vector<double> theta(n);
  std::vector<std::size_t> sigma(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = disk_sample(seed, index, k, 0.95);
    theta[k] = 2.0 * std::numbers::pi * hashed_uniform(seed, index, k, 0xa770);
    sigma[k] = k;
  }
  // Fisher-Yates with hashed draws.
  for (std::size_t k = n; k > 1; --k) {
    const auto j = static_cast<std::size_t>(hashed_uniform(seed, index, k, 0x5167) * static_cast<double>(k));
    std::swap(sigma[k - 1], sigma[std::min(j, k - 1)]);
  }
  return moebius_automorphism(a, theta, sigma);
}

Corpus default_corpus(std::size_t n, double p, std::uint64_t seed) {
  Corpus c;
  c.n = n;
  const auto polys = random_polynomials(n, 6, 4, seed);
  for (std::size_t i = 0; i < polys.size(); ++i) c.functions.push_back({"poly" + std::to_string(i), polys[i]});
  c.functions.push_back({"coordinate1", HoloFunction::coordinate(n, 0)});

  const std::vector<cplx> ws{cplx(0.5, 0.0), cplx(-0.3, 0.6), cplx(0.0, -0.85)};
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const std::string tag = "_l" + std::to_string(l + 1) + "_w" + std::to_string(i);
      c.functions.push_back({"F" + tag, make_f(n, l, ws[i], p)});
      c.functions.push_back({"G" + tag, make_g(n, l, ws[i], p)});
      if (n >= 2 && l >= 1) c.functions.push_back({"H" + tag, make_h(n, l, ws[i], p)});
    }
  }
  c.functions.push_back({"moebius1", moebius_factor(n, 0, cplx(0.4, -0.2), 0.7)});

  // Self-maps.
  c.maps.push_back({"identity", HoloSelfMap::identity(n)});
  {
    std::vector<HoloFunction> comps;
    for (std::size_t l = 0; l < n; ++l) {
      Polynomial q(n);
      q.add_term(MultiIndex::unit(n, l), 0.5);
      q.add_term(MultiIndex::zero(n), 0.5);
      comps.push_back(HoloFunction::polynomial(std::move(q)));
    }
    c.maps.push_back({"half_shift", HoloSelfMap(std::move(comps))});
  }
  {
    std::vector<HoloFunction> comps;
    for (std::size_t l = 0; l < n; ++l) {
      Polynomial q(n);
      q.add_term(MultiIndex::unit(n, l), 0.3);
      q.add_term(MultiIndex::unit(n, (l + 1) % n) + MultiIndex::unit(n, l), 0.4);
      comps.push_back(HoloFunction::polynomial(std::move(q)));
    }
    c.maps.push_back({"contraction", HoloSelfMap(std::move(comps))});
  }
  c.maps.push_back({"automorphism", random_automorphism(n, seed, 0)});
  for (auto& m : c.maps) m.phi = m.phi.with_certificate(certify_self_map(m.phi));

  // Compositions with a self-map.
  c.functions.push_back({"poly0_o_half_shift", compose(polys[0], c.maps[1].phi)});
  c.functions.push_back({"G_o_contraction", compose(make_g(n, 0, ws[0], p), c.maps[2].phi)});
  return c;
}

std::vector<std::vector<cplx>> sample_points(std::size_t n, std::size_t count, double radius, std::uint64_t seed) {
  std::vector<std::vector<cplx>> out(count, std::vector<cplx>(n));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t k = 0; k < n; ++k) out[i][k] = disk_sample(seed ^ 0x5a5a, i, k, radius);
  }
  return out;
}

}  // namespace blochlab
