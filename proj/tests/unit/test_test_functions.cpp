#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blochlab/corpus.hpp"
#include "blochlab/norms.hpp"
#include "blochlab/oracle.hpp"
#include "blochlab/test_functions.hpp"

using namespace blochlab;

namespace {

std::vector<cplx> grad(const HoloFunction& f, std::vector<cplx> z) {
  std::vector<cplx> g(f.dimension());
  f.gradient(z, g);
  return g;
}

SamplingPlan small_plan() {
  SamplingPlan plan;
  plan.radial_levels = 10;
  plan.angular_count = 32;
  return plan;
}

}  // namespace

TEST_CASE("family F") {
  const auto f0 = make_f(2, 1, 0.0, 0.7);
  const std::vector<cplx> z{cplx(0.3, 0.2), cplx(-0.4, 0.5)};
  CHECK(std::abs(f0.value(z) - z[1]) < 1e-15);
  const auto f = make_f(2, 0, 0.5, 1.0);
  const auto g = grad(f, {0.5, 0.9});
  CHECK(std::abs(g[0] - 4.0 / 3.0) < 1e-14);
  CHECK(g[1] == cplx(0.0));
  // Series value against the closed-form antiderivative.
  for (double p : {0.5, 1.0, 2.0}) {
    const cplx w(0.6, -0.5);
    const auto fp = make_f(1, 0, w, p);
    for (const auto& pt : sample_points(1, 50, 0.999, 2)) {
      CHECK(std::abs(fp.value(pt) - f_family_closed_form(w, p, pt[0])) < 1e-12 * std::max(1.0, std::abs(fp.value(pt))));
    }
  }
}

TEST_CASE("family G") {
  const auto g0 = make_g(2, 0, 0.0, 1.5);
  CHECK(g0.value(std::vector<cplx>{0.4, 0.1}) == cplx(1.0));
  const auto g = make_g(2, 0, 0.5, 1.0);
  CHECK(std::abs(g.value(std::vector<cplx>{0.0, 0.3}) - 0.75) < 1e-15);
  CHECK(std::abs(grad(g, {0.0, 0.3})[0] - 0.375) < 1e-15);
  CHECK(grad(g, {0.0, 0.3})[1] == cplx(0.0));
}

TEST_CASE("family H") {
  const auto h0 = make_h(3, 1, 0.0, 1.0);
  const std::vector<cplx> z{cplx(0.2, 0.1), 0.4, 0.6};
  CHECK(std::abs(h0.value(z) - (z[0] + 2.0)) < 1e-15);
  auto g = grad(h0, z);
  CHECK(std::abs(g[0] - 1.0) < 1e-15);
  CHECK(g[1] == cplx(0.0));
  CHECK(g[2] == cplx(0.0));
  const auto h = make_h(3, 1, 0.5, 1.0);
  g = grad(h, {0.0, 0.0, 0.7});
  CHECK(std::abs(g[1] - 0.75) < 1e-15);
  CHECK(g[2] == cplx(0.0));
  CHECK_THROWS_AS(make_h(2, 0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_h(1, 0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(make_f(2, 0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(make_g(2, 0, cplx(0.8, 0.8), 1.0), DomainError);
  CHECK_THROWS(make_f(2, 2, 0.5, 1.0));
  CHECK_THROWS(make_f(2, 0, 0.5, 0.0));
  CHECK(family_from_name("g") == Family::G);
  CHECK(family_from_name("3") == Family::H);
  CHECK_THROWS(family_from_name("K"));
}

TEST_CASE("stored partials agree with finite differences") {
  for (double p : {0.5, 1.0, 2.0}) {
    for (Family fam : {Family::F, Family::G, Family::H}) {
      const auto t = make_test({fam, 2, 1, cplx(-0.4, 0.55), p});
      for (const auto& z : sample_points(2, 30, 0.95, 6)) {
        const auto g = grad(t, z);
        const auto fd = fd_gradient(t, z);
        for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(g[k] - fd[k]) <= 1e-6 * std::max(1.0, std::abs(g[k])));
      }
    }
  }
}

TEST_CASE("family norm bounds") {
  CHECK(family_norm_bound(Family::F, 1.0) == 2.0);
  CHECK(family_norm_bound(Family::G, 1.0) == 5.0);
  CHECK(family_norm_bound(Family::H, 1.0) == 16.0);
}

TEST_CASE("test functions stay within their family bound") {
  for (double p : {0.5, 1.0, 2.0}) {
    for (Family fam : {Family::F, Family::G, Family::H}) {
      for (cplx w : {cplx(0.0), cplx(0.5), cplx(-0.3, 0.9), cplx(0.0, -0.99)}) {
        if (fam == Family::H && p < 1.0) continue;
        const auto t = make_test({fam, 2, 1, w, p});
        CHECK(bloch_norm_estimate(t, BlochParams(p), small_plan()).value <= family_norm_bound(fam, p) + 1e-9);
      }
    }
  }
}

TEST_CASE("H norms with p < 1 grow without bound as |w| -> 1") {
  // On z_l = w the z_l-term is p |z_1 + 2| |w| (1 - |w|^2)^(p - 1).
  const double p = 0.5;
  const double a = 0.99;
  const auto h = make_h(2, 1, a, p);
  const std::vector<cplx> z{0.9, a};
  const double d = std::abs(h.value(std::vector<cplx>{0.0, 0.0})) + bloch_density(h, BlochParams(p), z);
  const double diag = p * 2.9 * a * std::pow(1.0 - a * a, p - 1.0);
  CHECK(d >= diag);
  CHECK(d > family_norm_bound(Family::H, p));
  double prev = 0.0;
  for (double r : {0.9, 0.99, 0.999}) {
    const double est = bloch_norm_estimate(make_h(2, 1, r, p), BlochParams(p), small_plan()).value;
    CHECK(est > prev);
    CHECK(est >= p * 2.0 * r * std::pow(1.0 - r * r, p - 1.0));
    prev = est;
  }
}

TEST_CASE("F density identity") {
  for (double p : {0.5, 1.0, 2.0}) {
    const cplx w(0.3, -0.6);
    const auto f = make_f(2, 0, w, p);
    for (const auto& z : sample_points(2, 100, 0.999, 12)) {
      const double lhs = bloch_density(f, BlochParams(p), z);
      const double rhs = std::pow(1.0 - std::norm(z[0]), p) / std::pow(std::abs(1.0 - std::conj(w) * z[0]), p);
      CHECK(relative_discrepancy(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("truncations") {
  const auto fz = truncate_test({Family::F, 2, 1, 0.0, 0.7}, 3);
  CHECK((fz - Polynomial::coordinate(2, 1)).is_zero());
  const cplx w(0.3, 0.4);
  const auto g0 = truncate_test({Family::G, 2, 0, w, 1.0}, 0);
  CHECK(g0.degree() == 0);
  CHECK(std::abs(g0.coefficient(MultiIndex{0, 0}) - (1.0 - std::norm(w))) < 1e-15);
  const auto h0 = truncate_test({Family::H, 2, 1, 0.0, 1.0}, 0);
  Polynomial want = Polynomial::coordinate(2, 0) + Polynomial::constant(2, 2.0);
  CHECK((h0 - want).is_zero());
}

TEST_CASE("tail bounds") {
  CHECK(tail_bound(1.0, 0.0, 4) == 0.0);
  CHECK(tail_bound(1.0, 0.5, 3) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(tail_bound_closed_form(1.0, 0.5, 3) == doctest::Approx(0.125).epsilon(1e-12));
  for (double p : {0.5, 1.0, 2.0}) {
    for (int m = 0; m < 20; ++m) {
      CHECK(tail_bound(p, 0.7, m + 1) < tail_bound(p, 0.7, m));
      CHECK(tail_bound(p, 0.7, m) == doctest::Approx(tail_bound_closed_form(p, 0.7, m)).epsilon(1e-9));
    }
  }
}

TEST_CASE("truncation residuals stay below the tail for F and for G with p >= 1") {
  for (double p : {0.5, 1.0, 2.0}) {
    for (Family fam : {Family::F, Family::G}) {
      if (fam == Family::G && p < 1.0) continue;
      const TestSpec spec{fam, 2, 0, cplx(0.5, 0.2), p};
      const auto t = make_test(spec);
      for (int m : {2, 4, 8, 16}) {
        const auto r = t - HoloFunction::polynomial(truncate_test(spec, m));
        CHECK(bloch_norm_estimate(r, BlochParams(p), small_plan()).value <= tail_bound(p, spec.w, m) + 1e-6);
      }
    }
  }
}

TEST_CASE("truncation residuals of G with p < 1 and of H shrink") {
  for (const TestSpec& spec : {TestSpec{Family::G, 2, 0, 0.5, 0.5}, TestSpec{Family::H, 2, 1, 0.5, 0.5},
                               TestSpec{Family::H, 2, 1, cplx(0, -0.85), 1.0}}) {
    const auto t = make_test(spec);
    double prev = INFINITY;
    for (int m : {2, 4, 8, 16}) {
      const auto r = t - HoloFunction::polynomial(truncate_test(spec, m));
      const double gap = bloch_norm_estimate(r, BlochParams(spec.p), small_plan()).value;
      CHECK(gap < prev);
      prev = gap;
    }
  }
}

TEST_CASE("G decays on compact sets as |w| -> 1") {
  const double r = 0.9;
  for (double p : {0.5, 1.0, 2.0}) {
    for (double a : {0.9, 0.99, 0.999}) {
      const cplx w = std::polar(a, 0.8);
      const auto g = make_g(2, 1, w, p);
      for (const auto& z : sample_points(2, 200, r, 31)) {
        CHECK(std::abs(g.value(z)) <= (1.0 - a * a) / std::pow(1.0 - r, p));
      }
    }
  }
}

TEST_CASE("test functions serialize to specifications") {
  const auto t = make_h(3, 2, cplx(0.1, -0.2), 1.5);
  const auto j = t.node().to_json();
  CHECK(j.at("family") == "H");
  CHECK(j.at("l") == 3);
  const auto spec = test_spec_of(t);
  REQUIRE(spec);
  CHECK(spec->l == 2);
  CHECK(!test_spec_of(HoloFunction::coordinate(2, 0)));
}
