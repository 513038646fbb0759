#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blochlab/corpus.hpp"
#include "blochlab/holo.hpp"
#include "blochlab/map_spec.hpp"
#include "blochlab/oracle.hpp"

using namespace blochlab;

namespace {

HoloFunction z1z2() { return HoloFunction::monomial(MultiIndex{1, 1}); }

HoloSelfMap product_map() {
  return HoloSelfMap({z1z2(), HoloFunction::coordinate(2, 1)});
}

void check_gradient_matches_fd(const HoloFunction& f, const std::vector<cplx>& z, double tol) {
  std::vector<cplx> g(f.dimension());
  f.gradient(z, g);
  const auto fd = fd_gradient(f, z);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(g[k] - fd[k]) <= tol * std::max(1.0, std::abs(g[k])));
}

}  // namespace

TEST_CASE("evaluation") {
  CHECK(std::abs(eval(HoloFunction::monomial(MultiIndex{2, 0}), PolydiskPoint{0.5, 0.3}) - 0.25) < 1e-15);
  const auto seven = HoloFunction::constant(2, 7.0);
  CHECK(eval(seven, PolydiskPoint{0.9, -0.4}) == cplx(7.0));
  CHECK(eval(seven, PolydiskPoint::origin(2)) == cplx(7.0));
  CHECK(std::abs(eval(z1z2(), PolydiskPoint{0.2, 0.5}) - 0.1) < 1e-15);
  CHECK_THROWS_AS(eval(z1z2(), PolydiskPoint{0.2}), DimensionError);
}

TEST_CASE("structural partials") {
  const auto sq = HoloFunction::monomial(MultiIndex{2, 0});
  const auto d1 = partial(sq, 0);
  const auto d2 = partial(sq, 1);
  const PolydiskPoint z{cplx(0.3, -0.2), 0.6};
  CHECK(std::abs(eval(d1, z) - 2.0 * z[0]) < 1e-15);
  CHECK(eval(d2, z) == cplx(0.0));

  const cplx a(0.4, 0.3);
  const auto m = moebius_factor(1, 0, a, 0.0);
  const auto dm = partial(m, 0);
  for (cplx t : {cplx(0.0), cplx(0.5, -0.1), cplx(-0.7, 0.6)}) {
    const cplx want = (1.0 - std::norm(a)) / ((1.0 - std::conj(a) * t) * (1.0 - std::conj(a) * t));
    CHECK(std::abs(eval(dm, PolydiskPoint{t}) - want) < 1e-14);
  }
  check_gradient_matches_fd(m, {cplx(0.5, -0.1)}, 1e-6);
}

TEST_CASE("gradients") {
  const auto sum = HoloFunction::coordinate(2, 0) + HoloFunction::coordinate(2, 1);
  CHECK(gradient(sum, PolydiskPoint{0.7, -0.3}) == Direction{1.0, 1.0});
  const auto g = gradient(z1z2(), PolydiskPoint{0.2, 0.5});
  CHECK(std::abs(g[0] - 0.5) < 1e-15);
  CHECK(std::abs(g[1] - 0.2) < 1e-15);
  CHECK(gradient(HoloFunction::constant(2, 3.0), PolydiskPoint{0.1, 0.2}) == Direction::zero(2));
}

TEST_CASE("partials of every corpus function agree with finite differences") {
  const Corpus c = default_corpus(2, 0.5);
  const auto pts = sample_points(2, 20, 0.9, 3);
  for (const auto& cf : c.functions) {
    CAPTURE(cf.id);
    for (const auto& z : pts) check_gradient_matches_fd(cf.f, z, 1e-6);
  }
}

TEST_CASE("jacobians") {
  const PolydiskPoint z{cplx(0.3, 0.1), -0.6};
  CHECK(jacobian(HoloSelfMap::identity(2), z).isApprox(Eigen::MatrixXcd::Identity(2, 2)));
  HoloSelfMap swap({HoloFunction::coordinate(2, 1), HoloFunction::coordinate(2, 0)});
  Eigen::MatrixXcd perm(2, 2);
  perm << 0.0, 1.0, 1.0, 0.0;
  CHECK(jacobian(swap, z).isApprox(perm));
  Eigen::MatrixXcd want(2, 2);
  want << 0.5, 0.2, 0.0, 1.0;
  CHECK((jacobian(product_map(), PolydiskPoint{0.2, 0.5}) - want).norm() < 1e-15);
}

TEST_CASE("composition") {
  const auto sq = HoloFunction::monomial(MultiIndex{2, 0});
  const auto c = compose(sq, product_map());
  REQUIRE(c.as_polynomial() != nullptr);
  Polynomial want = Polynomial::monomial(MultiIndex{2, 2});
  CHECK((*c.as_polynomial() - want).is_zero());

  const PolydiskPoint z{cplx(0.3, 0.4), cplx(-0.5, 0.1)};
  const auto m = moebius_factor(2, 1, cplx(0.2, -0.3), 0.4);
  CHECK(std::abs(eval(compose(m, HoloSelfMap::identity(2)), z) - eval(m, z)) < 1e-15);

  HoloSelfMap constant({HoloFunction::constant(2, cplx(0.1, 0.2)), HoloFunction::constant(2, 0.3)});
  CHECK(std::abs(eval(compose(HoloFunction::coordinate(2, 0), constant), z) - cplx(0.1, 0.2)) < 1e-15);

  // Lazy compositions (a Moebius factor inside) still differentiate exactly.
  const auto lazy = compose(HoloFunction::monomial(MultiIndex{2, 1}), moebius_automorphism(
                                                                         std::vector<cplx>{0.3, cplx(0, 0.5)},
                                                                         std::vector<double>{0.2, 1.0},
                                                                         std::vector<std::size_t>{1, 0}));
  check_gradient_matches_fd(lazy, {cplx(0.2, 0.1), cplx(-0.4, 0.3)}, 1e-6);
}

TEST_CASE("self-map certificates") {
  HoloSelfMap avg({0.5 * HoloFunction::coordinate(2, 0) + 0.5 * HoloFunction::coordinate(2, 1),
                   HoloFunction::coordinate(2, 1)});
  CHECK(certify_self_map(avg).kind == Certificate::Kind::Coefficients);
  HoloSelfMap coords({HoloFunction::coordinate(3, 0), HoloFunction::coordinate(3, 1), HoloFunction::coordinate(3, 2)});
  CHECK(certify_self_map(coords).kind == Certificate::Kind::Coefficients);
  CHECK(certify_self_map(HoloSelfMap::identity(3)).certified());
  HoloSelfMap doubled({2.0 * HoloFunction::coordinate(2, 0), HoloFunction::coordinate(2, 1)});
  CHECK(certify_self_map(doubled).kind == Certificate::Kind::Unverified);
  const auto aut = random_automorphism(2, 5, 0);
  CHECK(certify_self_map(aut).kind == Certificate::Kind::Automorphism);
}

TEST_CASE("Moebius automorphisms") {
  const std::vector<cplx> zero{0.0, 0.0};
  const std::vector<double> no_turn{0.0, 0.0};
  const std::vector<std::size_t> id{0, 1};
  const auto phi = moebius_automorphism(zero, no_turn, id);
  const PolydiskPoint z{cplx(0.3, -0.2), 0.7};
  const auto w = phi(z);
  CHECK(std::abs(w[0] - z[0]) < 1e-15);
  CHECK(std::abs(w[1] - z[1]) < 1e-15);

  const auto one = moebius_automorphism(std::vector<cplx>{0.5}, std::vector<double>{0.0},
                                        std::vector<std::size_t>{0});
  CHECK(std::abs(one(PolydiskPoint{0.5})[0]) < 1e-15);
  CHECK(std::abs(jacobian(one, PolydiskPoint{0.0})(0, 0) - 0.75) < 1e-15);
  CHECK_THROWS(moebius_automorphism(std::vector<cplx>{1.0}, std::vector<double>{0.0},
                                    std::vector<std::size_t>{0}));
  CHECK_THROWS(moebius_automorphism(zero, no_turn, std::vector<std::size_t>{0, 0}));
}

TEST_CASE("automorphisms map random points into the polydisk") {
  for (std::size_t i = 0; i < 10; ++i) {
    const auto phi = random_automorphism(3, 11, i);
    for (const auto& z : sample_points(3, 50, 0.999, i)) {
      std::vector<cplx> w(3);
      phi.evaluate(z, w);
      for (cplx c : w) CHECK(std::abs(c) < 1.0);
    }
  }
}

TEST_CASE("map specification round trip") {
  const nlohmann::json spec = nlohmann::json::parse(R"({
    "dimension": 2,
    "components": [
      {"type": "series", "terms": [{"exponents": [1, 1], "coeff": [0.5, 0]}, {"exponents": [0, 0], "coeff": [0.25, 0.1]}]},
      {"type": "moebius", "a": [0.3, -0.2], "theta": 0.7, "source": 1}
    ]})");
  const HoloSelfMap phi = map_from_json(spec);
  const HoloSelfMap again = map_from_json(map_to_json(phi));
  for (const auto& z : sample_points(2, 30, 0.95, 9)) {
    std::vector<cplx> a(2), b(2);
    phi.evaluate(z, a);
    again.evaluate(z, b);
    CHECK(std::abs(a[0] - b[0]) < 1e-15);
    CHECK(std::abs(a[1] - b[1]) < 1e-15);
  }
  const PolydiskPoint z{0.0, 0.3};
  CHECK(std::abs(phi(z)[1] - std::polar(1.0, 0.7) * (0.0 - cplx(0.3, -0.2))) < 1e-15);
}

TEST_CASE("compose list applies before the components") {
  // components (z1 z2, z2) after compose [(z2, z1)] gives (z2 z1, z1).
  const nlohmann::json spec = nlohmann::json::parse(R"({
    "dimension": 2,
    "compose": [{"components": [
      {"type": "series", "terms": [{"exponents": [0, 1], "coeff": [1, 0]}]},
      {"type": "series", "terms": [{"exponents": [1, 0], "coeff": [1, 0]}]}]}],
    "components": [
      {"type": "series", "terms": [{"exponents": [1, 1], "coeff": [1, 0]}]},
      {"type": "series", "terms": [{"exponents": [0, 1], "coeff": [1, 0]}]}]})");
  const auto phi = map_from_json(spec);
  const PolydiskPoint z{0.2, 0.5};
  const auto w = phi(z);
  CHECK(std::abs(w[0] - 0.1) < 1e-15);
  CHECK(std::abs(w[1] - 0.2) < 1e-15);
}

TEST_CASE("malformed specifications are rejected") {
  CHECK_THROWS(map_from_json(nlohmann::json::parse(R"({"dimension": 2, "components": []})")));
  CHECK_THROWS(map_from_json(nlohmann::json::parse(R"({"dimension": 1, "components": [{"type": "nope"}]})")));
  CHECK_THROWS(map_from_json(nlohmann::json::parse(
      R"({"dimension": 1, "components": [{"type": "moebius", "a": [1.5, 0], "theta": 0, "source": 1}]})")));
  CHECK_THROWS(map_from_json(nlohmann::json::parse(
      R"({"dimension": 1, "components": [{"type": "series", "terms": [{"exponents": [1, 0], "coeff": [1, 0]}]}]})")));
}
