#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blochlab/polydisk.hpp"

using namespace blochlab;

TEST_CASE("points must lie in the polydisk") {
  CHECK_THROWS_AS(PolydiskPoint({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(PolydiskPoint(std::vector<cplx>{}), DimensionError);
  CHECK_NOTHROW(ClosedPolydiskPoint({1.0, 0.0}));
  CHECK_THROWS_AS(ClosedPolydiskPoint({1.01, 0.0}), DomainError);
  CHECK_FALSE(ClosedPolydiskPoint({1.0, 0.0}).is_interior());
  CHECK_THROWS_AS(PolydiskPoint::from_closed(ClosedPolydiskPoint({cplx(0, 1), 0.0})), DomainError);
}

TEST_CASE("bergman metric") {
  CHECK(bergman_metric(PolydiskPoint{0.0}, Direction{1.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bergman_metric(PolydiskPoint{0.5, 0.0}, Direction{1.0, 0.0}) ==
        doctest::Approx(1.0 / 0.5625).epsilon(1e-14));
  CHECK(bergman_metric(PolydiskPoint{0.3, cplx(0.1, -0.7)}, Direction::zero(2)) == 0.0);
  CHECK_THROWS_AS(bergman_metric(PolydiskPoint{0.3}, Direction{1.0, 1.0}), DimensionError);
}

TEST_CASE("bergman metric is invariant under rotations of each coordinate") {
  const PolydiskPoint z{cplx(0.4, 0.3), cplx(-0.2, 0.6)};
  const Direction u{cplx(1, 2), cplx(-0.5, 0.25)};
  const cplx e1 = std::polar(1.0, 0.7);
  const cplx e2 = std::polar(1.0, -2.1);
  const PolydiskPoint rz{e1 * z[0], e2 * z[1]};
  const Direction ru{e1 * u[0], e2 * u[1]};
  CHECK(bergman_metric(rz, ru) == doctest::Approx(bergman_metric(z, u)).epsilon(1e-14));
}

TEST_CASE("boundary distance") {
  CHECK(boundary_distance(PolydiskPoint::origin(3)) == 1.0);
  CHECK(boundary_distance(PolydiskPoint{0.9, 0.2}) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(boundary_distance(ClosedPolydiskPoint{1.0, 0.0}) == 0.0);
}

TEST_CASE("segment points") {
  const ClosedPolydiskPoint z{0.1, 0.2, 0.3};
  const ClosedPolydiskPoint w{0.4, 0.5, 0.6};
  CHECK(segment_point(z, w, 0) == z);
  CHECK(segment_point(z, w, 3) == w);
  CHECK(segment_point(z, w, 1) == ClosedPolydiskPoint{0.1, 0.2, 0.6});
  CHECK(segment_point(z, w, 2) == ClosedPolydiskPoint{0.1, 0.5, 0.6});
  CHECK_THROWS_AS(segment_point(z, w, 4), std::out_of_range);
  CHECK_THROWS_AS(segment_point(z, ClosedPolydiskPoint{0.0}, 1), DimensionError);
}

TEST_CASE("replace a coordinate") {
  const ClosedPolydiskPoint z{0.1, 0.2};
  CHECK(replace_coord(z, 0, 0.1) == z);
  CHECK(replace_coord(z, 0, 0.5) == ClosedPolydiskPoint{0.5, 0.2});
  CHECK(replace_coord(ClosedPolydiskPoint{0.3}, 0, 0.0) == ClosedPolydiskPoint{0.0});
  CHECK_THROWS_AS(replace_coord(z, 2, 0.0), std::out_of_range);
  CHECK_THROWS_AS(replace_coord(z, 0, 2.0), DomainError);
}

TEST_CASE("multi-indices") {
  CHECK(MultiIndex{2, 1}.degree() == 3);
  CHECK(MultiIndex{1, 0} + MultiIndex{0, 2} == MultiIndex{1, 2});
  CHECK_THROWS(MultiIndex{-1});
  const auto all = multi_indices_up_to(2, 2);
  CHECK(all.size() == 6);
  CHECK(all.front() == MultiIndex{0, 0});
  CHECK(std::abs(MultiIndex{2, 1}.monomial(std::vector<cplx>{0.5, 0.3}) - 0.075) < 1e-15);
}
