#include <cmath>
#include <limits>

#include "doctest.h"
#include "rsc/error.hpp"
#include "rsc/sphere_cover.hpp"
#include "support.hpp"

using namespace rsc;

namespace {

Sphere ball(std::size_t label, std::vector<double> c, double r) {
  Sphere s;
  s.label = label;
  s.center = std::move(c);
  s.radius = r;
  return s;
}

SphereCoverModel hand_model(std::vector<Sphere> spheres) {
  SphereCoverModel m;
  m.class_labels = {"A", "B"};
  m.spheres = std::move(spheres);
  m.attribute_subset = {0, 1};
  return m;
}

}  // namespace

TEST_CASE("distance") {
  const std::vector<double> o{0, 0}, p{3, 4}, e1{1, 0}, e2{0, 1};
  CHECK(distance(o, p) == 5.0);
  CHECK(distance(p, p) == 0.0);
  CHECK(distance(e1, e2) == doctest::Approx(std::sqrt(2.0)));
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(distance(o, three), std::invalid_argument);
}

TEST_CASE("two opposite points") {
  const auto d = test::make_dataset({{{0.0}, "A"}, {{1.0}, "B"}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = build_rsc(d, 1, seed);
    REQUIRE(m.spheres.size() == 2);
    for (const auto& s : m.spheres) {
      CHECK(s.radius == 1.0);
      CHECK(s.members.size() == 1);
      CHECK(distance(d.row(s.members[0]), s.center) == 0.0);
    }
  }
}

TEST_CASE("single class gives one unbounded sphere") {
  const auto d = test::make_dataset({{{0.0}, "A"}, {{0.5}, "A"}, {{1.0}, "A"}});
  for (int alpha : {0, 1, 2, 3}) {
    const auto m = build_rsc(d, alpha, 3);
    REQUIRE(m.spheres.size() == 1);
    CHECK(m.spheres[0].unbounded());
    CHECK(m.spheres[0].members.size() == 3);
    CHECK_FALSE(m.spheres[0].border_index.has_value());
  }
}

TEST_CASE("xor layout") {
  const auto d = test::make_dataset({{{0, 0}, "A"}, {{1, 1}, "A"}, {{0, 1}, "B"}, {{1, 0}, "B"}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = build_rsc(d, 1, seed);
    REQUIRE(m.spheres.size() == 4);
    for (const auto& s : m.spheres) CHECK(s.radius == 1.0);
  }
}

TEST_CASE("alpha above n retains nothing") {
  const auto d = test::random_dataset(4, 30, 3, 2);
  const auto m = build_rsc(d, 31, 1);
  CHECK(m.spheres.empty());
  const std::vector<double> x{0.5, 0.5, 0.5};
  CHECK_THROWS_AS(classify(m, x), UnusableModelError);
}

TEST_CASE("covering spheres") {
  auto m = hand_model({ball(0, {0, 0}, 1.0), ball(1, {0, 0}, 2.0)});
  const std::vector<double> center{0, 0}, edge{1, 0}, inner{0.5, 0};
  const auto at_center = covering_spheres(m, center);
  REQUIRE(at_center.size() == 2);
  CHECK(at_center[0].center_distance == 0.0);
  const auto on_edge = covering_spheres(m, edge);
  REQUIRE(on_edge.size() == 1);
  CHECK(on_edge[0].sphere == 1);
  CHECK(covering_spheres(m, inner).size() == 2);
}

TEST_CASE("edge distance") {
  const auto s1 = ball(0, {0, 0}, 1.0);
  const auto s2 = ball(1, {0, 0}, 2.0);
  const std::vector<double> far{4, 0}, three{3, 0}, center{0, 0};
  CHECK(edge_distance(s1, three) == 2.0);
  CHECK(edge_distance(s1, center) == -1.0);
  CHECK(edge_distance(s1, far) == 3.0);
  CHECK(edge_distance(s2, far) == 2.0);
  auto m = hand_model({s1, s2});
  CHECK(classify(m, far) == 1);
  auto inf = ball(0, {0, 0}, std::numeric_limits<double>::infinity());
  CHECK(edge_distance(inf, far) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("classification rules") {
  // Rule 1 with a single covering sphere.
  {
    auto m = hand_model({ball(0, {0, 0}, 1.0), ball(1, {5, 0}, 1.0)});
    const std::vector<double> x{0.3, 0};
    CHECK(classify(m, x) == 0);
  }
  // Rule 1: nearest covering center wins.
  {
    auto m = hand_model({ball(0, {0, 0}, 1.0), ball(1, {0.6, 0}, 1.0)});
    const std::vector<double> x{0.4, 0};
    CHECK(classify(m, x) == 1);
  }
  // Rule 2: nearest surface wins even against a nearer center.
  {
    auto m = hand_model({ball(0, {0, 0}, 2.9), ball(1, {0, 2.5}, 1.0)});
    const std::vector<double> x{0, 3.0};
    CHECK(edge_distance(m.spheres[0], x) == doctest::Approx(0.1));
    CHECK(edge_distance(m.spheres[1], x) == doctest::Approx(-0.5));
    const std::vector<double> y{3.0, 0};
    auto m2 = hand_model({ball(0, {0, 0}, 2.9), ball(1, {3.5, 0}, 0.2)});
    CHECK(edge_distance(m2.spheres[0], y) == doctest::Approx(0.1));
    CHECK(edge_distance(m2.spheres[1], y) == doctest::Approx(0.3));
    CHECK(classify(m2, y) == 0);
  }
  // Equal distances go to the lower sphere index.
  {
    auto m = hand_model({ball(1, {-1, 0}, 0.5), ball(0, {1, 0}, 0.5)});
    const std::vector<double> x{0, 0};
    CHECK(classify(m, x) == 1);
  }
}

TEST_CASE("proper cover on random data") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto d = test::random_dataset(seed, 40, 3, 3);
    for (int alpha : {0, 1, 2, 4}) {
      const auto m = build_rsc(d, alpha, seed * 7 + 1);
      CHECK_NOTHROW(verify_cover(m, d));
      for (const auto& s : m.spheres) {
        CHECK(s.members.size() >= static_cast<std::size_t>(std::max(alpha, 1)));
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (d.label(i) != s.label) CHECK(distance(d.row(i), s.center) >= s.radius);
        }
        if (s.border_index) CHECK(distance(d.row(*s.border_index), s.center) == s.radius);
      }
      if (alpha <= 1) {
        for (std::size_t i = 0; i < d.size(); ++i) {
          CHECK(classify(m, d.row(i)) == d.label(i));
          CHECK_FALSE(covering_spheres(m, d.row(i)).empty());
        }
      }
    }
  }
}

TEST_CASE("same seed same model") {
  const auto d = test::random_dataset(9, 60, 4, 2);
  const auto a = build_rsc(d, 2, 11);
  const auto b = build_rsc(d, 2, 11);
  REQUIRE(a.spheres.size() == b.spheres.size());
  for (std::size_t i = 0; i < a.spheres.size(); ++i) {
    CHECK(a.spheres[i].center == b.spheres[i].center);
    CHECK(a.spheres[i].radius == b.spheres[i].radius);
  }
}

TEST_CASE("verify_cover rejects impure spheres") {
  const auto d = test::make_dataset({{{0.0}, "A"}, {{1.0}, "B"}});
  auto m = build_rsc(d, 1, 0);
  m.spheres[0].radius = 5.0;
  CHECK_THROWS_AS(verify_cover(m, d), InvariantError);
}
