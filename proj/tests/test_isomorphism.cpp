#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace tropcover;
using testutil::interval;
using testutil::naive_isomorphism_count;

TEST_CASE("isometry counts agree with brute force", "[isomorphism]") {
  Curve th = detail::theta_curve();
  Curve eight = testutil::figure_eight();
  Curve c6 = detail::cycle_curve(6, "C6");
  Curve star = detail::star_curve(4, "star4");

  CHECK(naive_isomorphism_count(th, th) == 12);
  CHECK(count_isomorphisms(th, th) == 12);

  CHECK(count_isomorphisms(eight, eight) ==
        naive_isomorphism_count(eight, eight));
  CHECK(count_isomorphisms(eight, eight) == 4);

  // the labelled hexagon has the full dihedral symmetry
  CHECK(count_isomorphisms(c6, c6) == naive_isomorphism_count(c6, c6));
  CHECK(count_isomorphisms(c6, c6) == 12);

  CHECK(count_isomorphisms(star, star) ==
        naive_isomorphism_count(star, star));
  CHECK(count_isomorphisms(star, star) == 24);
}

TEST_CASE("metric data rules out combinatorially equal graphs",
          "[isomorphism]") {
  Curve a = interval("a", Rat(1));
  Curve b = interval("b", Rat(2));
  CHECK_FALSE(find_isomorphism(a, b).has_value());
  CHECK(count_isomorphisms(a, b) == naive_isomorphism_count(a, b));

  // infinite ends must match up
  CurveBuilder rb("r");
  rb.vertex("a").vertex("m").vertex("z");
  rb.edge("e1", "a", "m", Length::finite(Rat(1)));
  rb.edge("e2", "m", "z", Length::infinity());
  Curve ray = rb.build();
  CHECK(count_isomorphisms(ray, ray) == naive_isomorphism_count(ray, ray));
  CHECK(count_isomorphisms(ray, ray) == 1);
}

TEST_CASE("the visitor can stop the enumeration early", "[isomorphism]") {
  Curve th = detail::theta_curve();
  int seen = 0;
  bool stopped = for_each_isomorphism(th, th, [&](const Isomorphism&) {
    ++seen;
    return seen == 3;
  });
  CHECK(stopped);
  CHECK(seen == 3);
}

TEST_CASE("degree-one maps are found across model refinements",
          "[isomorphism]") {
  Curve plain = interval("i", Rat(1));
  CutSet cuts(1);
  cuts.add(0, Rat(1, 3));
  cuts.normalize();
  Curve fine = refine(plain, cuts).fine;

  SECTION("between identical models the map is direct") {
    auto r = find_degree_one_morphism(plain, plain);
    REQUIRE(r.has_value());
    CHECK(r->direct);
    CHECK(degree_of(r->morphism) == 1);
  }
  SECTION("between different models the canonical models are compared") {
    auto r = find_degree_one_morphism(fine, plain);
    REQUIRE(r.has_value());
    CHECK_FALSE(r->direct);
    CHECK(degree_of(r->morphism) == 1);
  }
  SECTION("genuinely different curves admit no degree-one map") {
    CHECK_FALSE(find_degree_one_morphism(plain, interval("j", Rat(2)))
                    .has_value());
  }
}
