#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace tropcover;
using testutil::interval;

namespace {

MorphismRep interval_dilation(const Rat& k) {
  // p,q -> p,q with the single edge stretched by the integer factor k
  Curve src = interval("src", Rat(1));
  Curve tgt = interval("tgt", k);
  MorphismRep m;
  m.name = "stretch";
  m.source = src;
  m.target = tgt;
  m.vertex_map = {0, 1};
  m.edge_map = {0};
  m.edge_flip = {0};
  m.edge_degree = {k.numerator()};
  return m;
}

}  // namespace

TEST_CASE("identity morphisms are harmonic of degree one", "[morphism]") {
  Curve th = detail::theta_curve();
  MorphismRep id = identity_morphism(th);
  CHECK_NOTHROW(require_finite_morphism(id));
  CHECK(degree_of(id) == 1);
}

TEST_CASE("dilation must match the declared edge degree", "[morphism]") {
  MorphismRep good = interval_dilation(Rat(3));
  CHECK(check_finite_morphism(good).ok);
  CHECK(degree_of(good) == 3);

  MorphismRep bad = interval_dilation(Rat(3));
  bad.edge_degree = {2};  // 1 * 2 != 3
  MorphismCheck chk = check_finite_morphism(bad);
  CHECK_FALSE(chk.ok);
  try {
    require_finite_morphism(bad);
    FAIL("expected rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::NotAMorphism);
    CHECK(std::string(err.what()).find("target length") != std::string::npos);
  }
}

TEST_CASE("the double wind of a circle is harmonic of degree two",
          "[morphism]") {
  Curve c2 = detail::cycle_curve(2, "C2");
  Curve c1 = detail::cycle_curve(1, "C1");
  MorphismRep m;
  m.name = "wind";
  m.source = c2;
  m.target = c1;
  m.vertex_map = {0, 0};
  m.edge_map = {0, 0};
  m.edge_flip = {0, 0};
  m.edge_degree = {1, 1};
  CHECK(check_harmonic(m).degree == 2);
}

TEST_CASE("a balanced fold of two legs is harmonic of degree three",
          "[morphism]") {
  // legs of dilation 2 and 1 onto one leg: the half-edge sums agree at
  // the center (2 + 1) and over the leaf fiber (2 + 1)
  CurveBuilder b("v");
  b.vertex("c").vertex("x").vertex("y");
  b.edge("e1", "c", "x", Length::finite(Rat(1)));
  b.edge("e2", "c", "y", Length::finite(Rat(2)));
  Curve src = b.build();
  Curve tgt = interval("t", Rat(2));
  MorphismRep m;
  m.name = "fold";
  m.source = src;
  m.target = tgt;
  m.vertex_map = {0, 1, 1};
  m.edge_map = {0, 0};
  m.edge_flip = {0, 0};
  m.edge_degree = {2, 1};
  CHECK(check_finite_morphism(m).ok);
  CHECK(check_harmonic(m).degree == 3);
}

TEST_CASE("a lopsided center is finite but not harmonic", "[morphism]") {
  // the center sends different totals into its two target half-edges
  CurveBuilder sb("v");
  sb.vertex("c").vertex("x").vertex("y");
  sb.edge("e1", "c", "x", Length::finite(Rat(1)));
  sb.edge("e2", "c", "y", Length::finite(Rat(1)));
  Curve src = sb.build();
  CurveBuilder tb("path");
  tb.vertex("p").vertex("q").vertex("r");
  tb.edge("A", "p", "q", Length::finite(Rat(1)));
  tb.edge("B", "q", "r", Length::finite(Rat(2)));
  Curve tgt = tb.build();
  MorphismRep m;
  m.name = "lop";
  m.source = src;
  m.target = tgt;
  m.vertex_map = {1, 0, 2};  // c -> q, x -> p, y -> r
  m.edge_map = {0, 1};
  m.edge_flip = {1, 0};
  m.edge_degree = {1, 2};  // 1 into the A side, 2 into the B side
  CHECK(check_finite_morphism(m).ok);
  std::string why;
  CHECK_FALSE(try_harmonic(m, &why).has_value());
  CHECK_FALSE(why.empty());
  try {
    check_harmonic(m);
    FAIL("expected rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::NotFiniteHarmonic);
  }
}

TEST_CASE("flips may not carry an infinite edge backwards", "[morphism]") {
  CurveBuilder b("r");
  b.vertex("a").vertex("m").vertex("z");
  b.edge("e1", "a", "m", Length::finite(Rat(1)));
  b.edge("e2", "m", "z", Length::infinity());
  Curve r = b.build();
  MorphismRep m = identity_morphism(r);
  m.edge_flip[1] = 1;
  try {
    require_finite_morphism(m);
    FAIL("expected rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::NotAMorphism);
    CHECK(std::string(err.what()).find("cannot reverse orientation") !=
          std::string::npos);
  }
}

TEST_CASE("composition multiplies degrees", "[morphism]") {
  Curve c4 = detail::cycle_curve(4, "C4");
  Curve c2 = detail::cycle_curve(2, "C2");
  Curve c1 = detail::cycle_curve(1, "C1");
  MorphismRep down;
  down.name = "half";
  down.source = c4;
  down.target = c2;
  down.vertex_map = {0, 1, 0, 1};
  down.edge_map = {0, 1, 0, 1};
  down.edge_flip = {0, 0, 0, 0};
  down.edge_degree = {1, 1, 1, 1};
  MorphismRep wind;
  wind.name = "wind";
  wind.source = c2;
  wind.target = c1;
  wind.vertex_map = {0, 0};
  wind.edge_map = {0, 0};
  wind.edge_flip = {0, 0};
  wind.edge_degree = {1, 1};
  MorphismRep both = compose_on_model(wind, down);
  CHECK(check_harmonic(both).degree == 4);
  CHECK(both.source == c4);
  CHECK(both.target == c1);
}

TEST_CASE("factoring through the identity returns the map itself",
          "[morphism]") {
  MorphismRep m = interval_dilation(Rat(2));
  MorphismRep id = identity_morphism(m.source);
  FactorResult fr = factor_through(m, id);
  REQUIRE(fr.classification == FactorClass::FiniteHarmonic);
  CHECK(fr.certificate->degree == 2);
  CHECK(same_map(*fr.theta, m));
}

TEST_CASE("maps that separate a fiber do not factor", "[morphism]") {
  // the quotient projection of the theta graph identifies all three
  // edges; the identity tells them apart, so no factor exists
  ExampleBundle b = example_theta();
  QuotientResult q = quotient(b.action.group, "Q").result;
  REQUIRE(q.projection.source == b.curve());
  FactorResult fr = factor_through(identity_morphism(b.curve()), q.projection);
  CHECK(fr.classification == FactorClass::NotWellDefined);
  CHECK_FALSE(fr.witness.empty());
}

TEST_CASE("source models must agree for factoring", "[morphism]") {
  MorphismRep m = interval_dilation(Rat(2));
  MorphismRep other = identity_morphism(interval("other", Rat(1)));
  try {
    factor_through(m, other);
    FAIL("expected rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::SourceModelMismatch);
  }
}
