#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace tropcover;
using testutil::interval;

namespace {

Errc code_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& err) {
    return err.code();
  }
  FAIL("expected an error");
  return Errc::Internal;
}

}  // namespace

TEST_CASE("builder assembles a valid model", "[curve]") {
  Curve c = interval("i", Rat(2));
  CHECK(c.vertex_count() == 2);
  CHECK(c.edge_count() == 1);
  CHECK(c.find_vertex("p") == 0);
  CHECK(c.find_vertex("missing") == -1);
  CHECK(c.find_edge("e") == 0);
  CHECK(c.edges[0].length == Length::finite(Rat(2)));
  CHECK(c == c);
  CHECK_FALSE(c == interval("i", Rat(3)));
}

TEST_CASE("builder rejects malformed input", "[curve]") {
  CHECK(code_of([] {
          CurveBuilder b("x");
          b.vertex("a").vertex("a");
        }) == Errc::DuplicateName);
  CHECK(code_of([] {
          CurveBuilder b("x");
          b.vertex("a");
          b.edge("e", "a", "nope", Length::finite(Rat(1)));
        }) == Errc::UnknownReference);
  CHECK(code_of([] {
          CurveBuilder b("x");
          b.vertex("a").vertex("b");
          b.edge("e", "a", "b", Length::finite(Rat(0)));
          b.build();
        }) == Errc::NonpositiveLength);
  CHECK(code_of([] { CurveBuilder("x").build(); }) == Errc::EmptyGraph);
  CHECK(code_of([] {
          CurveBuilder b("x");
          b.vertex("a").vertex("b").vertex("c").vertex("d");
          b.edge("e1", "a", "b", Length::finite(Rat(1)));
          b.edge("e2", "c", "d", Length::finite(Rat(1)));
          b.build();
        }) == Errc::Disconnected);
}

TEST_CASE("infinite edges sit on leaves with the far end at b", "[curve]") {
  // inferred: the leaf end of the infinite edge becomes endpoint b
  CurveBuilder b("r");
  b.vertex("a").vertex("m").vertex("z");
  b.edge("e1", "a", "m", Length::finite(Rat(1)));
  b.edge("e2", "z", "m", Length::infinity());  // z is the leaf
  Curve c = b.build();
  const Edge& e2 = c.edges[1];
  CHECK(e2.length.is_infinite());
  CHECK(c.vertex_names[e2.b] == "z");
  CHECK(e2.inf_end == InfEnd::B);

  // tagged at a: endpoints are swapped during normalization
  CurveBuilder b2("s");
  b2.vertex("a").vertex("z");
  b2.edge("e", "a", "z", Length::infinity(), 'a');
  Curve c2 = b2.build();
  CHECK(c2.vertex_names[c2.edges[0].b] == "a");
}

TEST_CASE("ambiguous and misplaced infinite ends are rejected", "[curve]") {
  // both endpoints are leaves: the infinite end cannot be inferred
  CHECK(code_of([] {
          CurveBuilder b("x");
          b.vertex("a").vertex("b");
          b.edge("e", "a", "b", Length::infinity());
          b.build();
        }) == Errc::AmbiguousInfiniteEnd);
  // the infinite end must be a leaf
  CHECK(code_of([] {
          CurveBuilder b("x");
          b.vertex("a").vertex("m").vertex("z");
          b.edge("e1", "a", "m", Length::finite(Rat(1)));
          b.edge("e2", "m", "z", Length::finite(Rat(1)));
          b.edge("e3", "a", "m", Length::infinity(), 'b');
          b.build();
        }) == Errc::InfinityOnNonLeafEdge);
}

TEST_CASE("points are validated against their curve", "[curve]") {
  Curve c = interval("i", Rat(2));
  CHECK_NOTHROW(require_point(c, Point::at_vertex(1)));
  CHECK_NOTHROW(require_point(c, Point::interior(0, Rat(1, 2))));
  CHECK(code_of([&] { require_point(c, Point::at_vertex(7)); }) ==
        Errc::BadIndex);
  CHECK(code_of([&] { require_point(c, Point::interior(0, Rat(2))); }) ==
        Errc::OffsetOutOfRange);
  CHECK(code_of([&] { require_point(c, Point::interior(0, Rat(-1))); }) ==
        Errc::OffsetOutOfRange);
  CHECK(format_point(c, Point::interior(0, Rat(1, 2))) == "e@1/2");

  // any positive offset is interior to an infinite edge
  CurveBuilder b("r");
  b.vertex("a").vertex("m").vertex("z");
  b.edge("e1", "a", "m", Length::finite(Rat(1)));
  b.edge("e2", "m", "z", Length::infinity());
  Curve r = b.build();
  CHECK_NOTHROW(require_point(r, Point::interior(1, Rat(1000000))));
}

TEST_CASE("validate_model reports valences", "[curve]") {
  std::vector<int> val = validate_model(testutil::figure_eight());
  CHECK(val == std::vector<int>{4, 2, 2});
}
