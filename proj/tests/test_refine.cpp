#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace tropcover;
using testutil::interval;

TEST_CASE("cutting an interval names the pieces after the edge", "[refine]") {
  Curve c = interval("i", Rat(1));
  CutSet cuts(1);
  cuts.add(0, Rat(1, 3));
  cuts.normalize();
  Refinement r = refine(c, cuts);
  REQUIRE(r.fine.edge_count() == 2);
  CHECK(r.fine.edges[0].name == "e.1");
  CHECK(r.fine.edges[1].name == "e.2");
  CHECK(r.fine.edges[0].length == Length::finite(Rat(1, 3)));
  CHECK(r.fine.edges[1].length == Length::finite(Rat(2, 3)));
  REQUIRE(r.cut_vertices.size() == 1);
  REQUIRE(r.cut_vertices[0].size() == 1);
  CHECK(r.fine.vertex_names[r.cut_vertices[0][0]] == "e@1/3");
  // chain structure: p - cut - q
  CHECK(r.map.vertex_image[0] == r.fine.find_vertex("p"));
  CHECK(r.map.edge_paths[0].size() == 2);
}

TEST_CASE("an empty cut set reproduces the model exactly", "[refine]") {
  for (const Curve& c :
       {interval("i", Rat(2)), testutil::figure_eight()}) {
    Refinement r = refine(c, CutSet(c.edge_count()));
    CHECK(r.fine == c);
  }
}

TEST_CASE("uncut edges keep their names", "[refine]") {
  Curve c = testutil::figure_eight();
  CutSet cuts(c.edge_count());
  cuts.add(0, Rat(1, 2));
  cuts.normalize();
  Refinement r = refine(c, cuts);
  CHECK(r.fine.find_edge("a1.1") >= 0);
  CHECK(r.fine.find_edge("a2") >= 0);
  CHECK(r.fine.find_edge("b1") >= 0);
}

TEST_CASE("interior positions refine without being cut", "[refine]") {
  Curve c = interval("i", Rat(1));
  CutSet cuts(1);
  cuts.add(0, Rat(1, 2));
  cuts.normalize();
  Refinement r = refine(c, cuts);
  // a point before the cut lands in the first segment
  Point p = map_point(c, r.fine, r.map, Point::interior(0, Rat(1, 4)));
  CHECK(p == Point::interior(r.fine.find_edge("e.1"), Rat(1, 4)));
  // a point after the cut is re-based
  Point q = map_point(c, r.fine, r.map, Point::interior(0, Rat(3, 4)));
  CHECK(q == Point::interior(r.fine.find_edge("e.2"), Rat(1, 4)));
  // the cut position becomes the new vertex
  Point m = map_point(c, r.fine, r.map, Point::interior(0, Rat(1, 2)));
  REQUIRE(r.cut_vertices[0].size() == 1);
  CHECK(m == Point::at_vertex(r.cut_vertices[0][0]));
  // locate goes the other way
  CHECK(r.locate(0, Rat(3, 4)) ==
        Point::interior(r.fine.find_edge("e.2"), Rat(1, 4)));
}

TEST_CASE("cut positions outside the edge are rejected", "[refine]") {
  Curve c = interval("i", Rat(1));
  CutSet cuts(1);
  cuts.add(0, Rat(2));
  cuts.normalize();
  try {
    refine(c, cuts);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::OffsetOutOfRange);
  }
}

TEST_CASE("infinite edges refine into a finite head and infinite tail",
          "[refine]") {
  CurveBuilder b("r");
  b.vertex("a").vertex("m").vertex("z");
  b.edge("e1", "a", "m", Length::finite(Rat(1)));
  b.edge("e2", "m", "z", Length::infinity());
  Curve c = b.build();
  CutSet cuts(2);
  cuts.add(1, Rat(5));
  cuts.normalize();
  Refinement r = refine(c, cuts);
  int head = r.fine.find_edge("e2.1");
  int tail = r.fine.find_edge("e2.2");
  REQUIRE(head >= 0);
  REQUIRE(tail >= 0);
  CHECK(r.fine.edges[head].length == Length::finite(Rat(5)));
  CHECK(r.fine.edges[tail].length.is_infinite());
  CHECK(r.fine.edges[tail].inf_end == InfEnd::B);
}

TEST_CASE("canonical model suppresses valence-two vertices", "[refine]") {
  Curve c = interval("i", Rat(1));
  CutSet cuts(1);
  cuts.add(0, Rat(1, 3));
  cuts.add(0, Rat(2, 3));
  cuts.normalize();
  Curve fine = refine(c, cuts).fine;
  CanonicalModel cm = canonical_model(fine);
  CHECK(cm.model.vertex_count() == 2);
  CHECK(cm.model.edge_count() == 1);
  CHECK(cm.model.edges[0].length == Length::finite(Rat(1)));
  // already-canonical models stay put
  CanonicalModel again = canonical_model(cm.model);
  CHECK(again.model == cm.model);
}

TEST_CASE("a circle keeps one marker vertex in its canonical model",
          "[refine]") {
  Curve c6 = detail::cycle_curve(6, "C6");
  CanonicalModel cm = canonical_model(c6);
  CHECK(cm.model.vertex_count() == 1);
  CHECK(cm.model.edge_count() == 1);
  CHECK(cm.model.edges[0].length == Length::finite(Rat(6)));
  CHECK(cm.model.edges[0].is_loop());
}

TEST_CASE("theta is already canonical", "[refine]") {
  Curve th = detail::theta_curve();
  CHECK(canonical_model(th).model == th);
}
