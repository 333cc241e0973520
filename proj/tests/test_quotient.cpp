#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace tropcover;

namespace {

// stabilizer order recomputed straight from the group elements
int direct_edge_stab(const ActionGroup& g, const Subgroup& s, int e) {
  int n = 0;
  for (int i : s.elements)
    if (g.elements[i].emap[e] == e) ++n;
  return n;
}

void check_quotient_invariants(const ActionGroup& model_group,
                               const Subgroup& sub,
                               const QuotientResult& q) {
  const Curve& model = model_group.curve;
  // orbit partition covers the model
  long long vsum = 0, esum = 0;
  for (const OrbitRow& r : q.vertex_rows) vsum += r.orbit_size;
  for (const OrbitRow& r : q.edge_rows) esum += r.orbit_size;
  CHECK(vsum == model.vertex_count());
  CHECK(esum == model.edge_count());
  // quotient edge lengths are stabilizer order times the model length
  for (std::size_t k = 0; k < q.edge_rows.size(); ++k) {
    const OrbitRow& r = q.edge_rows[k];
    int stab = direct_edge_stab(model_group, sub, r.representative);
    CHECK(stab == r.stabilizer_order);
    CHECK(r.orbit_size * r.stabilizer_order == sub.order());
    const Length& upstairs = model.edges[r.representative].length;
    if (upstairs.is_infinite())
      CHECK(q.quotient.edges[k].length.is_infinite());
    else
      CHECK(q.quotient.edges[k].length == upstairs.scaled(r.stabilizer_order));
  }
  // the projection is finite harmonic of degree |sub|
  CHECK(check_harmonic(q.projection).degree == sub.order());
  CHECK(q.degree == sub.order());
}

}  // namespace

TEST_CASE("the theta quotient is an interval of length two", "[quotient]") {
  ExampleBundle b = example_theta();
  PreparedQuotient pq = quotient(b.action.group, "Q");
  const QuotientResult& q = pq.result;
  REQUIRE(q.quotient.vertex_count() == 2);
  REQUIRE(q.quotient.edge_count() == 1);
  CHECK(q.quotient.edges[0].length == Length::finite(Rat(2)));
  CHECK(q.degree == 6);
  CHECK(q.edge_rows[0].orbit_size == 3);
  CHECK(q.edge_rows[0].stabilizer_order == 2);
  // every projection edge has dilation two
  for (long long d : q.projection.edge_degree) CHECK(d == 2);
  check_quotient_invariants(pq.prepared.group,
                            full_subgroup(pq.prepared.group), q);

  // by the rotation subgroup alone the interval has length one
  QuotientResult q3 = quotient_on_model(pq.prepared.group,
                                        b.marked_subgroups[0].second, "Q3");
  REQUIRE(q3.quotient.edge_count() == 1);
  CHECK(q3.quotient.edges[0].length == Length::finite(Rat(1)));
  CHECK(q3.degree == 3);
}

TEST_CASE("the six-legged star folds to legs of lengths four and two",
          "[quotient]") {
  ExampleBundle b = example_star6();
  PreparedQuotient pq = quotient(b.action.group, "Q");
  const QuotientResult& q = pq.result;
  REQUIRE(q.quotient.vertex_count() == 3);
  REQUIRE(q.quotient.edge_count() == 2);
  std::vector<std::string> lens;
  for (const Edge& e : q.quotient.edges) lens.push_back(e.length.str());
  std::sort(lens.begin(), lens.end());
  CHECK(lens == std::vector<std::string>{"2", "4"});
  CHECK(q.degree == 8);
  check_quotient_invariants(pq.prepared.group,
                            full_subgroup(pq.prepared.group), q);

  // the four-cycle subgroup keeps the two swapped legs separate
  Subgroup h;
  for (const auto& [label, sub] : b.marked_subgroups)
    if (label == "H") h = sub;
  REQUIRE(h.order() == 4);
  QuotientResult qh = quotient_on_model(pq.prepared.group, h, "QH");
  REQUIRE(qh.quotient.vertex_count() == 4);
  REQUIRE(qh.quotient.edge_count() == 3);
  std::vector<std::string> hl;
  for (const Edge& e : qh.quotient.edges) hl.push_back(e.length.str());
  std::sort(hl.begin(), hl.end());
  CHECK(hl == std::vector<std::string>{"1", "4", "4"});
  CHECK(qh.degree == 4);
  check_quotient_invariants(pq.prepared.group, h, qh);
}

TEST_CASE("the five-legged star folds to legs of lengths three and two",
          "[quotient]") {
  ExampleBundle b = example_star5();
  PreparedQuotient pq = quotient(b.action.group, "Q");
  const QuotientResult& q = pq.result;
  REQUIRE(q.quotient.edge_count() == 2);
  std::vector<std::string> lens;
  for (const Edge& e : q.quotient.edges) lens.push_back(e.length.str());
  std::sort(lens.begin(), lens.end());
  CHECK(lens == std::vector<std::string>{"2", "3"});
  CHECK(q.degree == 6);

  // the five-cycle side action folds everything to one unit leg
  PreparedQuotient pz = quotient(b.side_actions[0].group, "Z");
  REQUIRE(pz.result.quotient.edge_count() == 1);
  CHECK(pz.result.quotient.edges[0].length == Length::finite(Rat(1)));
  CHECK(pz.result.degree == 5);
}

TEST_CASE("infinite legs stay infinite in the quotient", "[quotient]") {
  ExampleBundle b = example_infstar();
  PreparedQuotient pq = quotient(b.action.group, "Q");
  REQUIRE(pq.result.quotient.edge_count() == 1);
  CHECK(pq.result.quotient.edges[0].length.is_infinite());
  CHECK(pq.result.degree == 3);
  check_quotient_invariants(pq.prepared.group,
                            full_subgroup(pq.prepared.group), pq.result);
}

TEST_CASE("a pointwise-fixed leg doubles in length downstairs",
          "[quotient]") {
  ExampleBundle b = example_spider();
  PreparedQuotient pq = quotient(b.action.group, "Q");
  const QuotientResult& q = pq.result;
  REQUIRE(q.quotient.edge_count() == 2);
  int fixed = q.quotient.find_edge("[e3]");
  REQUIRE(fixed >= 0);
  CHECK(q.quotient.edges[fixed].length == Length::finite(Rat(2)));
  int swapped = q.quotient.find_edge("[e1]");
  REQUIRE(swapped >= 0);
  CHECK(q.quotient.edges[swapped].length.is_infinite());
  CHECK(q.degree == 2);
}

TEST_CASE("quotients of folded circles halve correctly", "[quotient]") {
  // the full rotation of the 2-circle: the prepared model is a 4-circle
  // and the quotient is a circle of total length one
  ExampleBundle c2 = example_cycle(2, "rotation");
  PreparedQuotient pq = quotient(c2.action.group, "Q");
  const QuotientResult& q = pq.result;
  Rat total(0);
  for (const Edge& e : q.quotient.edges) total += e.length.value();
  CHECK(total == Rat(1));
  CHECK(q.degree == 2);
  check_quotient_invariants(pq.prepared.group,
                            full_subgroup(pq.prepared.group), q);
}
