#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace tropcover;
using testutil::naive_subgroup_count;

TEST_CASE("group generation fills consistent tables", "[action]") {
  ActionGroup g = example_theta().action.group;
  REQUIRE(g.order() == 6);
  for (int i = 0; i < g.order(); ++i) {
    CHECK(g.mul[i][g.inv[i]] == 0);
    CHECK(g.mul[g.inv[i]][i] == 0);
    CHECK(g.mul[0][i] == i);
    CHECK(g.mul[i][0] == i);
  }
  // associativity spot check via the table
  for (int i = 0; i < g.order(); ++i)
    for (int j = 0; j < g.order(); ++j)
      for (int k = 0; k < g.order(); ++k)
        REQUIRE(g.mul[g.mul[i][j]][k] == g.mul[i][g.mul[j][k]]);
}

TEST_CASE("group generation refuses to explode", "[action]") {
  Curve st = detail::star_curve(5, "star5");
  std::vector<Automorphism> gens = {
      detail::star_auto(st, 5, {{1, 2}}),
      detail::star_auto(st, 5, {{1, 2, 3, 4, 5}})};
  try {
    generate_group(st, gens);  // the full symmetric group has order 120
    FAIL("expected rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::GroupTooLarge);
  }
}

TEST_CASE("subgroup enumeration agrees with subset brute force", "[action]") {
  struct Case {
    ActionGroup g;
    int expect;
  };
  std::vector<Case> cases;
  cases.push_back({example_theta().action.group, 6});
  cases.push_back({example_cycle(12, "rotation").action.group, 6});
  cases.push_back({example_cycle(4, "dihedral").action.group, 10});
  cases.push_back({example_cycle(6, "dihedral").action.group, 16});
  for (const Case& c : cases) {
    std::vector<Subgroup> subs = all_subgroups(c.g);
    CHECK(static_cast<int>(subs.size()) == c.expect);
    CHECK(naive_subgroup_count(c.g) == c.expect);
    for (const Subgroup& s : subs) {
      CHECK(is_subgroup(c.g, s));
      CHECK(c.g.order() % s.order() == 0);  // Lagrange
    }
  }
}

TEST_CASE("normality, cosets, and quotient groups", "[action]") {
  ExampleBundle th = example_theta();
  const ActionGroup& s3 = th.action.group;
  Subgroup a3 = th.marked_subgroups[0].second;
  REQUIRE(a3.order() == 3);
  CHECK(is_normal(s3, a3));

  std::vector<std::vector<int>> cs = cosets(s3, a3);
  REQUIRE(cs.size() == 2);
  CHECK(cs[0][0] == 0);  // identity coset first
  SmallGroup q = quotient_group(s3, a3);
  CHECK(q.n == 2);

  // a single reflection in a dihedral group is not normal
  ExampleBundle d4 = example_cycle(4, "dihedral");
  Subgroup refl;
  for (const auto& [label, sub] : d4.marked_subgroups)
    if (label == "S") refl = sub;
  REQUIRE(refl.order() == 2);
  CHECK_FALSE(is_normal(d4.action.group, refl));
  try {
    quotient_group(d4.action.group, refl);
    FAIL("expected rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::NotNormal);
  }
}

TEST_CASE("group isomorphism distinguishes the two groups of order four",
          "[action]") {
  // Z12 / Z3 is cyclic of order four
  ActionGroup z12 = example_cycle(12, "rotation").action.group;
  Subgroup z3;
  for (const Subgroup& s : all_subgroups(z12))
    if (s.order() == 3) z3 = s;
  REQUIRE(z3.order() == 3);
  SmallGroup c4 = quotient_group(z12, z3);

  // D4 / center is the Klein four-group
  ActionGroup d4 = example_cycle(4, "dihedral").action.group;
  Subgroup center;
  for (const Subgroup& s : all_subgroups(d4))
    if (s.order() == 2 && is_normal(d4, s)) center = s;
  REQUIRE(center.order() == 2);
  SmallGroup v4 = quotient_group(d4, center);

  CHECK(c4.n == 4);
  CHECK(v4.n == 4);
  CHECK_FALSE(group_isomorphic(c4, v4));
  CHECK(group_isomorphic(c4, table_of(example_cycle(4, "rotation").action.group,
                                      full_subgroup(example_cycle(4, "rotation")
                                                        .action.group))));
}

TEST_CASE("orbit sizes multiply with stabilizer orders", "[action]") {
  for (const std::string& name : {"theta_sigma3", "star6", "star5"}) {
    ExampleBundle b = make_example(name, {});
    const ActionGroup& g = b.action.group;
    Subgroup all = full_subgroup(g);
    for (int v = 0; v < g.curve.vertex_count(); ++v)
      CHECK(static_cast<int>(vertex_orbit(g, all, v).size()) *
                vertex_stabilizer(g, all, v).order() ==
            g.order());
  }
}

TEST_CASE("element orders and labels", "[action]") {
  ActionGroup z12 = example_cycle(12, "rotation").action.group;
  int r = z12.index_of(detail::cycle_rotation(z12.curve, 12, 1));
  REQUIRE(r >= 0);
  SmallGroup table = table_of(z12, full_subgroup(z12));
  CHECK(element_order(table, r) == 12);
  CHECK(element_order(table, 0) == 1);
  CHECK(element_label(z12, 0) == "id");
  CHECK(element_label(z12, r).find("e0") != std::string::npos);
}

TEST_CASE("preparation refines flipped edges and loop folds", "[action]") {
  // the reflection of a triangle flips one edge onto itself; preparation
  // cuts every edge at its midpoint
  ExampleBundle d3 = example_cycle(3, "dihedral");
  PreparedAction p = prepare_action(d3.action.group);
  CHECK(p.model().edge_count() == 6);
  CHECK(p.group.equivariant());
  CHECK(p.group.order() == 6);

  // the rotation of the 2-circle maps each edge onto the other but puts
  // both endpoints of every edge into one orbit, forcing cuts
  ExampleBundle c2 = example_cycle(2, "rotation");
  PreparedAction p2 = prepare_action(c2.action.group);
  CHECK(p2.model().edge_count() == 4);
  Subgroup all = full_subgroup(p2.group);
  for (const Edge& e : p2.model().edges) {
    CHECK_FALSE(e.is_loop());
    CHECK_FALSE(vertex_orbit(p2.group, all, e.a) ==
                vertex_orbit(p2.group, all, e.b));
  }

  // an action that already satisfies both conditions is left alone
  PreparedAction p3 = prepare_action(example_theta().action.group);
  CHECK(p3.model() == example_theta().curve());
}

TEST_CASE("stabilizers demand an equivariant model", "[action]") {
  // a triangle reflection flips an edge onto itself, so the raw model is
  // not equivariant and setwise edge stabilizers are refused
  ExampleBundle d3 = example_cycle(3, "dihedral");
  REQUIRE_FALSE(d3.action.group.equivariant());
  Subgroup all = full_subgroup(d3.action.group);
  try {
    edge_stabilizer(d3.action.group, all, 0);
    FAIL("expected rejection");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::RequiresEquivariantModel);
  }
}
