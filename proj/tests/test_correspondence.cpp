#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace tropcover;

TEST_CASE("the twelve-circle correspondence closes on every subgroup",
          "[correspondence]") {
  ExampleBundle b = example_cycle(12, "rotation");
  PreparedCovering pc = projection_covering(b.action.group, "Q");
  CorrespondenceReport rep = galois_correspondence(pc, 1);
  CHECK(rep.group_order == 12);
  REQUIRE(rep.entries.size() == 6);
  REQUIRE(rep.pairs.size() == 36);
  CHECK(rep.all_ok);

  std::vector<int> orders;
  for (const CorrespondenceEntry& e : rep.entries) {
    orders.push_back(e.subgroup.order());
    CHECK(e.theta_class == FactorClass::FiniteHarmonic);
    CHECK(e.theta_degree * e.subgroup.order() == 12);
    CHECK(e.degree_ok);
    CHECK(e.intermediate_galois);
    CHECK(e.roundtrip_subgroup);
    CHECK(e.roundtrip_covering);
    CHECK(e.ok);
  }
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<int>{1, 2, 3, 4, 6, 12});

  for (const CorrespondencePair& p : rep.pairs) {
    CHECK(p.consistent);
    // order reversal: containment if and only if backwards factorization
    CHECK(p.contained == p.factors);
  }
}

TEST_CASE("the dihedral correspondence handles non-normal subgroups",
          "[correspondence]") {
  ExampleBundle b = example_cycle(4, "dihedral");
  PreparedCovering pc = projection_covering(b.action.group, "Q");
  CorrespondenceReport rep = galois_correspondence(pc, 2);
  REQUIRE(rep.entries.size() == 10);
  CHECK(rep.pairs.size() == 100);
  CHECK(rep.all_ok);
  std::vector<int> orders;
  for (const CorrespondenceEntry& e : rep.entries)
    orders.push_back(e.subgroup.order());
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<int>{1, 2, 2, 2, 2, 2, 4, 4, 4, 8});
}

TEST_CASE("worker count never changes the report", "[correspondence]") {
  ExampleBundle b = example_cycle(6, "dihedral");
  PreparedCovering pc = projection_covering(b.action.group, "Q");
  CorrespondenceReport one = galois_correspondence(pc, 1);
  CorrespondenceReport four = galois_correspondence(pc, 4);
  std::string r1 = to_jsonl(report_correspondence("Q", one).records);
  std::string r4 = to_jsonl(report_correspondence("Q", four).records);
  CHECK(r1 == r4);
  CHECK(one.all_ok);
  REQUIRE(one.entries.size() == 16);
}

TEST_CASE("non-Galois coverings are refused outright", "[correspondence]") {
  for (const std::string& name : {"theta_sigma3", "star6", "spider"}) {
    ExampleBundle b = make_example(name, {});
    PreparedCovering pc = projection_covering(b.action.group, "Q");
    try {
      galois_correspondence(pc, 1);
      FAIL("expected rejection for " << name);
    } catch (const Error& err) {
      CHECK(err.code() == Errc::NotGaloisCovering);
    }
  }
}

TEST_CASE("pair indices follow the entry order", "[correspondence]") {
  ExampleBundle b = example_cycle(4, "rotation");
  PreparedCovering pc = projection_covering(b.action.group, "Q");
  CorrespondenceReport rep = galois_correspondence(pc, 1);
  const int n = static_cast<int>(rep.entries.size());
  REQUIRE(static_cast<int>(rep.pairs.size()) == n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const CorrespondencePair& p = rep.pairs[i * n + j];
      CHECK(p.left == i);
      CHECK(p.right == j);
      bool subset = std::includes(rep.entries[j].subgroup.elements.begin(),
                                  rep.entries[j].subgroup.elements.end(),
                                  rep.entries[i].subgroup.elements.begin(),
                                  rep.entries[i].subgroup.elements.end());
      CHECK(p.contained == subset);
    }
}
