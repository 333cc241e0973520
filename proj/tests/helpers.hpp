#pragma once

// Shared test fixtures and independent oracles. The oracles deliberately
// use brute force over a different search space than the library, so the
// two implementations cross-check each other.

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

#include "tropcover/tropcover.hpp"

namespace testutil {

using namespace tropcover;

// -------------------------------------------------------------------
// brute-force isometry count
//
// Enumerates every vertex bijection, then multiplies the number of ways
// to match parallel edges bucket by bucket. Finite parallel edges of
// equal length can be matched in any order; a loop matched to a loop
// additionally carries two orientations; infinite edges must match
// infinite end to infinite end, which pins the orientation.

inline long long naive_isomorphism_count(const Curve& a, const Curve& b) {
  if (a.vertex_count() != b.vertex_count() ||
      a.edge_count() != b.edge_count())
    return 0;
  const int nv = a.vertex_count();
  std::vector<int> perm(nv);
  std::iota(perm.begin(), perm.end(), 0);
  long long total = 0;

  using Key = std::tuple<int, int, bool, std::string>;  // va, vb, inf, len
  const auto bucket_of = [](const Curve& c, int e,
                            const std::vector<int>* via) {
    const Edge& ed = c.edges[e];
    int va = via ? (*via)[ed.a] : ed.a;
    int vb = via ? (*via)[ed.b] : ed.b;
    bool inf = ed.length.is_infinite();
    if (!inf && va > vb) std::swap(va, vb);
    // infinite edges keep orientation: the infinite end is always vb
    return Key{va, vb, inf, ed.length.str()};
  };

  do {
    std::map<Key, long long> image, target;
    std::map<Key, long long> image_loops;
    for (int e = 0; e < a.edge_count(); ++e) {
      Key k = bucket_of(a, e, &perm);
      image[k] += 1;
      if (std::get<0>(k) == std::get<1>(k) && !std::get<2>(k))
        image_loops[k] += 1;
    }
    for (int e = 0; e < b.edge_count(); ++e) target[bucket_of(b, e, nullptr)] += 1;
    if (image != target) continue;
    long long ways = 1;
    for (const auto& [k, cnt] : image) {
      for (long long i = 2; i <= cnt; ++i) ways *= i;  // cnt!
    }
    for (const auto& [k, cnt] : image_loops)
      for (long long i = 0; i < cnt; ++i) ways *= 2;  // orientations
    total += ways;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// -------------------------------------------------------------------
// brute-force subgroup count: subsets of the multiplication table

inline int naive_subgroup_count(const ActionGroup& g) {
  const int n = g.order();
  ensure(n <= 16, "naive subgroup count is exponential");
  int count = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (!(mask & 1u)) continue;  // must contain the identity
    bool closed = true;
    for (int i = 0; i < n && closed; ++i) {
      if (!(mask >> i & 1u)) continue;
      if (!(mask >> g.inv[i] & 1u)) closed = false;
      for (int j = 0; j < n && closed; ++j)
        if ((mask >> j & 1u) && !(mask >> g.mul[i][j] & 1u)) closed = false;
    }
    if (closed) ++count;
  }
  return count;
}

// -------------------------------------------------------------------
// small builders

inline Curve interval(const std::string& name, const Rat& len) {
  CurveBuilder b(name);
  b.vertex("p").vertex("q");
  b.edge("e", "p", "q", Length::finite(len));
  return b.build();
}

// two circles of total lengths 2 and 4 joined at one vertex, presented
// without loop edges
inline Curve figure_eight() {
  CurveBuilder b("eight");
  b.vertex("c").vertex("p").vertex("q");
  b.edge("a1", "c", "p", Length::finite(Rat(1)));
  b.edge("a2", "c", "p", Length::finite(Rat(1)));
  b.edge("b1", "c", "q", Length::finite(Rat(2)));
  b.edge("b2", "c", "q", Length::finite(Rat(2)));
  return b.build();
}

}  // namespace testutil
