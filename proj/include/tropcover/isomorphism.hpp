#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "tropcover/morphism.hpp"

namespace tropcover {

/// An isometric isomorphism of models: vertex and edge bijections with
/// per-edge orientation flips. Degree-one everywhere by construction.
struct Isomorphism {
  std::vector<VertexId> vertex_map;
  std::vector<EdgeId> edge_map;
  std::vector<char> edge_flip;
  bool operator==(const Isomorphism&) const = default;
};

inline MorphismRep to_morphism(const Curve& a, const Curve& b,
                               const Isomorphism& iso,
                               const std::string& name = "iso") {
  MorphismRep m;
  m.name = name;
  m.source = a;
  m.target = b;
  m.vertex_map = iso.vertex_map;
  m.edge_map = iso.edge_map;
  m.edge_flip = iso.edge_flip;
  m.edge_degree.assign(a.edge_count(), 1);
  if (a.edge_count() == 0) m.declared_degree = 1;
  return m;
}

namespace detail {

// invariant of a vertex used to cut the search: valence, loops, infinite
// half-edges and the multiset of incident lengths (loops listed twice)
struct VertexKey {
  int valence = 0;
  int loops = 0;
  int inf_halves = 0;
  int at_infinity = 0;  // the vertex is itself a point at infinity
  std::vector<std::pair<bool, Rat>> lengths;  // (is_infinite, finite value)
  auto tie() const {
    return std::tie(valence, loops, inf_halves, at_infinity, lengths);
  }
  bool operator==(const VertexKey& o) const { return tie() == o.tie(); }
  bool operator<(const VertexKey& o) const { return tie() < o.tie(); }
};

inline std::vector<VertexKey> vertex_keys(const Curve& c) {
  std::vector<VertexKey> keys(c.vertex_count());
  for (const Edge& e : c.edges) {
    std::pair<bool, Rat> lk{e.length.is_infinite(),
                            e.length.is_finite() ? e.length.value() : Rat(0)};
    for (VertexId v : {e.a, e.b}) {
      ++keys[v].valence;
      keys[v].lengths.push_back(lk);
      if (e.length.is_infinite()) ++keys[v].inf_halves;
    }
    if (e.is_loop()) ++keys[e.a].loops;
    if (e.inf_end == InfEnd::B) keys[e.b].at_infinity = 1;
  }
  for (auto& k : keys) std::sort(k.lengths.begin(), k.lengths.end());
  return keys;
}

// multiset of edge lengths between an ordered vertex pair (loops when x==y)
inline std::vector<std::pair<bool, Rat>> pair_lengths(const Curve& c,
                                                      VertexId x, VertexId y) {
  std::vector<std::pair<bool, Rat>> out;
  for (const Edge& e : c.edges) {
    bool match = (e.a == x && e.b == y) || (e.a == y && e.b == x);
    if (!match) continue;
    out.emplace_back(e.length.is_infinite(),
                     e.length.is_finite() ? e.length.value() : Rat(0));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct IsoSearch {
  const Curve& a;
  const Curve& b;
  const std::function<bool(const Isomorphism&)>& visit;
  std::vector<VertexKey> keys_a, keys_b;
  std::vector<int> order;          // a-vertices, most constrained first
  std::vector<VertexId> vmap;      // a -> b, -1 unset
  std::vector<char> used_b;
  bool stopped = false;

  IsoSearch(const Curve& a_, const Curve& b_,
            const std::function<bool(const Isomorphism&)>& visit_)
      : a(a_), b(b_), visit(visit_) {}

  bool run() {
    if (a.vertex_count() != b.vertex_count() ||
        a.edge_count() != b.edge_count())
      return false;
    keys_a = vertex_keys(a);
    keys_b = vertex_keys(b);
    {
      auto sa = keys_a;
      auto sb = keys_b;
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      if (!(sa == sb)) return false;
    }
    // most constrained seed (fewest candidates in b, ties by id), then
    // expansion along edges so that every later vertex has a placed
    // neighbour for pair_lengths to prune against
    std::vector<int> cand_count(a.vertex_count(), 0);
    for (int v = 0; v < a.vertex_count(); ++v)
      for (int w = 0; w < b.vertex_count(); ++w)
        if (keys_a[v] == keys_b[w]) ++cand_count[v];
    std::vector<std::vector<int>> adj(a.vertex_count());
    for (const Edge& e : a.edges) {
      if (e.is_loop()) continue;
      adj[e.a].push_back(e.b);
      adj[e.b].push_back(e.a);
    }
    std::vector<char> queued(a.vertex_count(), 0);
    order.clear();
    auto pick = [&](bool need_neighbor) {
      int best = -1;
      for (int v = 0; v < a.vertex_count(); ++v) {
        if (queued[v]) continue;
        if (need_neighbor) {
          bool touches = false;
          for (int u : adj[v]) touches = touches || queued[u];
          if (!touches) continue;
        }
        if (best < 0 || cand_count[v] < cand_count[best]) best = v;
      }
      return best;
    };
    while (static_cast<int>(order.size()) < a.vertex_count()) {
      int v = pick(true);
      if (v < 0) v = pick(false);  // seed (or a new component)
      queued[v] = 1;
      order.push_back(v);
    }
    vmap.assign(a.vertex_count(), -1);
    used_b.assign(b.vertex_count(), 0);
    place(0);
    return stopped;
  }

  void place(std::size_t k) {
    if (stopped) return;
    if (k == order.size()) {
      emit_edge_maps();
      return;
    }
    int v = order[k];
    for (int w = 0; w < b.vertex_count(); ++w) {
      if (used_b[w] || !(keys_a[v] == keys_b[w])) continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        int u = order[j];
        ok = pair_lengths(a, v, u) == pair_lengths(b, w, vmap[u]);
      }
      if (!ok) continue;
      vmap[v] = w;
      used_b[w] = 1;
      place(k + 1);
      used_b[w] = 0;
      vmap[v] = -1;
      if (stopped) return;
    }
  }

  // With vertices fixed, source edges fall into parallel classes; image
  // candidates are the same-length edges between the image endpoints.
  // Enumerate all bijections, loops additionally in both orientations.
  void emit_edge_maps() {
    using Key = std::tuple<VertexId, VertexId, bool, Rat>;
    std::map<Key, std::vector<EdgeId>> cls_a, cls_b;
    for (int e = 0; e < a.edge_count(); ++e) {
      const Edge& ed = a.edges[e];
      VertexId x = vmap[ed.a], y = vmap[ed.b];
      if (x > y) std::swap(x, y);
      cls_a[Key{x, y, ed.length.is_infinite(),
                ed.length.is_finite() ? ed.length.value() : Rat(0)}]
          .push_back(e);
    }
    for (int e = 0; e < b.edge_count(); ++e) {
      const Edge& ed = b.edges[e];
      VertexId x = ed.a, y = ed.b;
      if (x > y) std::swap(x, y);
      cls_b[Key{x, y, ed.length.is_infinite(),
                ed.length.is_finite() ? ed.length.value() : Rat(0)}]
          .push_back(e);
    }
    if (cls_a.size() != cls_b.size()) return;
    std::vector<std::pair<std::vector<EdgeId>, std::vector<EdgeId>>> classes;
    for (auto& [key, ea] : cls_a) {
      auto it = cls_b.find(key);
      if (it == cls_b.end() || it->second.size() != ea.size()) return;
      classes.emplace_back(ea, it->second);
    }
    Isomorphism iso;
    iso.vertex_map = vmap;
    iso.edge_map.assign(a.edge_count(), -1);
    iso.edge_flip.assign(a.edge_count(), 0);
    assign_class(classes, 0, 0, iso);
  }

  void assign_class(
      std::vector<std::pair<std::vector<EdgeId>, std::vector<EdgeId>>>& classes,
      std::size_t ci, std::size_t pos, Isomorphism& iso) {
    if (stopped) return;
    if (ci == classes.size()) {
      if (visit(iso)) stopped = true;
      return;
    }
    auto& [ea, eb] = classes[ci];
    if (pos == ea.size()) {
      assign_class(classes, ci + 1, 0, iso);
      return;
    }
    EdgeId e = ea[pos];
    const Edge& ed = a.edges[e];
    for (EdgeId f : eb) {
      bool taken = false;
      for (std::size_t j = 0; j < pos; ++j) taken |= iso.edge_map[ea[j]] == f;
      if (taken) continue;
      const Edge& fd = b.edges[f];
      iso.edge_map[e] = f;
      if (ed.is_loop()) {
        // loops admit both orientations, but never an infinite one
        for (char flip : {char(0), char(1)}) {
          if (flip && ed.length.is_infinite()) continue;
          iso.edge_flip[e] = flip;
          assign_class(classes, ci, pos + 1, iso);
          if (stopped) return;
        }
      } else {
        bool flip = vmap[ed.a] == fd.b;
        if (ed.length.is_infinite() && flip) continue;  // cannot reverse
        iso.edge_flip[e] = static_cast<char>(flip);
        assign_class(classes, ci, pos + 1, iso);
        if (stopped) return;
      }
      iso.edge_map[e] = -1;
      iso.edge_flip[e] = 0;
    }
  }
};

}  // namespace detail

/// Visits every isometric isomorphism a -> b in a deterministic order;
/// stops early when the visitor returns true. Returns whether it stopped.
inline bool for_each_isomorphism(
    const Curve& a, const Curve& b,
    const std::function<bool(const Isomorphism&)>& visit) {
  detail::IsoSearch s(a, b, visit);
  return s.run();
}

inline std::optional<Isomorphism> find_isomorphism(const Curve& a,
                                                   const Curve& b) {
  std::optional<Isomorphism> found;
  for_each_isomorphism(a, b, [&](const Isomorphism& iso) {
    found = iso;
    return true;
  });
  return found;
}

inline long long count_isomorphisms(const Curve& a, const Curve& b) {
  long long n = 0;
  for_each_isomorphism(a, b, [&](const Isomorphism&) {
    ++n;
    return false;
  });
  return n;
}

/// Degree-one finite harmonic morphisms are exactly the isomorphisms after
/// passing to canonical models. Tries the given models directly first.
struct DegreeOneResult {
  MorphismRep morphism;  // on the given models when direct, else between
                         // the canonical models
  bool direct = false;
  CanonicalModel source_canonical;
  CanonicalModel target_canonical;
};

inline std::optional<DegreeOneResult> find_degree_one_morphism(
    const Curve& a, const Curve& b) {
  if (auto iso = find_isomorphism(a, b)) {
    DegreeOneResult r;
    r.morphism = to_morphism(a, b, *iso, "deg1");
    r.direct = true;
    return r;
  }
  DegreeOneResult r;
  r.source_canonical = canonical_model(a);
  r.target_canonical = canonical_model(b);
  auto iso = find_isomorphism(r.source_canonical.model,
                              r.target_canonical.model);
  if (!iso) return std::nullopt;
  r.morphism =
      to_morphism(r.source_canonical.model, r.target_canonical.model, *iso,
                  "deg1");
  r.direct = false;
  return r;
}

}  // namespace tropcover
