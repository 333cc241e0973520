#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "tropcover/curve.hpp"

namespace tropcover {

/// One edge of a finer model traversed in a given direction. forward means
/// from endpoint a to endpoint b.
struct RefinementStep {
  EdgeId edge = -1;
  bool forward = true;
  bool operator==(const RefinementStep&) const = default;
};

/// How a coarse model sits inside a finer one: each coarse vertex becomes a
/// fine vertex and each coarse edge becomes a directed path of fine edges
/// of the same total length.
struct RefinementMap {
  std::vector<VertexId> vertex_image;
  std::vector<std::vector<RefinementStep>> edge_paths;
};

inline RefinementMap identity_refinement_map(const Curve& c) {
  RefinementMap m;
  m.vertex_image.resize(c.vertex_count());
  for (int v = 0; v < c.vertex_count(); ++v) m.vertex_image[v] = v;
  m.edge_paths.resize(c.edge_count());
  for (int e = 0; e < c.edge_count(); ++e)
    m.edge_paths[e] = {RefinementStep{e, true}};
  return m;
}

/// Composite of coarse->mid and mid->fine.
inline RefinementMap compose_refinement_maps(const RefinementMap& ab,
                                             const RefinementMap& bc) {
  RefinementMap m;
  m.vertex_image.reserve(ab.vertex_image.size());
  for (VertexId v : ab.vertex_image)
    m.vertex_image.push_back(bc.vertex_image[v]);
  m.edge_paths.resize(ab.edge_paths.size());
  for (std::size_t e = 0; e < ab.edge_paths.size(); ++e) {
    for (const RefinementStep& s : ab.edge_paths[e]) {
      const auto& path = bc.edge_paths[s.edge];
      if (s.forward) {
        m.edge_paths[e].insert(m.edge_paths[e].end(), path.begin(), path.end());
      } else {
        for (auto it = path.rbegin(); it != path.rend(); ++it)
          m.edge_paths[e].push_back(RefinementStep{it->edge, !it->forward});
      }
    }
  }
  return m;
}

/// Where a coarse point lands in the fine model. Needs both curves to
/// resolve offsets along multi-step paths.
inline Point map_point(const Curve& coarse, const Curve& fine,
                       const RefinementMap& map, const Point& p) {
  if (p.is_vertex()) return Point::at_vertex(map.vertex_image[p.id]);
  require_point(coarse, p);
  Rat remaining = p.offset;
  const auto& path = map.edge_paths[p.id];
  for (std::size_t k = 0; k < path.size(); ++k) {
    const RefinementStep& s = path[k];
    const Edge& fe = fine.edges[s.edge];
    if (fe.length.is_infinite()) {
      // infinite steps are final and forward; everything left lands here
      return Point::interior(s.edge, remaining);
    }
    const Rat len = fe.length.value();
    if (remaining < len)
      return Point::interior(s.edge,
                             s.forward ? remaining : len - remaining);
    remaining -= len;
    if (remaining == Rat(0)) {
      // boundary between steps: a fine vertex
      VertexId end = s.forward ? fe.b : fe.a;
      return Point::at_vertex(end);
    }
  }
  throw Error(Errc::OffsetOutOfRange, "point beyond edge path");
}

/// Interior cut positions per edge, the raw material of a refinement.
class CutSet {
 public:
  explicit CutSet(int edge_count) : cuts_(edge_count) {}

  void add(EdgeId e, const Rat& offset) { cuts_[e].push_back(offset); }

  bool contains(EdgeId e, const Rat& offset) const {
    const auto& v = cuts_[e];
    return std::binary_search(v.begin(), v.end(), offset);
  }

  /// Sorts and deduplicates. Call after a batch of add()s.
  void normalize() {
    for (auto& v : cuts_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& v : cuts_) n += v.size();
    return n;
  }

  bool operator==(const CutSet&) const = default;

  const std::vector<Rat>& at(EdgeId e) const { return cuts_[e]; }
  int edge_count() const { return static_cast<int>(cuts_.size()); }

 private:
  std::vector<std::vector<Rat>> cuts_;
};

/// A model together with a finer model obtained by cutting edges at interior
/// points, plus the bookkeeping to move between the two.
struct Refinement {
  Curve input;
  Curve fine;
  RefinementMap map;  // input -> fine
  CutSet cuts{0};     // normalized interior offsets per input edge
  std::vector<std::vector<VertexId>> cut_vertices;  // parallel to cuts

  /// Fine-model location of the point at offset t on input edge e; lands on
  /// a cut vertex when t is a cut.
  Point locate(EdgeId e, const Rat& t) const {
    const Edge& ie = input.edges[e];
    if (t == Rat(0)) return Point::at_vertex(map.vertex_image[ie.a]);
    if (ie.length.is_finite() && t == ie.length.value())
      return Point::at_vertex(map.vertex_image[ie.b]);
    return map_point(input, fine, map, Point::interior(e, t));
  }

  /// Fine edge carrying the k-th segment of input edge e (segments are
  /// numbered from endpoint a).
  EdgeId segment(EdgeId e, int k) const { return map.edge_paths[e][k].edge; }
};

namespace detail {

inline std::string fresh_name(std::set<std::string>& taken, std::string base) {
  while (!taken.insert(base).second) base += "'";
  return base;
}

}  // namespace detail

/// Cuts every edge at the given interior offsets. Offsets must be strictly
/// interior (any positive rational on an infinite edge).
inline Refinement refine(const Curve& input, CutSet cuts) {
  cuts.normalize();
  if (cuts.edge_count() != input.edge_count())
    throw Error(Errc::BadIndex, "cut set sized for a different curve");
  Refinement r;
  r.input = input;
  r.cuts = cuts;
  r.fine.name = input.name;
  r.fine.vertex_names = input.vertex_names;
  std::set<std::string> vnames(input.vertex_names.begin(),
                               input.vertex_names.end());
  std::set<std::string> enames;

  r.map.vertex_image.resize(input.vertex_count());
  for (int v = 0; v < input.vertex_count(); ++v) r.map.vertex_image[v] = v;
  r.map.edge_paths.resize(input.edge_count());
  r.cut_vertices.resize(input.edge_count());

  for (int e = 0; e < input.edge_count(); ++e) {
    const Edge& ie = input.edges[e];
    const auto& offs = cuts.at(e);
    for (const Rat& t : offs)
      if (t <= Rat(0) || (ie.length.is_finite() && t >= ie.length.value()))
        throw Error(Errc::OffsetOutOfRange,
                    "cut at " + format_rational(t) + " not interior to " +
                        ie.name);
    if (offs.empty()) {
      Edge fe = ie;
      fe.name = detail::fresh_name(enames, ie.name);
      r.fine.edges.push_back(fe);
      r.map.edge_paths[e] = {
          RefinementStep{static_cast<int>(r.fine.edges.size()) - 1, true}};
      continue;
    }
    // chain of cut vertices along the edge
    VertexId prev = ie.a;
    Rat prev_off(0);
    for (std::size_t k = 0; k <= offs.size(); ++k) {
      const bool last = k == offs.size();
      VertexId next;
      if (last) {
        next = ie.b;
      } else {
        std::string vn = detail::fresh_name(
            vnames, ie.name + "@" + format_rational(offs[k]));
        r.fine.vertex_names.push_back(vn);
        next = r.fine.vertex_count() - 1;
        r.cut_vertices[e].push_back(next);
      }
      Edge fe;
      fe.name = detail::fresh_name(enames,
                                   ie.name + "." + std::to_string(k + 1));
      fe.a = prev;
      fe.b = next;
      if (last && ie.length.is_infinite()) {
        fe.length = Length::infinity();
        fe.inf_end = InfEnd::B;
      } else {
        fe.length = Length::finite((last ? ie.length.value() : offs[k]) -
                                   prev_off);
      }
      r.fine.edges.push_back(fe);
      r.map.edge_paths[e].push_back(
          RefinementStep{static_cast<int>(r.fine.edges.size()) - 1, true});
      if (!last) prev_off = offs[k];
      prev = next;
    }
  }
  validate_model(r.fine);
  return r;
}

inline Refinement identity_refinement(const Curve& c) {
  return refine(c, CutSet(c.edge_count()));
}

/// Splits one edge at one interior point; the classical elementary
/// subdivision. new_vertex is the created vertex in the refined model.
struct Subdivision {
  Refinement refinement;
  VertexId new_vertex;
};

inline Subdivision subdivide(const Curve& c, EdgeId e, const Rat& offset) {
  if (e < 0 || e >= c.edge_count())
    throw Error(Errc::BadIndex, "edge id out of range");
  CutSet cuts(c.edge_count());
  cuts.add(e, offset);
  Refinement r = refine(c, cuts);
  return Subdivision{r, r.cut_vertices[e][0]};
}

/// Cuts every loop at its midpoint, yielding a loopless model of the same
/// curve. Loops always have finite length, so midpoints exist.
inline Refinement loopless_refinement(const Curve& c) {
  CutSet cuts(c.edge_count());
  for (int e = 0; e < c.edge_count(); ++e)
    if (c.edges[e].is_loop())
      cuts.add(e, c.edges[e].length.value() / Rat(2));
  return refine(c, cuts);
}

/// The coarsest model of the same curve: suppress every valence-2 vertex
/// that is not a point at infinity. A circle has no such model with a
/// vertex removed entirely, so the smallest-id vertex is kept as a marker
/// and the result is a single loop.
struct CanonicalModel {
  Curve model;
  RefinementMap embed;  // model (coarse) -> input (fine)
};

inline CanonicalModel canonical_model(const Curve& input) {
  std::vector<int> val = validate_model(input);
  const int nv = input.vertex_count();
  std::vector<char> kept(nv, 0);
  bool any_kept = false;
  for (int v = 0; v < nv; ++v) {
    kept[v] = val[v] != 2 || input.is_infinite_end(v);
    any_kept |= kept[v] != 0;
  }
  if (!any_kept && nv > 0) kept[0] = 1;  // circle marker

  CanonicalModel cm;
  std::vector<VertexId> input_to_model(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (kept[v]) {
      input_to_model[v] = cm.model.vertex_count();
      cm.model.vertex_names.push_back(input.vertex_names[v]);
      cm.embed.vertex_image.push_back(v);
    }
  cm.model.name = input.name;

  // Incidence slots in deterministic order: (edge id, a-end before b-end).
  struct Slot {
    EdgeId edge;
    bool from_a;
  };
  std::vector<std::vector<Slot>> slots(nv);
  for (int e = 0; e < input.edge_count(); ++e) {
    slots[input.edges[e].a].push_back(Slot{e, true});
    slots[input.edges[e].b].push_back(Slot{e, false});
  }

  std::vector<char> used(input.edge_count(), 0);
  for (int v = 0; v < nv; ++v) {
    if (!kept[v]) continue;
    for (const Slot& start : slots[v]) {
      if (used[start.edge]) continue;
      std::vector<RefinementStep> steps;
      EdgeId cur = start.edge;
      bool fwd = start.from_a;
      VertexId at = v;
      for (;;) {
        used[cur] = 1;
        steps.push_back(RefinementStep{cur, fwd});
        VertexId w = fwd ? input.edges[cur].b : input.edges[cur].a;
        if (kept[w]) {
          at = w;
          break;
        }
        // valence-2 interior vertex: continue through the other slot
        const Slot* next = nullptr;
        for (const Slot& s : slots[w]) {
          bool arrived = s.edge == cur && s.from_a == !fwd;
          if (!arrived) next = &s;
        }
        ensure(next != nullptr, "canonical walk lost at valence-2 vertex");
        cur = next->edge;
        fwd = next->from_a;
      }
      Length total;
      for (const RefinementStep& s : steps) total += input.edges[s.edge].length;
      VertexId ca = v, cb = at;
      if (total.is_infinite()) {
        // the infinite input edge is the first or last step; orient the
        // chain so the infinite end is at b
        if (input.edges[steps.front().edge].length.is_infinite() &&
            !steps.front().forward) {
          std::reverse(steps.begin(), steps.end());
          for (RefinementStep& s : steps) s.forward = !s.forward;
          std::swap(ca, cb);
        }
      }
      Edge ce;
      ce.name = input.edges[steps.front().edge].name;
      ce.a = input_to_model[ca];
      ce.b = input_to_model[cb];
      ce.length = total;
      if (total.is_infinite()) ce.inf_end = InfEnd::B;
      cm.model.edges.push_back(ce);
      cm.embed.edge_paths.push_back(std::move(steps));
    }
  }
  validate_model(cm.model);
  return cm;
}

}  // namespace tropcover
