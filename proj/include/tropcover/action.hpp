#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tropcover/align.hpp"
#include "tropcover/curve.hpp"
#include "tropcover/refine.hpp"

namespace tropcover {

/// An isometric automorphism of a model, stored relative to that model.
struct Automorphism {
  std::vector<VertexId> vmap;
  std::vector<EdgeId> emap;
  std::vector<char> eflip;
  bool operator==(const Automorphism&) const = default;
  bool operator<(const Automorphism& o) const {
    if (vmap != o.vmap) return vmap < o.vmap;
    if (emap != o.emap) return emap < o.emap;
    return eflip < o.eflip;
  }
};

inline void validate_automorphism(const Curve& c, const Automorphism& g) {
  const int nv = c.vertex_count(), ne = c.edge_count();
  if (static_cast<int>(g.vmap.size()) != nv ||
      static_cast<int>(g.emap.size()) != ne ||
      static_cast<int>(g.eflip.size()) != ne)
    throw Error(Errc::NotBijective, "automorphism tables sized wrongly");
  std::vector<char> seen(nv, 0);
  for (VertexId w : g.vmap) {
    if (w < 0 || w >= nv || seen[w])
      throw Error(Errc::NotBijective, "vertex map is not a permutation");
    seen[w] = 1;
  }
  std::vector<char> eseen(ne, 0);
  for (EdgeId f : g.emap) {
    if (f < 0 || f >= ne || eseen[f])
      throw Error(Errc::NotBijective, "edge map is not a permutation");
    eseen[f] = 1;
  }
  for (int e = 0; e < ne; ++e) {
    const Edge& src = c.edges[e];
    const Edge& dst = c.edges[g.emap[e]];
    if (!(src.length == dst.length))
      throw Error(Errc::LengthNotPreserved,
                  "edge " + src.name + " maps to a different length");
    if (src.length.is_infinite() && g.eflip[e])
      throw Error(Errc::InfinityNotPreserved,
                  "infinite edge " + src.name + " cannot reverse orientation");
    VertexId ia = g.eflip[e] ? dst.b : dst.a;
    VertexId ib = g.eflip[e] ? dst.a : dst.b;
    if (g.vmap[src.a] != ia || g.vmap[src.b] != ib)
      throw Error(Errc::EndpointMismatch,
                  "edge " + src.name + " endpoints disagree with vertex map");
  }
}

inline Automorphism identity_automorphism(const Curve& c) {
  Automorphism g;
  g.vmap.resize(c.vertex_count());
  std::iota(g.vmap.begin(), g.vmap.end(), 0);
  g.emap.resize(c.edge_count());
  std::iota(g.emap.begin(), g.emap.end(), 0);
  g.eflip.assign(c.edge_count(), 0);
  return g;
}

/// g o h (apply h first).
inline Automorphism compose(const Automorphism& g, const Automorphism& h) {
  Automorphism r;
  r.vmap.reserve(h.vmap.size());
  for (VertexId v : h.vmap) r.vmap.push_back(g.vmap[v]);
  const int ne = static_cast<int>(h.emap.size());
  r.emap.resize(ne);
  r.eflip.resize(ne);
  for (int e = 0; e < ne; ++e) {
    r.emap[e] = g.emap[h.emap[e]];
    r.eflip[e] =
        static_cast<char>((h.eflip[e] != 0) != (g.eflip[h.emap[e]] != 0));
  }
  return r;
}

inline Automorphism inverse(const Automorphism& g) {
  Automorphism r;
  r.vmap.assign(g.vmap.size(), -1);
  for (int v = 0; v < static_cast<int>(g.vmap.size()); ++v)
    r.vmap[g.vmap[v]] = v;
  r.emap.assign(g.emap.size(), -1);
  r.eflip.assign(g.emap.size(), 0);
  for (int e = 0; e < static_cast<int>(g.emap.size()); ++e) {
    r.emap[g.emap[e]] = e;
    r.eflip[g.emap[e]] = g.eflip[e];
  }
  return r;
}

inline MorphismRep as_morphism(const Curve& c, const Automorphism& g,
                               const std::string& name = "aut") {
  MorphismRep m;
  m.name = name;
  m.source = c;
  m.target = c;
  m.vertex_map = g.vmap;
  m.edge_map = g.emap;
  m.edge_flip = g.eflip;
  m.edge_degree.assign(c.edge_count(), 1);
  if (c.edge_count() == 0) m.declared_degree = 1;
  return m;
}

inline Point apply(const Curve& c, const Automorphism& g, const Point& p) {
  if (p.is_vertex()) return Point::at_vertex(g.vmap[p.id]);
  require_point(c, p);
  Rat s = p.offset;
  if (g.eflip[p.id]) s = c.edges[p.id].length.value() - s;
  return Point::interior(g.emap[p.id], s);
}

/// A finite group acting isometrically on a fixed model, with full
/// multiplication tables. elements[0] is the identity.
struct ActionGroup {
  Curve curve;
  std::vector<Automorphism> elements;
  std::vector<std::vector<int>> mul;  // mul[i][j] = index of e_i o e_j
  std::vector<int> inv;

  int order() const { return static_cast<int>(elements.size()); }

  int index_of(const Automorphism& g) const {
    for (int i = 0; i < order(); ++i)
      if (elements[i] == g) return i;
    return -1;
  }

  /// No element maps an edge to itself with reversed orientation; this is
  /// the model condition making edge stabilizers act trivially on edges.
  bool equivariant() const {
    for (const Automorphism& g : elements)
      for (int e = 0; e < curve.edge_count(); ++e)
        if (g.emap[e] == e && g.eflip[e]) return false;
    return true;
  }
};

namespace detail {

inline void fill_tables(ActionGroup& g) {
  const int n = g.order();
  g.mul.assign(n, std::vector<int>(n, -1));
  g.inv.assign(n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = g.index_of(compose(g.elements[i], g.elements[j]));
      if (k < 0)
        throw Error(Errc::NotClosedUnderComposition,
                    "element set is not closed under composition");
      g.mul[i][j] = k;
      if (k == 0) g.inv[i] = j;
    }
  for (int i = 0; i < n; ++i)
    ensure(g.inv[i] >= 0, "group element without inverse");
}

}  // namespace detail

/// Closure of the generators under composition, capped to keep runaway
/// generator sets diagnosable.
inline ActionGroup generate_group(const Curve& c,
                                  const std::vector<Automorphism>& gens,
                                  int cap = 64) {
  validate_model(c);
  for (const Automorphism& g : gens) validate_automorphism(c, g);
  ActionGroup grp;
  grp.curve = c;
  grp.elements.push_back(identity_automorphism(c));
  std::set<Automorphism> seen(grp.elements.begin(), grp.elements.end());
  std::size_t next = 0;
  while (next < grp.elements.size()) {
    Automorphism base = grp.elements[next++];
    for (const Automorphism& g : gens) {
      Automorphism prod = compose(g, base);
      if (seen.insert(prod).second) {
        grp.elements.push_back(prod);
        if (static_cast<int>(grp.elements.size()) > cap)
          throw Error(Errc::GroupTooLarge,
                      "generated group exceeds " + std::to_string(cap) +
                          " elements");
      }
    }
  }
  detail::fill_tables(grp);
  return grp;
}

/// Group on the same curve from an explicit closed element list (index 0
/// must act as the identity after reordering; the identity is moved up).
inline ActionGroup group_from_elements(const Curve& c,
                                       std::vector<Automorphism> elems) {
  Automorphism id = identity_automorphism(c);
  auto it = std::find(elems.begin(), elems.end(), id);
  if (it == elems.end())
    throw Error(Errc::NotClosedUnderComposition, "missing identity");
  std::iter_swap(elems.begin(), it);
  ActionGroup grp;
  grp.curve = c;
  grp.elements = std::move(elems);
  for (const Automorphism& g : grp.elements) validate_automorphism(c, g);
  detail::fill_tables(grp);
  return grp;
}

// ---------------------------------------------------------------------
// orbits, stabilizers, subgroups

/// Subset of element indices of some ActionGroup, sorted, containing 0.
struct Subgroup {
  std::vector<int> elements;
  int order() const { return static_cast<int>(elements.size()); }
  bool contains(int i) const {
    return std::binary_search(elements.begin(), elements.end(), i);
  }
  bool operator==(const Subgroup&) const = default;
  bool operator<(const Subgroup& o) const {
    if (elements.size() != o.elements.size())
      return elements.size() < o.elements.size();
    return elements < o.elements;
  }
};

inline Subgroup full_subgroup(const ActionGroup& g) {
  Subgroup s;
  s.elements.resize(g.order());
  std::iota(s.elements.begin(), s.elements.end(), 0);
  return s;
}

inline Subgroup trivial_subgroup() { return Subgroup{{0}}; }

inline bool is_subgroup(const ActionGroup& g, const Subgroup& s) {
  if (s.elements.empty() || !s.contains(0)) return false;
  for (int i : s.elements)
    for (int j : s.elements)
      if (!s.contains(g.mul[i][j])) return false;
  return true;
}

inline void require_subgroup(const ActionGroup& g, const Subgroup& s) {
  if (!is_subgroup(g, s))
    throw Error(Errc::NotASubgroup, "element set is not a subgroup");
}

inline Subgroup closure_subgroup(const ActionGroup& g,
                                 const std::vector<int>& seed) {
  std::set<int> out{0};
  std::vector<int> work(out.begin(), out.end());
  for (int s : seed)
    if (out.insert(s).second) work.push_back(s);
  std::size_t next = 0;
  while (next < work.size()) {
    int x = work[next++];
    for (int y : std::vector<int>(out.begin(), out.end())) {
      for (int p : {g.mul[x][y], g.mul[y][x]}) {
        if (out.insert(p).second) work.push_back(p);
      }
    }
  }
  Subgroup s;
  s.elements.assign(out.begin(), out.end());
  return s;
}

/// All subgroups, ordered by (order, elementwise). Closure-extension
/// search; fine for the small groups that act on our models.
inline std::vector<Subgroup> all_subgroups(const ActionGroup& g) {
  std::set<Subgroup> found;
  found.insert(trivial_subgroup());
  std::vector<Subgroup> work{trivial_subgroup()};
  while (!work.empty()) {
    Subgroup s = work.back();
    work.pop_back();
    for (int x = 1; x < g.order(); ++x) {
      if (s.contains(x)) continue;
      std::vector<int> seed = s.elements;
      seed.push_back(x);
      Subgroup t = closure_subgroup(g, seed);
      if (found.insert(t).second) work.push_back(t);
    }
  }
  return std::vector<Subgroup>(found.begin(), found.end());
}

inline bool is_normal(const ActionGroup& g, const Subgroup& s) {
  for (int x = 0; x < g.order(); ++x)
    for (int h : s.elements)
      if (!s.contains(g.mul[g.mul[x][h]][g.inv[x]])) return false;
  return true;
}

inline std::vector<int> vertex_orbit(const ActionGroup& g, const Subgroup& s,
                                     VertexId v) {
  std::set<int> orbit;
  for (int i : s.elements) orbit.insert(g.elements[i].vmap[v]);
  return std::vector<int>(orbit.begin(), orbit.end());
}

inline std::vector<int> edge_orbit(const ActionGroup& g, const Subgroup& s,
                                   EdgeId e) {
  std::set<int> orbit;
  for (int i : s.elements) orbit.insert(g.elements[i].emap[e]);
  return std::vector<int>(orbit.begin(), orbit.end());
}

inline std::vector<Point> point_orbit(const ActionGroup& g, const Subgroup& s,
                                      const Point& p) {
  std::set<Point> orbit;
  for (int i : s.elements) orbit.insert(apply(g.curve, g.elements[i], p));
  return std::vector<Point>(orbit.begin(), orbit.end());
}

inline Subgroup vertex_stabilizer(const ActionGroup& g, const Subgroup& s,
                                  VertexId v) {
  Subgroup st;
  for (int i : s.elements)
    if (g.elements[i].vmap[v] == v) st.elements.push_back(i);
  return st;
}

/// Setwise edge stabilizer. Demands an equivariant model, where setwise
/// and pointwise stabilizers coincide; on other models the notion is
/// ambiguous and the call is refused.
inline Subgroup edge_stabilizer(const ActionGroup& g, const Subgroup& s,
                                EdgeId e) {
  if (!g.equivariant())
    throw Error(Errc::RequiresEquivariantModel,
                "edge stabilizers need an equivariantly refined model");
  Subgroup st;
  for (int i : s.elements)
    if (g.elements[i].emap[e] == e) st.elements.push_back(i);
  return st;
}

inline Subgroup point_stabilizer(const ActionGroup& g, const Subgroup& s,
                                 const Point& p) {
  Subgroup st;
  for (int i : s.elements)
    if (apply(g.curve, g.elements[i], p) == p) st.elements.push_back(i);
  return st;
}

/// Orbit partition with smallest-id representatives, deterministic order.
inline std::vector<std::vector<int>> vertex_orbits(const ActionGroup& g,
                                                   const Subgroup& s) {
  std::vector<std::vector<int>> out;
  std::vector<char> done(g.curve.vertex_count(), 0);
  for (int v = 0; v < g.curve.vertex_count(); ++v) {
    if (done[v]) continue;
    auto orb = vertex_orbit(g, s, v);
    for (int w : orb) done[w] = 1;
    out.push_back(orb);
  }
  return out;
}

inline std::vector<std::vector<int>> edge_orbits(const ActionGroup& g,
                                                 const Subgroup& s) {
  std::vector<std::vector<int>> out;
  std::vector<char> done(g.curve.edge_count(), 0);
  for (int e = 0; e < g.curve.edge_count(); ++e) {
    if (done[e]) continue;
    auto orb = edge_orbit(g, s, e);
    for (int f : orb) done[f] = 1;
    out.push_back(orb);
  }
  return out;
}

/// Edge-cycle label for reports, e.g. "(e1 e2 e3)(e4 e5)"; "id" for the
/// identity; "~e" marks an orientation-reversing self-edge.
inline std::string element_label(const ActionGroup& g, int idx) {
  const Automorphism& a = g.elements[idx];
  std::ostringstream os;
  std::vector<char> done(g.curve.edge_count(), 0);
  bool any = false;
  for (int e = 0; e < g.curve.edge_count(); ++e) {
    if (done[e]) continue;
    if (a.emap[e] == e) {
      done[e] = 1;
      if (a.eflip[e]) {
        os << "(~" << g.curve.edges[e].name << ")";
        any = true;
      }
      continue;
    }
    os << "(";
    int cur = e;
    bool first = true;
    while (!done[cur]) {
      done[cur] = 1;
      os << (first ? "" : " ") << g.curve.edges[cur].name;
      first = false;
      cur = a.emap[cur];
    }
    os << ")";
    any = true;
  }
  return any ? os.str() : "id";
}

// ---------------------------------------------------------------------
// abstract finite groups (multiplication tables only)

struct SmallGroup {
  int n = 0;
  int id = 0;
  std::vector<std::vector<int>> mul;
};

inline SmallGroup table_of(const ActionGroup& g, const Subgroup& s) {
  require_subgroup(g, s);
  SmallGroup t;
  t.n = s.order();
  std::map<int, int> pos;
  for (int i = 0; i < t.n; ++i) pos[s.elements[i]] = i;
  t.mul.assign(t.n, std::vector<int>(t.n, 0));
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j)
      t.mul[i][j] = pos.at(g.mul[s.elements[i]][s.elements[j]]);
  t.id = pos.at(0);
  return t;
}

/// Left cosets of s, each sorted, ordered by smallest member; the identity
/// coset comes first.
inline std::vector<std::vector<int>> cosets(const ActionGroup& g,
                                            const Subgroup& s) {
  require_subgroup(g, s);
  std::vector<std::vector<int>> out;
  std::vector<char> done(g.order(), 0);
  for (int x = 0; x < g.order(); ++x) {
    if (done[x]) continue;
    std::set<int> coset;
    for (int h : s.elements) coset.insert(g.mul[x][h]);
    for (int y : coset) done[y] = 1;
    out.emplace_back(coset.begin(), coset.end());
  }
  return out;
}

inline SmallGroup quotient_group(const ActionGroup& g, const Subgroup& s) {
  if (!is_normal(g, s))
    throw Error(Errc::NotNormal, "quotient by a non-normal subgroup");
  auto cs = cosets(g, s);
  const int n = static_cast<int>(cs.size());
  std::vector<int> which(g.order(), -1);
  for (int i = 0; i < n; ++i)
    for (int x : cs[i]) which[x] = i;
  SmallGroup q;
  q.n = n;
  q.id = which[0];
  q.mul.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      q.mul[i][j] = which[g.mul[cs[i][0]][cs[j][0]]];
  return q;
}

inline int element_order(const SmallGroup& g, int x) {
  int cur = x, n = 1;
  while (cur != g.id) {
    cur = g.mul[cur][x];
    ++n;
  }
  return n;
}

namespace detail {

inline std::vector<int> small_closure(const SmallGroup& g,
                                      const std::vector<int>& seed) {
  std::set<int> out{g.id};
  std::vector<int> work(out.begin(), out.end());
  for (int s : seed)
    if (out.insert(s).second) work.push_back(s);
  std::size_t next = 0;
  while (next < work.size()) {
    int x = work[next++];
    for (int y : std::vector<int>(out.begin(), out.end()))
      for (int p : {g.mul[x][y], g.mul[y][x]})
        if (out.insert(p).second) work.push_back(p);
  }
  return std::vector<int>(out.begin(), out.end());
}

}  // namespace detail

/// Abstract isomorphism test via generator images and relation
/// propagation. Exponential only in the (tiny) generating rank.
inline bool group_isomorphic(const SmallGroup& a, const SmallGroup& b) {
  if (a.n != b.n) return false;
  std::vector<int> ord_a(a.n), ord_b(b.n);
  for (int i = 0; i < a.n; ++i) ord_a[i] = element_order(a, i);
  for (int i = 0; i < b.n; ++i) ord_b[i] = element_order(b, i);
  {
    auto sa = ord_a, sb = ord_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  // greedy minimal generating sequence for a
  std::vector<int> gens;
  std::vector<int> gen_span{a.id};
  for (int x = 0; x < a.n && static_cast<int>(gen_span.size()) < a.n; ++x) {
    if (std::binary_search(gen_span.begin(), gen_span.end(), x)) continue;
    gens.push_back(x);
    gen_span = detail::small_closure(a, gens);
  }

  // try all image tuples with matching element orders
  std::vector<int> images(gens.size(), -1);
  std::function<bool(std::size_t)> attempt = [&](std::size_t k) -> bool {
    if (k == gens.size()) {
      // propagate: map words in the generators, detect conflicts
      std::vector<int> map(a.n, -1);
      std::vector<char> hit(b.n, 0);
      map[a.id] = b.id;
      hit[b.id] = 1;
      std::vector<int> work{a.id};
      std::size_t next = 0;
      while (next < work.size()) {
        int x = work[next++];
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
          int xa = a.mul[x][gens[gi]];
          int xb = b.mul[map[x]][images[gi]];
          if (map[xa] < 0) {
            if (hit[xb]) return false;  // not injective
            map[xa] = xb;
            hit[xb] = 1;
            work.push_back(xa);
          } else if (map[xa] != xb) {
            return false;
          }
        }
      }
      if (static_cast<int>(work.size()) != a.n) return false;
      // verify homomorphism on the full table
      for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < a.n; ++y)
          if (map[a.mul[x][y]] != b.mul[map[x]][map[y]]) return false;
      return true;
    }
    for (int cand = 0; cand < b.n; ++cand) {
      if (ord_b[cand] != ord_a[gens[k]]) continue;
      images[k] = cand;
      if (attempt(k + 1)) return true;
    }
    return false;
  };
  return attempt(0);
}

// ---------------------------------------------------------------------
// equivariant refinement and full preparation

/// A model refined so the action satisfies the trivial-edge-stabilizer
/// model condition and quotients by every subgroup stay loopless.
struct PreparedAction {
  Refinement refinement;  // input model -> prepared model
  ActionGroup group;      // acting on refinement.fine

  const Curve& model() const { return refinement.fine; }
};

namespace detail {

// transports every element across the same invariant cut set
inline ActionGroup transport_group(const ActionGroup& g, const CutSet& cuts,
                                   const Curve& fine) {
  ActionGroup out;
  out.curve = fine;
  for (const Automorphism& el : g.elements) {
    AlignedMorphism al = refine_morphism(as_morphism(g.curve, el), cuts, cuts);
    if (!(al.source_refinement.cuts == cuts) ||
        !(al.target_refinement.cuts == cuts))
      throw Error(Errc::CutsNotInvariant,
                  "cut set is not invariant under the action");
    ensure(al.morphism.source == fine && al.morphism.target == fine,
           "transport changed the model");
    Automorphism t;
    t.vmap = al.morphism.vertex_map;
    t.emap = al.morphism.edge_map;
    t.eflip = al.morphism.edge_flip;
    validate_automorphism(fine, t);
    out.elements.push_back(t);
  }
  detail::fill_tables(out);
  ensure(out.order() == g.order(), "transport collapsed elements");
  return out;
}

}  // namespace detail

/// Cuts every edge that some element maps to itself reversing orientation
/// at its midpoint. The resulting model is equivariant: setwise edge
/// stabilizers act as the identity on their edge.
inline PreparedAction equivariant_refinement(const ActionGroup& g) {
  CutSet cuts(g.curve.edge_count());
  for (int e = 0; e < g.curve.edge_count(); ++e) {
    for (const Automorphism& el : g.elements) {
      if (el.emap[e] == e && el.eflip[e]) {
        // flipped self-edges are finite: infinite edges never flip
        cuts.add(e, g.curve.edges[e].length.value() / Rat(2));
        break;
      }
    }
  }
  PreparedAction out;
  out.refinement = refine(g.curve, cuts);
  out.group = detail::transport_group(g, cuts, out.refinement.fine);
  ensure(out.group.equivariant(), "equivariant refinement failed");
  return out;
}

/// Equivariant refinement plus a second sweep cutting every edge whose
/// endpoints share a vertex orbit of the full group. Quotients of the
/// prepared model by arbitrary subgroups are then loopless models, and all
/// of them share this one source model.
inline PreparedAction prepare_action(const ActionGroup& g) {
  PreparedAction eq = equivariant_refinement(g);
  Subgroup all = full_subgroup(eq.group);
  // same-orbit endpoints force a loop in some quotient; cut those edges.
  // orbits only coarsen for larger groups, so the full group covers every
  // subgroup at once
  CutSet total = eq.refinement.cuts;
  bool any = false;
  for (int e = 0; e < eq.group.curve.edge_count(); ++e) {
    const Edge& ed = eq.group.curve.edges[e];
    if (ed.a == ed.b ||
        vertex_orbit(eq.group, all, ed.a) == vertex_orbit(eq.group, all, ed.b)) {
      // position of this segment's midpoint back on the input edge
      ensure(ed.length.is_finite(), "orbit loop through infinity");
      any = true;
      // find which input edge and segment this fine edge is
      bool located = false;
      for (int ie = 0; ie < g.curve.edge_count() && !located; ++ie) {
        const auto& path = eq.refinement.map.edge_paths[ie];
        Rat acc(0);
        for (const RefinementStep& s : path) {
          if (s.edge == e) {
            total.add(ie, acc + ed.length.value() / Rat(2));
            located = true;
            break;
          }
          if (eq.group.curve.edges[s.edge].length.is_infinite()) break;
          acc += eq.group.curve.edges[s.edge].length.value();
        }
      }
      ensure(located, "prepare_action lost a segment");
    }
  }
  if (!any) return eq;
  PreparedAction out;
  out.refinement = refine(g.curve, total);
  out.group = detail::transport_group(g, total, out.refinement.fine);
  ensure(out.group.equivariant(), "prepared model lost equivariance");
  Subgroup full = full_subgroup(out.group);
  for (const Edge& ed : out.model().edges)
    ensure(ed.a != ed.b && !(vertex_orbit(out.group, full, ed.a) ==
                             vertex_orbit(out.group, full, ed.b)),
           "prepared model still folds an edge onto a loop");
  return out;
}

}  // namespace tropcover
