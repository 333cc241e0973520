#pragma once

#include <optional>

#include "tropcover/isomorphism.hpp"
#include "tropcover/morphism.hpp"
#include "tropcover/refine.hpp"

namespace tropcover {

namespace detail {

// image of an interior offset t on source edge e under m, as an offset on
// the image edge
inline Rat image_offset(const MorphismRep& m, EdgeId e, const Rat& t) {
  Rat s = t * Rat(m.edge_degree[e]);
  if (m.edge_flip[e])
    s = m.target.edges[m.edge_map[e]].length.value() - s;
  return s;
}

inline Rat preimage_offset(const MorphismRep& m, EdgeId e, const Rat& s) {
  Rat u = s;
  if (m.edge_flip[e])
    u = m.target.edges[m.edge_map[e]].length.value() - s;
  return u / Rat(m.edge_degree[e]);
}

}  // namespace detail

/// A morphism rebuilt on refined models, with the refinements used.
struct AlignedMorphism {
  MorphismRep morphism;
  Refinement source_refinement;
  Refinement target_refinement;
};

/// Rebuilds m on refinements of its models that include the given cuts.
/// The cut sets are closed first so edges still map onto edges: images of
/// source cuts become target cuts, preimages of target cuts become source
/// cuts on every edge of the fiber. Closure of finite sets can in
/// principle ping-pong between repeated pull-backs and push-forwards when
/// several morphisms are involved, so a generous iteration cap guards it.
inline AlignedMorphism refine_morphism(const MorphismRep& m, CutSet src_cuts,
                                       CutSet tgt_cuts) {
  require_finite_morphism(m);
  if (src_cuts.edge_count() != m.source.edge_count() ||
      tgt_cuts.edge_count() != m.target.edge_count())
    throw Error(Errc::BadIndex, "refine_morphism: cut sets sized wrongly");
  src_cuts.normalize();
  tgt_cuts.normalize();
  for (int round = 0;; ++round) {
    if (round > 64)
      throw Error(Errc::RefinementDiverged,
                  "refine_morphism: cut closure did not stabilize");
    bool changed = false;
    for (int e = 0; e < m.source.edge_count(); ++e) {
      EdgeId f = m.edge_map[e];
      for (const Rat& t : src_cuts.at(e)) {
        Rat s = detail::image_offset(m, e, t);
        if (!tgt_cuts.contains(f, s)) {
          tgt_cuts.add(f, s);
          changed = true;
        }
      }
    }
    tgt_cuts.normalize();
    for (int e = 0; e < m.source.edge_count(); ++e) {
      EdgeId f = m.edge_map[e];
      for (const Rat& s : tgt_cuts.at(f)) {
        Rat t = detail::preimage_offset(m, e, s);
        if (!src_cuts.contains(e, t)) {
          src_cuts.add(e, t);
          changed = true;
        }
      }
    }
    src_cuts.normalize();
    if (!changed) break;
  }

  AlignedMorphism out;
  out.source_refinement = refine(m.source, src_cuts);
  out.target_refinement = refine(m.target, tgt_cuts);
  const Refinement& sr = out.source_refinement;
  const Refinement& tr = out.target_refinement;

  MorphismRep& f = out.morphism;
  f.name = m.name;
  f.source = sr.fine;
  f.target = tr.fine;
  f.declared_degree = m.declared_degree;
  f.vertex_map.assign(sr.fine.vertex_count(), -1);
  for (int v = 0; v < m.source.vertex_count(); ++v)
    f.vertex_map[sr.map.vertex_image[v]] =
        tr.map.vertex_image[m.vertex_map[v]];
  f.edge_map.assign(sr.fine.edge_count(), -1);
  f.edge_flip.assign(sr.fine.edge_count(), 0);
  f.edge_degree.assign(sr.fine.edge_count(), 1);

  for (int e = 0; e < m.source.edge_count(); ++e) {
    EdgeId img = m.edge_map[e];
    const auto& scuts = src_cuts.at(e);
    const auto& tcuts = tgt_cuts.at(img);
    const int nseg = static_cast<int>(scuts.size()) + 1;
    ensure(static_cast<int>(tcuts.size()) + 1 == nseg,
           "refine_morphism: segment counts diverged on " +
               m.source.edges[e].name);
    // cut vertices map onto cut vertices
    for (std::size_t k = 0; k < scuts.size(); ++k) {
      Point p = tr.locate(img, detail::image_offset(m, e, scuts[k]));
      ensure(p.is_vertex(), "refine_morphism: cut image is not a vertex");
      f.vertex_map[sr.cut_vertices[e][k]] = p.id;
    }
    for (int k = 0; k < nseg; ++k) {
      EdgeId fs = sr.segment(e, k);
      int tk = m.edge_flip[e] ? nseg - 1 - k : k;
      f.edge_map[fs] = tr.segment(img, tk);
      f.edge_flip[fs] = m.edge_flip[e];
      f.edge_degree[fs] = m.edge_degree[e];
    }
  }
  require_finite_morphism(f);
  return out;
}

/// A common refinement of two models of the same curve: both refine to
/// isomorphic models. Exists iff the canonical models are isomorphic.
struct MutualRefinement {
  Refinement left;
  Refinement right;
  Isomorphism iso;  // left.fine -> right.fine
};

namespace detail {

// fine-model vertex at position c along the chain of input edges `path`
inline VertexId chain_vertex(const Curve& input, const Refinement& r,
                             const std::vector<RefinementStep>& path,
                             const Rat& c) {
  Rat acc(0);
  for (const RefinementStep& s : path) {
    const Edge& ed = input.edges[s.edge];
    if (c == acc)
      return r.map.vertex_image[s.forward ? ed.a : ed.b];
    if (ed.length.is_finite()) {
      Rat end = acc + ed.length.value();
      if (c > end) {
        acc = end;
        continue;
      }
      if (c == end)
        return r.map.vertex_image[s.forward ? ed.b : ed.a];
    }
    Rat local = c - acc;
    if (!s.forward) local = ed.length.value() - local;
    const auto& cuts = r.cuts.at(s.edge);
    auto it = std::lower_bound(cuts.begin(), cuts.end(), local);
    ensure(it != cuts.end() && *it == local,
           "chain position is not a model vertex");
    return r.cut_vertices[s.edge][it - cuts.begin()];
  }
  throw Error(Errc::Internal, "chain position out of range");
}

// fine-model edge covering the chain interval [c0, c1] (c1 may be infinite
// on an infinite tail) and whether traversing the chain forward traverses
// that edge forward
inline std::pair<EdgeId, bool> chain_segment(const Curve& input,
                                             const Refinement& r,
                                             const std::vector<RefinementStep>& path,
                                             const Rat& c0, const Rat& c1,
                                             bool to_infinity) {
  Rat acc(0);
  for (const RefinementStep& s : path) {
    const Edge& ed = input.edges[s.edge];
    Rat end = acc;
    bool infinite_step = ed.length.is_infinite();
    if (!infinite_step) end = acc + ed.length.value();
    bool covers = infinite_step ? c0 >= acc
                                : (c0 >= acc && (to_infinity ? false : c1 <= end));
    if (covers) {
      Rat u0 = c0 - acc;
      Rat u1 = to_infinity ? u0 : c1 - acc;  // u1 unused on infinite tails
      if (!s.forward) {
        Rat len = ed.length.value();
        Rat nu0 = len - u1;
        u1 = len - u0;
        u0 = nu0;
      }
      const auto& cuts = r.cuts.at(s.edge);
      int k = static_cast<int>(
          std::upper_bound(cuts.begin(), cuts.end(), u0) - cuts.begin());
      // u0 itself may be a cut: the segment starting there is the next one
      return {r.segment(s.edge, k), s.forward};
    }
    if (!infinite_step) acc = end;
  }
  throw Error(Errc::Internal, "chain interval not found");
}

}  // namespace detail

inline std::optional<MutualRefinement> mutual_refinement(const Curve& a,
                                                         const Curve& b) {
  validate_model(a);
  validate_model(b);
  CanonicalModel ca = canonical_model(a);
  CanonicalModel cb = canonical_model(b);
  auto sigma = find_isomorphism(ca.model, cb.model);
  if (!sigma) return std::nullopt;

  // positions of suppressed vertices along each canonical edge
  auto boundaries = [](const Curve& input,
                       const std::vector<RefinementStep>& path) {
    std::vector<Rat> pos;
    Rat acc(0);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      acc += input.edges[path[i].edge].length.value();
      pos.push_back(acc);
    }
    return pos;
  };

  const int ne = ca.model.edge_count();
  std::vector<std::vector<Rat>> merged(ne);  // breakpoints in E-coords
  CutSet cuts_a(a.edge_count()), cuts_b(b.edge_count());
  for (int E = 0; E < ne; ++E) {
    EdgeId F = sigma->edge_map[E];
    bool sf = sigma->edge_flip[E] != 0;
    const Length L = ca.model.edges[E].length;
    std::vector<Rat> pos = boundaries(a, ca.embed.edge_paths[E]);
    for (const Rat& s : boundaries(b, cb.embed.edge_paths[F]))
      pos.push_back(sf ? L.value() - s : s);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    merged[E] = pos;
    // a position that is not already a model vertex becomes a cut
    auto record = [](const Curve& input,
                     const std::vector<RefinementStep>& path, const Rat& c,
                     CutSet& cuts) {
      Rat acc(0);
      for (const RefinementStep& s : path) {
        const Edge& ed = input.edges[s.edge];
        if (c == acc) return;  // existing vertex
        if (ed.length.is_finite()) {
          Rat end = acc + ed.length.value();
          if (c > end) {
            acc = end;
            continue;
          }
          if (c == end) return;
        }
        Rat local = c - acc;
        if (!s.forward) local = ed.length.value() - local;
        cuts.add(s.edge, local);
        return;
      }
      throw Error(Errc::Internal, "breakpoint out of range");
    };
    for (const Rat& c : pos) {
      record(a, ca.embed.edge_paths[E], c, cuts_a);
      record(b, cb.embed.edge_paths[F], sf ? L.value() - c : c, cuts_b);
    }
  }

  MutualRefinement mr;
  mr.left = refine(a, cuts_a);
  mr.right = refine(b, cuts_b);
  mr.iso.vertex_map.assign(mr.left.fine.vertex_count(), -1);
  mr.iso.edge_map.assign(mr.left.fine.edge_count(), -1);
  mr.iso.edge_flip.assign(mr.left.fine.edge_count(), 0);

  auto set_vertex = [&](VertexId va, VertexId vb) {
    if (mr.iso.vertex_map[va] < 0)
      mr.iso.vertex_map[va] = vb;
    else
      ensure(mr.iso.vertex_map[va] == vb, "mutual refinement inconsistent");
  };

  for (int E = 0; E < ne; ++E) {
    EdgeId F = sigma->edge_map[E];
    bool sf = sigma->edge_flip[E] != 0;
    const Edge& ce = ca.model.edges[E];
    const Edge& cf = cb.model.edges[F];
    const auto& patha = ca.embed.edge_paths[E];
    const auto& pathb = cb.embed.edge_paths[F];
    const Length L = ce.length;
    auto b_coord = [&](const Rat& c) { return sf ? L.value() - c : c; };

    // endpoints of the chain
    set_vertex(mr.left.map.vertex_image[ca.embed.vertex_image[ce.a]],
               mr.right.map.vertex_image
                   [cb.embed.vertex_image[sf ? cf.b : cf.a]]);
    VertexId far_a = ca.embed.vertex_image[ce.b];
    VertexId far_b = cb.embed.vertex_image[sf ? cf.a : cf.b];
    set_vertex(mr.left.map.vertex_image[far_a],
               mr.right.map.vertex_image[far_b]);

    // interior breakpoints and segments
    std::vector<Rat> pts = merged[E];
    for (const Rat& c : pts)
      set_vertex(detail::chain_vertex(a, mr.left, patha, c),
                 detail::chain_vertex(b, mr.right, pathb, b_coord(c)));
    std::vector<Rat> bounds;
    bounds.push_back(Rat(0));
    for (const Rat& c : pts) bounds.push_back(c);
    const bool infinite = L.is_infinite();
    if (!infinite) bounds.push_back(L.value());
    const int nseg = static_cast<int>(bounds.size()) - (infinite ? 0 : 1);
    for (int i = 0; i < nseg; ++i) {
      bool tail = infinite && i == nseg - 1;
      Rat c0 = bounds[i];
      Rat c1 = tail ? c0 : bounds[i + 1];
      auto [ea, da] = detail::chain_segment(a, mr.left, patha, c0, c1, tail);
      std::pair<EdgeId, bool> sb;
      if (tail) {
        sb = detail::chain_segment(b, mr.right, pathb, c0, c1, true);
      } else {
        Rat q0 = b_coord(c1), q1 = b_coord(c0);
        if (!sf) std::swap(q0, q1);
        sb = detail::chain_segment(b, mr.right, pathb, q0, q1, false);
      }
      bool db = sf ? !sb.second : sb.second;
      ensure(mr.iso.edge_map[ea] < 0, "mutual refinement: segment reused");
      mr.iso.edge_map[ea] = sb.first;
      mr.iso.edge_flip[ea] = static_cast<char>(da != db);
    }
  }
  if (ne == 0) {
    // edgeless curves: single vertices matched by sigma directly
    for (int V = 0; V < ca.model.vertex_count(); ++V)
      set_vertex(mr.left.map.vertex_image[ca.embed.vertex_image[V]],
                 mr.right.map.vertex_image
                     [cb.embed.vertex_image[sigma->vertex_map[V]]]);
  }
  for (VertexId v : mr.iso.vertex_map)
    ensure(v >= 0, "mutual refinement: unmapped vertex");
  for (EdgeId e : mr.iso.edge_map)
    ensure(e >= 0, "mutual refinement: unmapped edge");
  require_finite_morphism(
      to_morphism(mr.left.fine, mr.right.fine, mr.iso, "align"));
  return mr;
}

/// Composition phi o psi for arbitrary models: when the middle models
/// differ, both are refined to a common model first. The composite of
/// finite harmonic morphisms is finite harmonic of the product degree,
/// which is re-verified after assembly.
inline MorphismRep compose(const MorphismRep& outer,
                           const MorphismRep& inner) {
  require_finite_morphism(outer);
  require_finite_morphism(inner);
  MorphismRep result;
  if (inner.target == outer.source) {
    result = compose_on_model(outer, inner);
  } else if (auto iso = find_isomorphism(inner.target, outer.source)) {
    MorphismRep mid =
        to_morphism(inner.target, outer.source, *iso, "align");
    result = compose_on_model(outer, compose_on_model(mid, inner));
  } else {
    auto mr = mutual_refinement(inner.target, outer.source);
    if (!mr)
      throw Error(Errc::IncompatibleMiddleCurve,
                  "compose: '" + inner.name + "' does not land on the source of '" +
                      outer.name + "'");
    AlignedMorphism in_al = refine_morphism(
        inner, CutSet(inner.source.edge_count()), mr->left.cuts);
    ensure(in_al.target_refinement.cuts == mr->left.cuts,
           "compose: inner transport changed the common model");
    AlignedMorphism out_al = refine_morphism(
        outer, mr->right.cuts, CutSet(outer.target.edge_count()));
    ensure(out_al.source_refinement.cuts == mr->right.cuts,
           "compose: outer transport changed the common model");
    MorphismRep mid =
        to_morphism(mr->left.fine, mr->right.fine, mr->iso, "align");
    result = compose_on_model(out_al.morphism,
                              compose_on_model(mid, in_al.morphism));
  }
  result.name = outer.name + "*" + inner.name;
  require_finite_morphism(result);
  auto c_out = try_harmonic(outer);
  auto c_in = try_harmonic(inner);
  if (c_out && c_in) {
    auto c_all = try_harmonic(result);
    ensure(c_all.has_value(), "compose: harmonic composite lost harmonicity");
    ensure(c_all->degree == c_out->degree * c_in->degree,
           "compose: degree is not multiplicative");
  }
  return result;
}

}  // namespace tropcover
