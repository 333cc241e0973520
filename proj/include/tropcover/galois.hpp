#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tropcover/quotient.hpp"

namespace tropcover {

// ---------------------------------------------------------------------
// joint preparation of an action with morphisms defined on its curve
//
// Classification needs the acting group, the covering map, and any
// comparison maps presented on one common refined model. Starting from the
// prepared model of the action, the cut set grows until every map carries
// each fine edge onto a full edge of a refined target, and stays invariant
// under the group. All later analyses run on that shared model.

namespace detail {

// closes a cut set under the images of a set of isometries of the model
inline CutSet aut_cut_closure(const Curve& c,
                              const std::vector<const Automorphism*>& gens,
                              CutSet cuts) {
  cuts.normalize();
  for (;;) {
    CutSet before = cuts;
    for (const Automorphism* a : gens) {
      for (int e = 0; e < c.edge_count(); ++e) {
        for (const Rat& t : before.at(e)) {
          Rat img = t;
          if (a->eflip[e]) img = c.edges[e].length.value() - t;
          cuts.add(a->emap[e], img);
        }
      }
    }
    cuts.normalize();
    if (cuts == before) return cuts;
  }
}

inline CutSet group_cut_closure(const ActionGroup& g, CutSet cuts) {
  std::vector<const Automorphism*> gens;
  gens.reserve(g.elements.size());
  for (const Automorphism& el : g.elements) gens.push_back(&el);
  return aut_cut_closure(g.curve, gens, std::move(cuts));
}

struct JointPreparation {
  PreparedAction prepared;
  std::vector<MorphismRep> transported;  // one per input map, on the model
};

inline JointPreparation prepare_with_morphisms(
    const ActionGroup& g, const std::vector<const MorphismRep*>& maps) {
  for (const MorphismRep* m : maps) {
    if (!(m->source == g.curve))
      throw Error(Errc::SourceModelMismatch,
                  "'" + m->name + "' is not presented on the acting curve");
    require_finite_morphism(*m);
  }
  CutSet cuts = prepare_action(g).refinement.cuts;
  for (int round = 0;; ++round) {
    if (round > 32)
      throw Error(Errc::RefinementDiverged,
                  "joint preparation of the action and its maps diverged");
    CutSet before = cuts;
    before.normalize();
    cuts = group_cut_closure(g, std::move(cuts));
    for (const MorphismRep* m : maps) {
      AlignedMorphism al =
          refine_morphism(*m, cuts, CutSet(m->target.edge_count()));
      cuts = al.source_refinement.cuts;
    }
    cuts.normalize();
    if (cuts == before) break;
  }

  JointPreparation out;
  out.prepared.refinement = refine(g.curve, cuts);
  out.prepared.group =
      detail::transport_group(g, cuts, out.prepared.refinement.fine);
  ensure(out.prepared.group.equivariant(),
         "joint preparation lost equivariance");
  Subgroup all = full_subgroup(out.prepared.group);
  for (const Edge& ed : out.prepared.model().edges)
    ensure(ed.a != ed.b &&
               !(vertex_orbit(out.prepared.group, all, ed.a) ==
                 vertex_orbit(out.prepared.group, all, ed.b)),
           "joint preparation folds an edge onto a loop");
  for (const MorphismRep* m : maps) {
    AlignedMorphism al =
        refine_morphism(*m, cuts, CutSet(m->target.edge_count()));
    ensure(al.source_refinement.cuts == cuts,
           "joint preparation failed to close");
    ensure(al.morphism.source == out.prepared.model(),
           "transported map lives on the wrong model");
    out.transported.push_back(std::move(al.morphism));
  }
  return out;
}

// simple work-stealing loop so the heavier sweeps can use several threads
template <typename F>
inline void run_parallel(std::size_t count, int jobs, F&& work) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) work(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto body = [&] {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        work(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t nt = std::min<std::size_t>(jobs, count);
  for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(body);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Several groups on one curve, refined to a single shared model; the
/// quotient projections of all of them then live on the same source.
struct CoPreparation {
  Refinement refinement;
  std::vector<ActionGroup> groups;  // one per input, acting on the model

  const Curve& model() const { return refinement.fine; }
};

inline CoPreparation co_prepare(const std::vector<const ActionGroup*>& gs) {
  ensure(!gs.empty(), "co_prepare needs at least one group");
  const Curve& c = gs[0]->curve;
  for (const ActionGroup* g : gs)
    if (!(g->curve == c))
      throw Error(Errc::SourceModelMismatch,
                  "the groups act on different curves");
  CutSet cuts(c.edge_count());
  for (const ActionGroup* g : gs) {
    CutSet own = prepare_action(*g).refinement.cuts;
    for (int e = 0; e < c.edge_count(); ++e)
      for (const Rat& t : own.at(e)) cuts.add(e, t);
  }
  cuts.normalize();
  for (int round = 0;; ++round) {
    if (round > 32)
      throw Error(Errc::RefinementDiverged,
                  "co-preparation of several groups diverged");
    CutSet before = cuts;
    for (const ActionGroup* g : gs)
      cuts = detail::group_cut_closure(*g, std::move(cuts));
    cuts.normalize();
    if (cuts == before) break;
  }
  CoPreparation out;
  out.refinement = refine(c, cuts);
  for (const ActionGroup* g : gs) {
    ActionGroup t = detail::transport_group(*g, cuts, out.refinement.fine);
    ensure(t.equivariant(), "co-preparation lost equivariance");
    Subgroup all = full_subgroup(t);
    for (const Edge& ed : out.refinement.fine.edges)
      ensure(ed.a != ed.b && !(vertex_orbit(t, all, ed.a) ==
                               vertex_orbit(t, all, ed.b)),
             "co-preparation folds an edge onto a loop");
    out.groups.push_back(std::move(t));
  }
  return out;
}

/// An invariant covering presented on the prepared model of its action:
/// phi is the transported map, phi o g = phi for every element.
struct PreparedCovering {
  PreparedAction prepared;
  MorphismRep phi;
  HarmonicCertificate phi_certificate;

  const Curve& model() const { return prepared.model(); }
};

inline PreparedCovering prepare_covering(const ActionGroup& g,
                                         const MorphismRep& phi) {
  if (!(phi.source == g.curve))
    throw Error(Errc::SourceModelMismatch,
                "'" + phi.name + "' is not presented on the acting curve");
  require_finite_morphism(phi);
  check_harmonic(phi);
  for (int i = 1; i < g.order(); ++i) {
    MorphismRep moved =
        compose_on_model(phi, as_morphism(g.curve, g.elements[i]));
    if (!same_map(moved, phi))
      throw Error(Errc::NotInvariant, "'" + phi.name + "' o " +
                                          element_label(g, i) +
                                          " differs from '" + phi.name + "'");
  }
  detail::JointPreparation joint = detail::prepare_with_morphisms(g, {&phi});
  PreparedCovering out;
  out.prepared = std::move(joint.prepared);
  out.phi = std::move(joint.transported[0]);
  for (int i = 1; i < out.prepared.group.order(); ++i) {
    MorphismRep moved = compose_on_model(
        out.phi,
        as_morphism(out.prepared.group.curve, out.prepared.group.elements[i]));
    ensure(same_map(moved, out.phi), "transport broke invariance");
  }
  out.phi_certificate = check_harmonic(out.phi);
  return out;
}

// ---------------------------------------------------------------------
// Galois actions

/// Verdict on whether a subgroup acts with generically free fibers. On an
/// equivariant model that happens exactly when no edge has a nontrivial
/// setwise stabilizer; the finitely many stabilized vertices then project
/// to the exceptional set, off which every fiber has full size.
struct GaloisActionReport {
  bool galois = false;
  std::vector<std::string> exceptional;  // quotient images, "[v]" names
  std::string witness_edge;              // a stabilized edge when not Galois
  int witness_stabilizer_order = 1;
};

inline GaloisActionReport galois_action_on_model(const ActionGroup& g,
                                                 const Subgroup& sub) {
  require_subgroup(g, sub);
  GaloisActionReport rep;
  rep.galois = true;
  for (int e = 0; e < g.curve.edge_count(); ++e) {
    Subgroup st = edge_stabilizer(g, sub, e);
    if (st.order() > 1 && rep.galois) {
      rep.galois = false;
      rep.witness_edge = g.curve.edges[e].name;
      rep.witness_stabilizer_order = st.order();
    }
  }
  for (const std::vector<int>& orbit : vertex_orbits(g, sub)) {
    if (vertex_stabilizer(g, sub, orbit.front()).order() > 1)
      rep.exceptional.push_back("[" + g.curve.vertex_names[orbit.front()] +
                                "]");
  }
  return rep;
}

struct GaloisActionResult {
  PreparedAction prepared;
  GaloisActionReport report;
};

inline GaloisActionResult is_galois_action(const ActionGroup& g) {
  GaloisActionResult out;
  out.prepared = prepare_action(g);
  out.report = galois_action_on_model(out.prepared.group,
                                      full_subgroup(out.prepared.group));
  return out;
}

// ---------------------------------------------------------------------
// covering classification

/// Classification of an invariant covering against one subgroup: the factor
/// of phi through pi_sub decides preGalois (degree-one factor), the action
/// report decides Galois, together they decide normal.
struct CoveringClassification {
  long long phi_degree = 0;
  QuotientResult quotient;     // pi_sub on the prepared model
  GaloisActionReport action;   // how sub acts
  FactorResult factor;         // phi through pi_sub
  long long theta_degree = 0;  // defined when the factor is finite harmonic
  bool pre_galois = false;
  bool galois = false;
  bool normal = false;
};

inline CoveringClassification classify_covering_prepared(
    const PreparedCovering& pc, const Subgroup& sub,
    const std::string& label = "Q") {
  const ActionGroup& g = pc.prepared.group;
  for (int i : sub.elements) {
    if (i == 0) continue;
    MorphismRep moved =
        compose_on_model(pc.phi, as_morphism(g.curve, g.elements[i]));
    if (!same_map(moved, pc.phi))
      throw Error(Errc::NotInvariant, "'" + pc.phi.name + "' o " +
                                          element_label(g, i) +
                                          " differs from '" + pc.phi.name +
                                          "'");
  }
  CoveringClassification out;
  out.phi_degree = pc.phi_certificate.degree;
  out.quotient = quotient_on_model(g, sub, label);
  out.action = galois_action_on_model(g, sub);
  out.factor = factor_through(pc.phi, out.quotient.projection);
  const bool fh = out.factor.classification == FactorClass::FiniteHarmonic;
  if (fh) out.theta_degree = out.factor.certificate->degree;
  out.pre_galois = fh && out.theta_degree == 1;
  out.galois = out.pre_galois && out.action.galois;
  out.normal = fh && out.action.galois;
  return out;
}

inline CoveringClassification classify_covering(const ActionGroup& g,
                                                const MorphismRep& phi) {
  PreparedCovering pc = prepare_covering(g, phi);
  return classify_covering_prepared(pc, full_subgroup(pc.prepared.group));
}

/// The covering given by the quotient projection itself (phi = pi_G).
inline PreparedCovering projection_covering(const ActionGroup& g,
                                            const std::string& name) {
  PreparedQuotient pq = quotient(g, name);
  PreparedCovering out;
  out.prepared = std::move(pq.prepared);
  out.phi = std::move(pq.result.projection);
  out.phi_certificate = pq.result.certificate;
  return out;
}

// ---------------------------------------------------------------------
// invariance groups and the order on coverings

/// G(psi): the elements fixing psi, i.e. psi o g = psi as model maps.
inline Subgroup invariance_group(const ActionGroup& g,
                                 const MorphismRep& psi) {
  if (!(psi.source == g.curve))
    throw Error(Errc::SourceModelMismatch,
                "'" + psi.name + "' is not presented on the acting curve");
  Subgroup s;
  for (int i = 0; i < g.order(); ++i) {
    MorphismRep moved =
        compose_on_model(psi, as_morphism(g.curve, g.elements[i]));
    if (same_map(moved, psi)) s.elements.push_back(i);
  }
  ensure(is_subgroup(g, s), "invariance set is not closed");
  return s;
}

/// [psi1] <= [psi2] in the intermediate-covering order: psi1 factors
/// through psi2 by a finite harmonic map.
inline bool leq_covering(const MorphismRep& psi1, const MorphismRep& psi2) {
  return factor_through(psi1, psi2).classification ==
         FactorClass::FiniteHarmonic;
}

/// Equivalence of coverings with a shared source: a degree-one finite
/// harmonic identification of the targets intertwines the two maps.
inline bool equivalent(const MorphismRep& psi1, const MorphismRep& psi2) {
  FactorResult fr = factor_through(psi1, psi2);
  return fr.classification == FactorClass::FiniteHarmonic &&
         fr.certificate->degree == 1;
}

// ---------------------------------------------------------------------
// the Galois correspondence

struct CorrespondenceEntry {
  Subgroup subgroup;
  std::string label;
  std::vector<std::string> element_names;
  QuotientResult quotient;         // pi_sub
  bool intermediate_galois = false;  // sub acts Galois on the cover
  FactorClass theta_class = FactorClass::NotWellDefined;
  long long theta_degree = 0;
  bool degree_ok = false;          // theta_degree * |sub| == |G|
  Subgroup recovered;              // G(pi_sub)
  bool roundtrip_subgroup = false;  // recovered == sub
  bool roundtrip_covering = false;  // pi_recovered equivalent to pi_sub
  bool ok = false;
};

struct CorrespondencePair {
  int left = 0;
  int right = 0;
  bool contained = false;   // subgroup[left] subset of subgroup[right]
  bool factors = false;     // pi_right factors through pi_left
  bool consistent = false;  // the two agree, i.e. order reversal holds
};

struct CorrespondenceReport {
  long long group_order = 0;
  std::vector<CorrespondenceEntry> entries;  // one per subgroup
  std::vector<CorrespondencePair> pairs;     // all ordered pairs
  bool all_ok = false;
};

/// Sweeps every subgroup G' of a Galois covering: builds pi_G', factors phi
/// through it, recovers G' as the invariance group, and checks that
/// containment of subgroups matches factorization of quotients, pair by
/// ordered pair.
inline CorrespondenceReport galois_correspondence(const PreparedCovering& pc,
                                                  int jobs = 1) {
  const ActionGroup& g = pc.prepared.group;
  CoveringClassification base =
      classify_covering_prepared(pc, full_subgroup(g), "base");
  if (!base.galois)
    throw Error(Errc::NotGaloisCovering,
                "'" + pc.phi.name + "' is not a Galois covering");

  std::vector<Subgroup> subs = all_subgroups(g);
  CorrespondenceReport rep;
  rep.group_order = g.order();
  rep.entries.resize(subs.size());

  detail::run_parallel(subs.size(), jobs, [&](std::size_t k) {
    const Subgroup& sub = subs[k];
    CorrespondenceEntry en;
    en.subgroup = sub;
    en.label = "H" + std::to_string(k);
    for (int i : sub.elements) en.element_names.push_back(element_label(g, i));
    en.quotient = quotient_on_model(g, sub, en.label);
    en.intermediate_galois = galois_action_on_model(g, sub).galois;
    FactorResult fr = factor_through(pc.phi, en.quotient.projection);
    en.theta_class = fr.classification;
    if (fr.certificate) en.theta_degree = fr.certificate->degree;
    en.degree_ok = en.theta_class == FactorClass::FiniteHarmonic &&
                   en.theta_degree * sub.order() == g.order();
    en.recovered = invariance_group(g, en.quotient.projection);
    en.roundtrip_subgroup = en.recovered == sub;
    QuotientResult back = quotient_on_model(g, en.recovered, en.label + "'");
    en.roundtrip_covering = equivalent(back.projection, en.quotient.projection);
    en.ok = en.intermediate_galois && en.degree_ok && en.roundtrip_subgroup &&
            en.roundtrip_covering;
    rep.entries[k] = std::move(en);
  });

  const std::size_t n = subs.size();
  rep.pairs.resize(n * n);
  detail::run_parallel(n * n, jobs, [&](std::size_t idx) {
    const std::size_t i = idx / n;
    const std::size_t j = idx % n;
    CorrespondencePair p;
    p.left = static_cast<int>(i);
    p.right = static_cast<int>(j);
    p.contained = std::includes(
        subs[j].elements.begin(), subs[j].elements.end(),
        subs[i].elements.begin(), subs[i].elements.end());
    p.factors = leq_covering(rep.entries[j].quotient.projection,
                             rep.entries[i].quotient.projection);
    p.consistent = p.contained == p.factors;
    rep.pairs[idx] = p;
  });

  rep.all_ok = true;
  for (const CorrespondenceEntry& en : rep.entries)
    if (!en.ok) rep.all_ok = false;
  for (const CorrespondencePair& p : rep.pairs)
    if (!p.consistent) rep.all_ok = false;
  return rep;
}

// ---------------------------------------------------------------------
// intermediate coverings: normality against the Galois side

namespace detail {

struct DeckSearch {
  long long deck_order = -1;  // -1 when the enumeration was skipped
  bool theta_galois = false;
  int witness_subgroup_order = 0;
};

// decides whether theta is a Galois covering of its target. Deck
// transformations of an edge-to-edge map send vertices to vertices (their
// inverses are deck transformations too, so no vertex can land in an edge
// interior), hence they are model isomorphisms and can be enumerated. theta
// is Galois iff some deck subgroup of order deg(theta) makes it one.
inline DeckSearch theta_galois_search(const MorphismRep& theta) {
  DeckSearch ds;
  const long long deg = degree_of(theta);
  bool dilated = false;
  for (long long d : theta.edge_degree)
    if (d > 1) dilated = true;

  std::vector<Automorphism> deck;
  bool overflow = false;
  for_each_isomorphism(
      theta.source, theta.source, [&](const Isomorphism& iso) {
        Automorphism h;
        h.vmap = iso.vertex_map;
        h.emap = iso.edge_map;
        h.eflip = iso.edge_flip;
        if (same_map(compose_on_model(theta, as_morphism(theta.source, h)),
                     theta)) {
          deck.push_back(std::move(h));
          if (deck.size() > 64) {
            overflow = true;
            return true;
          }
        }
        return false;
      });
  if (overflow) {
    // a Galois covering pulls every target edge back at dilation one, so
    // dilation anywhere settles the verdict without the full deck group
    if (dilated) return ds;
    throw Error(Errc::GroupTooLarge,
                "deck transformation group exceeds the enumeration bound");
  }
  ds.deck_order = static_cast<long long>(deck.size());
  if (dilated || deg <= 0) return ds;

  ActionGroup deck_group = group_from_elements(theta.source, deck);
  for (const Subgroup& s : all_subgroups(deck_group)) {
    if (s.order() != deg) continue;
    std::vector<Automorphism> els;
    for (int i : s.elements) els.push_back(deck_group.elements[i]);
    ActionGroup cand = group_from_elements(theta.source, std::move(els));
    PreparedCovering pch = prepare_covering(cand, theta);
    CoveringClassification c = classify_covering_prepared(
        pch, full_subgroup(pch.prepared.group), "deck");
    if (c.galois) {
      ds.theta_galois = true;
      ds.witness_subgroup_order = s.order();
      break;
    }
  }
  return ds;
}

struct InducedAction {
  ActionGroup group;
  std::vector<int> coset_reps;
};

// the action of G/N on the target of psi, [g](psi(x)) = psi(g(x)); fails
// with InducedActionIllDefined when any fiber or coset choice disagrees
inline InducedAction induce_action(const ActionGroup& g, const Subgroup& n,
                                   const MorphismRep& psi) {
  const Curve& tgt = psi.target;
  InducedAction out;
  std::vector<Automorphism> els;
  for (const std::vector<int>& coset : cosets(g, n)) {
    Automorphism h;
    h.vmap.assign(tgt.vertex_count(), -1);
    h.emap.assign(tgt.edge_count(), -1);
    h.eflip.assign(tgt.edge_count(), 0);
    std::vector<char> edge_set(tgt.edge_count(), 0);
    for (int gi : coset) {
      const Automorphism& a = g.elements[gi];
      for (int v = 0; v < g.curve.vertex_count(); ++v) {
        const VertexId w = psi.vertex_map[v];
        const VertexId img = psi.vertex_map[a.vmap[v]];
        if (h.vmap[w] < 0)
          h.vmap[w] = img;
        else if (h.vmap[w] != img)
          throw Error(Errc::InducedActionIllDefined,
                      "vertex " + tgt.vertex_names[w] +
                          " receives conflicting images");
      }
      for (int e = 0; e < g.curve.edge_count(); ++e) {
        const EdgeId f = psi.edge_map[e];
        const EdgeId img = psi.edge_map[a.emap[e]];
        const bool flip = ((psi.edge_flip[e] != 0) ^ (a.eflip[e] != 0) ^
                           (psi.edge_flip[a.emap[e]] != 0));
        if (psi.edge_degree[e] != psi.edge_degree[a.emap[e]])
          throw Error(Errc::InducedActionIllDefined,
                      "dilation jumps across the fiber of " +
                          tgt.edges[f].name);
        if (!edge_set[f]) {
          h.emap[f] = img;
          h.eflip[f] = flip ? 1 : 0;
          edge_set[f] = 1;
        } else if (h.emap[f] != img || ((h.eflip[f] != 0) != flip)) {
          throw Error(Errc::InducedActionIllDefined,
                      "edge " + tgt.edges[f].name +
                          " receives conflicting images");
        }
      }
    }
    for (VertexId w : h.vmap)
      ensure(w >= 0, "psi misses a vertex despite being harmonic");
    for (EdgeId f : h.emap) ensure(f >= 0, "psi misses an edge");
    try {
      validate_automorphism(tgt, h);
    } catch (const Error& err) {
      throw Error(Errc::InducedActionIllDefined,
                  std::string("induced map is not an isometry: ") +
                      err.what());
    }
    for (const Automorphism& prev : els)
      if (prev == h)
        throw Error(Errc::InducedActionIllDefined,
                    "induced action is not faithful");
    els.push_back(std::move(h));
    out.coset_reps.push_back(coset.front());
  }
  out.group = group_from_elements(tgt, std::move(els));
  return out;
}

}  // namespace detail

/// Outcome of testing one intermediate covering psi against a Galois phi:
/// normality of G(psi) on one side, theta being Galois on the other, plus
/// the induced quotient-group action when normal. The two sides must agree.
struct IntermediateVerdict {
  Subgroup invariance;  // G(psi)
  bool normal_in_g = false;
  FactorClass theta_class = FactorClass::NotWellDefined;
  long long theta_degree = 0;
  long long deck_order = -1;
  bool theta_is_galois = false;
  int galois_witness_order = 0;     // |H| certifying theta Galois
  bool induced_well_defined = false;
  bool induced_galois = false;          // theta is (G/G(psi))-Galois
  bool induced_matches_quotient = false;  // induced group iso to G/G(psi)
  bool consistent = false;
};

inline IntermediateVerdict intermediate_analysis_prepared(
    const PreparedCovering& pc, const MorphismRep& psi) {
  const ActionGroup& g = pc.prepared.group;
  CoveringClassification base =
      classify_covering_prepared(pc, full_subgroup(g), "base");
  if (!base.galois)
    throw Error(Errc::NotGaloisCovering,
                "'" + pc.phi.name + "' is not a Galois covering");
  if (!(psi.source == g.curve))
    throw Error(Errc::SourceModelMismatch,
                "'" + psi.name + "' is not presented on the prepared model");
  require_finite_morphism(psi);
  check_harmonic(psi);

  IntermediateVerdict v;
  v.invariance = invariance_group(g, psi);
  QuotientResult qpsi = quotient_on_model(g, v.invariance, "Qpsi");
  if (!equivalent(psi, qpsi.projection))
    throw Error(Errc::PsiNotInAPrime,
                "'" + psi.name +
                    "' is not equivalent to the quotient by its invariance "
                    "group");
  v.normal_in_g = is_normal(g, v.invariance);

  FactorResult fr = factor_through(pc.phi, psi);
  v.theta_class = fr.classification;
  ensure(v.theta_class == FactorClass::FiniteHarmonic,
         "phi failed to factor through an intermediate covering");
  v.theta_degree = fr.certificate->degree;

  detail::DeckSearch ds = detail::theta_galois_search(*fr.theta);
  v.deck_order = ds.deck_order;
  v.theta_is_galois = ds.theta_galois;
  v.galois_witness_order = ds.witness_subgroup_order;

  if (v.normal_in_g) {
    detail::InducedAction ia = detail::induce_action(g, v.invariance, psi);
    v.induced_well_defined = true;
    PreparedCovering pci = prepare_covering(ia.group, *fr.theta);
    CoveringClassification ci = classify_covering_prepared(
        pci, full_subgroup(pci.prepared.group), "ind");
    v.induced_galois = ci.galois;
    v.induced_matches_quotient =
        group_isomorphic(table_of(ia.group, full_subgroup(ia.group)),
                         quotient_group(g, v.invariance));
  }

  v.consistent = v.normal_in_g == v.theta_is_galois;
  ensure(v.consistent, "normality of G(psi) and theta being Galois disagree");
  return v;
}

inline IntermediateVerdict intermediate_analysis(const ActionGroup& g,
                                                 const MorphismRep& phi,
                                                 const MorphismRep& psi) {
  for (int i = 1; i < g.order(); ++i) {
    MorphismRep moved =
        compose_on_model(phi, as_morphism(g.curve, g.elements[i]));
    if (!same_map(moved, phi))
      throw Error(Errc::NotInvariant, "'" + phi.name + "' o " +
                                          element_label(g, i) +
                                          " differs from '" + phi.name + "'");
  }
  detail::JointPreparation joint =
      detail::prepare_with_morphisms(g, {&phi, &psi});
  PreparedCovering pc;
  pc.prepared = std::move(joint.prepared);
  pc.phi = std::move(joint.transported[0]);
  pc.phi_certificate = check_harmonic(pc.phi);
  return intermediate_analysis_prepared(pc, joint.transported[1]);
}

// ---------------------------------------------------------------------
// universal mapping property

/// Attempts to factor an invariant psi through phi. For a Galois phi the
/// factor must be finite harmonic (and is unique, being forced fiber by
/// fiber); for a merely preGalois phi the attempt may stall at a
/// continuous-only map, which is returned for counterexample reporting.
inline FactorResult ump_check_prepared(const PreparedCovering& pc,
                                       const MorphismRep& psi) {
  const ActionGroup& g = pc.prepared.group;
  if (!(psi.source == g.curve))
    throw Error(Errc::SourceModelMismatch,
                "'" + psi.name + "' is not presented on the prepared model");
  require_finite_morphism(psi);
  check_harmonic(psi);
  for (int i = 1; i < g.order(); ++i) {
    MorphismRep moved =
        compose_on_model(psi, as_morphism(g.curve, g.elements[i]));
    if (!same_map(moved, psi))
      throw Error(Errc::PsiNotInvariant, "'" + psi.name + "' o " +
                                             element_label(g, i) +
                                             " differs from '" + psi.name +
                                             "'");
  }
  FactorResult fr = factor_through(psi, pc.phi);
  CoveringClassification base =
      classify_covering_prepared(pc, full_subgroup(g), "base");
  if (base.galois)
    ensure(fr.classification == FactorClass::FiniteHarmonic,
           "universal property failed for a Galois covering");
  return fr;
}

inline FactorResult ump_check(const ActionGroup& g, const MorphismRep& phi,
                              const MorphismRep& psi) {
  for (int i = 1; i < g.order(); ++i) {
    MorphismRep moved =
        compose_on_model(phi, as_morphism(g.curve, g.elements[i]));
    if (!same_map(moved, phi))
      throw Error(Errc::NotInvariant, "'" + phi.name + "' o " +
                                          element_label(g, i) +
                                          " differs from '" + phi.name + "'");
  }
  detail::JointPreparation joint =
      detail::prepare_with_morphisms(g, {&phi, &psi});
  PreparedCovering pc;
  pc.prepared = std::move(joint.prepared);
  pc.phi = std::move(joint.transported[0]);
  pc.phi_certificate = check_harmonic(pc.phi);
  return ump_check_prepared(pc, joint.transported[1]);
}

// ---------------------------------------------------------------------
// prenormality of compositions with normal coverings

struct PrenormalRow {
  EdgeId edge = -1;
  std::string edge_name;
  std::vector<int> witnesses;  // indices into the transported group
  std::vector<std::string> witness_names;
};

struct PrenormalReport {
  Curve refined_source;  // model of psi's source on which witnesses live
  std::vector<PrenormalRow> rows;
  bool prenormal = false;
};

/// For an H-normal phi, an upstairs map psi into phi's source, and an
/// isometry f of psi's source with phi o psi o f = phi o psi, exhibits on
/// each edge of a suitable refinement some h in H with psi o f = h o psi
/// there. The refinement pulls the equivariant cuts of H's curve back
/// through psi and closes under f.
inline PrenormalReport prenormal_check(const ActionGroup& h,
                                       const MorphismRep& phi,
                                       const MorphismRep& psi,
                                       const Automorphism& f) {
  if (!(phi.source == h.curve))
    throw Error(Errc::SourceModelMismatch,
                "'" + phi.name + "' is not presented on the acting curve");
  if (!(psi.target == h.curve))
    throw Error(Errc::SourceModelMismatch,
                "'" + psi.name + "' does not map into the acting curve");
  require_finite_morphism(phi);
  require_finite_morphism(psi);
  check_harmonic(phi);
  check_harmonic(psi);
  validate_automorphism(psi.source, f);

  {
    PreparedCovering pc = prepare_covering(h, phi);
    CoveringClassification cls =
        classify_covering_prepared(pc, full_subgroup(pc.prepared.group), "N");
    if (!cls.normal)
      throw Error(Errc::PhiNotNormal,
                  "'" + phi.name + "' is not a normal covering");
  }
  MorphismRep comp = compose_on_model(phi, psi);
  if (!same_map(compose_on_model(comp, as_morphism(psi.source, f)), comp))
    throw Error(Errc::CompositionMismatch,
                "phi o psi o f differs from phi o psi");

  CutSet tcuts = prepare_action(h).refinement.cuts;
  CutSet scuts(psi.source.edge_count());
  for (int round = 0;; ++round) {
    if (round > 32)
      throw Error(Errc::RefinementDiverged,
                  "prenormal refinement did not close");
    CutSet sb = scuts;
    sb.normalize();
    CutSet tb = tcuts;
    tb.normalize();
    AlignedMorphism al = refine_morphism(psi, scuts, tcuts);
    scuts = al.source_refinement.cuts;
    tcuts = al.target_refinement.cuts;
    scuts = detail::aut_cut_closure(psi.source, {&f}, std::move(scuts));
    tcuts = detail::group_cut_closure(h, std::move(tcuts));
    scuts.normalize();
    tcuts.normalize();
    if (scuts == sb && tcuts == tb) break;
  }

  ActionGroup hr =
      detail::transport_group(h, tcuts, refine(h.curve, tcuts).fine);
  AlignedMorphism pal = refine_morphism(psi, scuts, tcuts);
  ensure(pal.source_refinement.cuts == scuts &&
             pal.target_refinement.cuts == tcuts,
         "prenormal refinement failed to close");
  ensure(pal.morphism.target == hr.curve, "transport model mismatch");
  AlignedMorphism fal =
      refine_morphism(as_morphism(psi.source, f), scuts, scuts);
  ensure(fal.source_refinement.cuts == scuts &&
             fal.target_refinement.cuts == scuts,
         "f does not preserve the prenormal cuts");
  MorphismRep psi_f = compose_on_model(pal.morphism, fal.morphism);

  std::vector<MorphismRep> h_psi;
  h_psi.reserve(hr.order());
  for (int i = 0; i < hr.order(); ++i)
    h_psi.push_back(compose_on_model(as_morphism(hr.curve, hr.elements[i]),
                                     pal.morphism));

  PrenormalReport rep;
  rep.refined_source = pal.morphism.source;
  rep.prenormal = true;
  for (int e = 0; e < rep.refined_source.edge_count(); ++e) {
    PrenormalRow row;
    row.edge = e;
    row.edge_name = rep.refined_source.edges[e].name;
    for (int i = 0; i < hr.order(); ++i) {
      if (agree_on_edge(psi_f, h_psi[i], e)) {
        row.witnesses.push_back(i);
        row.witness_names.push_back(element_label(hr, i));
      }
    }
    if (row.witnesses.empty()) rep.prenormal = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace tropcover
