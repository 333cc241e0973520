#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tropcover/galois.hpp"

namespace tropcover {

/// A group given by named generators, ready for serialization, plus the
/// full group they generate.
struct ExampleAction {
  std::string name;
  std::vector<std::pair<std::string, Automorphism>> generators;
  ActionGroup group;
};

/// A ready-made instance: a curve with its acting group, plus named
/// subgroups and further groups acting on the same curve that the
/// analyses compare against.
struct ExampleBundle {
  std::string name;
  std::string summary;
  ExampleAction action;
  std::vector<std::pair<std::string, Subgroup>> marked_subgroups;
  std::vector<ExampleAction> side_actions;

  const Curve& curve() const { return action.group.curve; }
};

namespace detail {

inline ExampleAction make_action(
    const std::string& name, const Curve& c,
    std::vector<std::pair<std::string, Automorphism>> gens) {
  ExampleAction a;
  a.name = name;
  a.generators = std::move(gens);
  std::vector<Automorphism> raw;
  for (const auto& [gname, g] : a.generators) raw.push_back(g);
  a.group = generate_group(c, raw);
  return a;
}

// permutation of {0..n-1} from 1-based disjoint cycles
inline std::vector<int> perm_from_cycles(
    int n, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (const std::vector<int>& cyc : cycles) {
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      ensure(cyc[k] >= 1 && cyc[k] <= n, "cycle entry out of range");
      p[cyc[k] - 1] = cyc[(k + 1) % cyc.size()] - 1;
    }
  }
  return p;
}

// star K_{1,n}: center c, leaves x1..xn, legs e1..en
inline Curve star_curve(int n, const std::string& name,
                        const Length& leg = Length::finite(Rat(1))) {
  CurveBuilder b(name);
  b.vertex("c");
  for (int i = 1; i <= n; ++i) b.vertex("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    b.edge("e" + std::to_string(i), "c", "x" + std::to_string(i), leg);
  return b.build();
}

// the isometry of a star permuting legs by the given cycles
inline Automorphism star_auto(const Curve& star, int n,
                              const std::vector<std::vector<int>>& cycles) {
  std::vector<int> p = perm_from_cycles(n, cycles);
  Automorphism g;
  g.vmap.resize(n + 1);
  g.vmap[0] = 0;
  for (int i = 0; i < n; ++i) g.vmap[1 + i] = 1 + p[i];
  g.emap.resize(n);
  for (int i = 0; i < n; ++i) g.emap[i] = p[i];
  g.eflip.assign(n, 0);
  validate_automorphism(star, g);
  return g;
}

// theta graph: two vertices joined by three parallel unit edges
inline Curve theta_curve() {
  CurveBuilder b("theta");
  b.vertex("u").vertex("v");
  for (int i = 1; i <= 3; ++i)
    b.edge("e" + std::to_string(i), "u", "v", Length::finite(Rat(1)));
  return b.build();
}

inline Automorphism theta_auto(const Curve& th,
                               const std::vector<std::vector<int>>& cycles) {
  std::vector<int> p = perm_from_cycles(3, cycles);
  Automorphism g;
  g.vmap = {0, 1};
  g.emap.resize(3);
  for (int i = 0; i < 3; ++i) g.emap[i] = p[i];
  g.eflip.assign(3, 0);
  validate_automorphism(th, g);
  return g;
}

// circle C_n: vertices v0..v{n-1}, unit edges ei from vi to v{i+1}
inline Curve cycle_curve(int n, const std::string& name) {
  ensure(n >= 1, "cycle needs at least one vertex");
  CurveBuilder b(name);
  for (int i = 0; i < n; ++i) b.vertex("v" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    b.edge("e" + std::to_string(i), "v" + std::to_string(i),
           "v" + std::to_string((i + 1) % n), Length::finite(Rat(1)));
  return b.build();
}

inline Automorphism cycle_rotation(const Curve& c, int n, int shift) {
  shift = ((shift % n) + n) % n;
  Automorphism g;
  g.vmap.resize(n);
  g.emap.resize(n);
  g.eflip.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    g.vmap[i] = (i + shift) % n;
    g.emap[i] = (i + shift) % n;
  }
  validate_automorphism(c, g);
  return g;
}

inline Automorphism cycle_reflection(const Curve& c, int n) {
  Automorphism g;
  g.vmap.resize(n);
  g.emap.resize(n);
  g.eflip.assign(n, 1);
  for (int i = 0; i < n; ++i) {
    g.vmap[i] = (n - i) % n;
    g.emap[i] = n - 1 - i;
  }
  validate_automorphism(c, g);
  return g;
}

}  // namespace detail

/// Theta graph with the symmetric group on its three edges. The quotient
/// is an interval of length 2; the action is preGalois but not Galois.
inline ExampleBundle example_theta() {
  ExampleBundle b;
  b.name = "theta_sigma3";
  b.summary =
      "theta graph (two vertices, three unit edges) with the full edge "
      "symmetric group of order 6";
  Curve th = detail::theta_curve();
  Automorphism sigma = detail::theta_auto(th, {{1, 2, 3}});
  Automorphism tau = detail::theta_auto(th, {{1, 2}});
  b.action = detail::make_action("S3", th, {{"s", sigma}, {"t", tau}});
  b.marked_subgroups.emplace_back(
      "A3", closure_subgroup(b.action.group, {b.action.group.index_of(sigma)}));
  return b;
}

/// Six-legged star with the group generated by (e1 e2) and (e3 e4 e5 e6),
/// of order 8; the cyclic group on all six legs acts on the side.
inline ExampleBundle example_star6() {
  ExampleBundle b;
  b.name = "star6";
  b.summary =
      "star K(1,6) with the order-8 group generated by (e1 e2) and "
      "(e3 e4 e5 e6)";
  Curve st = detail::star_curve(6, "star6");
  Automorphism sigma = detail::star_auto(st, 6, {{1, 2}});
  Automorphism beta = detail::star_auto(st, 6, {{3, 4, 5, 6}});
  b.action = detail::make_action("G", st, {{"s", sigma}, {"b", beta}});
  b.marked_subgroups.emplace_back(
      "H", closure_subgroup(b.action.group, {b.action.group.index_of(beta)}));
  Automorphism sb2 = compose(sigma, compose(beta, beta));
  b.marked_subgroups.emplace_back(
      "C2", closure_subgroup(b.action.group, {b.action.group.index_of(sb2)}));
  Automorphism gamma = detail::star_auto(st, 6, {{1, 2, 3, 4, 5, 6}});
  b.side_actions.push_back(detail::make_action("Z6", st, {{"g", gamma}}));
  return b;
}

/// Five-legged star with the group generated by (e1 e2) and (e3 e4 e5),
/// cyclic of order 6; the five-cycle group acts on the side.
inline ExampleBundle example_star5() {
  ExampleBundle b;
  b.name = "star5";
  b.summary =
      "star K(1,5) with the order-6 group generated by (e1 e2) and "
      "(e3 e4 e5)";
  Curve st = detail::star_curve(5, "star5");
  Automorphism sigma = detail::star_auto(st, 5, {{1, 2}});
  Automorphism beta = detail::star_auto(st, 5, {{3, 4, 5}});
  b.action = detail::make_action("G", st, {{"s", sigma}, {"b", beta}});
  Automorphism gamma = detail::star_auto(st, 5, {{1, 2, 3, 4, 5}});
  b.side_actions.push_back(detail::make_action("Z5", st, {{"g", gamma}}));
  return b;
}

/// Circle C_n with a chosen symmetry group: the full rotation group, a
/// rotation subgroup of given order, or the dihedral group.
inline ExampleBundle example_cycle(int n, const std::string& kind) {
  if (n < 1) throw Error(Errc::ParseError, "cycle size must be positive");
  ExampleBundle b;
  Curve c = detail::cycle_curve(n, "C" + std::to_string(n));
  if (kind == "rotation" || kind == "z" + std::to_string(n)) {
    b.name = "cycle";
    b.summary = "circle with " + std::to_string(n) +
                " unit edges and its full rotation group";
    b.action = detail::make_action("Z" + std::to_string(n), c,
                                   {{"r", detail::cycle_rotation(c, n, 1)}});
  } else if (kind == "dihedral") {
    b.name = "dihedral";
    b.summary = "circle with " + std::to_string(n) +
                " unit edges and its dihedral symmetry group";
    b.action = detail::make_action(
        "D" + std::to_string(n), c,
        {{"r", detail::cycle_rotation(c, n, 1)},
         {"m", detail::cycle_reflection(c, n)}});
  } else if (kind.size() > 1 && kind[0] == 'z') {
    int d = 0;
    try {
      d = std::stoi(kind.substr(1));
    } catch (...) {
      throw Error(Errc::ParseError, "bad group kind '" + kind + "'");
    }
    if (d < 1 || n % d != 0)
      throw Error(Errc::UnknownReference,
                  "the rotation group of C" + std::to_string(n) +
                      " has no subgroup of order " + std::to_string(d));
    b.name = "cycle";
    b.summary = "circle with " + std::to_string(n) +
                " unit edges and the rotation subgroup of order " +
                std::to_string(d);
    b.action = detail::make_action(
        "Z" + std::to_string(d), c,
        {{"r", detail::cycle_rotation(c, n, n / d)}});
  } else {
    throw Error(Errc::UnknownReference,
                "unknown group kind '" + kind +
                    "' (expected rotation, dihedral, or z<order>)");
  }
  // mark the rotation subgroups; for dihedral groups this tags the
  // normal cyclic part and one non-normal reflection
  if (kind == "dihedral") {
    b.marked_subgroups.emplace_back(
        "R", closure_subgroup(
                 b.action.group,
                 {b.action.group.index_of(detail::cycle_rotation(c, n, 1))}));
    b.marked_subgroups.emplace_back(
        "S", closure_subgroup(
                 b.action.group,
                 {b.action.group.index_of(detail::cycle_reflection(c, n))}));
  } else {
    const int m = b.action.group.order();
    for (int d = 1; d <= m; ++d) {
      if (m % d != 0) continue;
      b.marked_subgroups.emplace_back(
          "Z" + std::to_string(d),
          closure_subgroup(b.action.group,
                           {b.action.group.index_of(
                               detail::cycle_rotation(c, n, n / d))}));
    }
  }
  return b;
}

/// Star of three infinite legs with the rotation of order 3: a Galois
/// action whose exceptional set is exactly the image of the center.
inline ExampleBundle example_infstar() {
  ExampleBundle b;
  b.name = "infstar";
  b.summary =
      "three legs of infinite length meeting at a center, rotated "
      "cyclically";
  Curve st = detail::star_curve(3, "infstar", Length::infinity());
  b.action = detail::make_action(
      "Z3", st, {{"r", detail::star_auto(st, 3, {{1, 2, 3}})}});
  return b;
}

/// Two infinite legs swapped by an involution that fixes a finite third
/// leg pointwise: not Galois, witnessed by a whole stabilized edge.
inline ExampleBundle example_spider() {
  ExampleBundle b;
  b.name = "spider";
  b.summary =
      "two swapped infinite legs plus a fixed finite leg; the fixed leg "
      "is a stabilized edge, so the action is not Galois";
  CurveBuilder cb("spider");
  cb.vertex("c").vertex("x1").vertex("x2").vertex("y");
  cb.edge("e1", "c", "x1", Length::infinity());
  cb.edge("e2", "c", "x2", Length::infinity());
  cb.edge("e3", "c", "y", Length::finite(Rat(1)));
  Curve c = cb.build();
  Automorphism swap;
  swap.vmap = {0, 2, 1, 3};
  swap.emap = {1, 0, 2};
  swap.eflip = {0, 0, 0};
  validate_automorphism(c, swap);
  b.action = detail::make_action("Z2", c, {{"x", swap}});
  return b;
}

inline std::vector<std::string> example_names() {
  return {"theta_sigma3", "star6",   "star5", "cycle",
          "dihedral",     "infstar", "spider"};
}

/// Builds an example by name. `cycle` takes a size and a group kind
/// (rotation, dihedral, or z<order>); `dihedral <n>` is shorthand for
/// `cycle <n> dihedral`.
inline ExampleBundle make_example(const std::string& name,
                                  const std::vector<std::string>& args) {
  const auto want = [&](std::size_t k) {
    if (args.size() != k)
      throw Error(Errc::ParseError,
                  "example '" + name + "' expects " + std::to_string(k) +
                      " parameter(s), got " + std::to_string(args.size()));
  };
  const auto as_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (...) {
      throw Error(Errc::ParseError, "bad integer parameter '" + s + "'");
    }
  };
  if (name == "theta_sigma3") {
    want(0);
    return example_theta();
  }
  if (name == "star6") {
    want(0);
    return example_star6();
  }
  if (name == "star5") {
    want(0);
    return example_star5();
  }
  if (name == "cycle") {
    if (args.size() == 1) return example_cycle(as_int(args[0]), "rotation");
    want(2);
    return example_cycle(as_int(args[0]), args[1]);
  }
  if (name == "dihedral") {
    want(1);
    return example_cycle(as_int(args[0]), "dihedral");
  }
  if (name == "infstar") {
    want(0);
    return example_infstar();
  }
  if (name == "spider") {
    want(0);
    return example_spider();
  }
  throw Error(Errc::UnknownReference, "unknown example '" + name + "'");
}

// ---------------------------------------------------------------------
// prenormality corpus

/// One prenormality instance: an H-normal covering phi, a map psi into
/// its source, and an isometry f of psi's source commuting with phi o psi.
struct PrenormalCase {
  std::string name;
  ActionGroup h;
  MorphismRep phi;
  MorphismRep psi;
  Automorphism f;
};

namespace detail {

// a renamed copy of C_n whose map to the original shifts indices by one
inline std::pair<Curve, MorphismRep> rotated_cycle_cover(const Curve& base,
                                                         int n) {
  CurveBuilder cb("C" + std::to_string(n) + "r");
  for (int i = 0; i < n; ++i) cb.vertex("w" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    cb.edge("f" + std::to_string(i), "w" + std::to_string(i),
            "w" + std::to_string((i + 1) % n), Length::finite(Rat(1)));
  Curve c = cb.build();
  MorphismRep m;
  m.name = "psi";
  m.source = c;
  m.target = base;
  m.vertex_map.resize(n);
  m.edge_map.resize(n);
  m.edge_flip.assign(n, 0);
  m.edge_degree.assign(n, 1);
  for (int i = 0; i < n; ++i) {
    m.vertex_map[i] = (i + 1) % n;
    m.edge_map[i] = (i + 1) % n;
  }
  require_finite_morphism(m);
  return {c, m};
}

inline Automorphism plain_rotation(const Curve& c, int n, int shift) {
  Automorphism f;
  f.vmap.resize(n);
  f.emap.resize(n);
  f.eflip.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    f.vmap[i] = (i + shift) % n;
    f.emap[i] = (i + shift) % n;
  }
  validate_automorphism(c, f);
  return f;
}

}  // namespace detail

/// The corpus of valid prenormality instances: identity upstairs maps with
/// deck isometries, and rotated degree-one covers of circle quotients.
inline std::vector<PrenormalCase> prenormal_cases() {
  std::vector<PrenormalCase> out;

  // C12 double cover of C6: psi the identity, f the deck rotation
  {
    ExampleBundle b = example_cycle(12, "z2");
    PreparedQuotient pq = quotient(b.action.group, "C6");
    ensure(pq.prepared.refinement.cuts.total() == 0,
           "free rotation action should not need refinement");
    PrenormalCase pc;
    pc.name = "c12-over-c6-identity";
    pc.h = b.action.group;
    pc.phi = pq.result.projection;
    pc.psi = identity_morphism(b.action.group.curve);
    pc.psi.name = "psi";
    pc.f = detail::cycle_rotation(b.action.group.curve, 12, 6);
    out.push_back(std::move(pc));
  }

  // same covering, psi a rotated re-presentation of the circle
  {
    ExampleBundle b = example_cycle(12, "z2");
    PreparedQuotient pq = quotient(b.action.group, "C6");
    auto [cover, psi] = detail::rotated_cycle_cover(b.action.group.curve, 12);
    PrenormalCase pc;
    pc.name = "c12-over-c6-rotated";
    pc.h = b.action.group;
    pc.phi = pq.result.projection;
    pc.psi = psi;
    pc.f = detail::plain_rotation(cover, 12, 6);
    out.push_back(std::move(pc));
  }

  // quadruple cover C12 -> C3 with H = Z4, f a generator of the deck group
  {
    ExampleBundle b = example_cycle(12, "z4");
    PreparedQuotient pq = quotient(b.action.group, "C3");
    ensure(pq.prepared.refinement.cuts.total() == 0,
           "free rotation action should not need refinement");
    auto [cover, psi] = detail::rotated_cycle_cover(b.action.group.curve, 12);
    PrenormalCase pc;
    pc.name = "c12-over-c3-rotated";
    pc.h = b.action.group;
    pc.phi = pq.result.projection;
    pc.psi = psi;
    pc.f = detail::plain_rotation(cover, 12, 3);
    out.push_back(std::move(pc));
  }

  return out;
}

}  // namespace tropcover
