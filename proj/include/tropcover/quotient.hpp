#pragma once

#include <string>
#include <vector>

#include "tropcover/action.hpp"
#include "tropcover/morphism.hpp"

namespace tropcover {

struct OrbitRow {
  int representative = -1;
  int orbit_size = 0;
  int stabilizer_order = 1;
};

/// Quotient of a prepared model by a subgroup: vertices and edges are
/// orbits, the length of an orbit edge is |stabilizer| times the length
/// upstairs, and the projection is finite harmonic of degree |subgroup|.
struct QuotientResult {
  Curve quotient;
  MorphismRep projection;          // model -> quotient
  std::vector<int> vertex_class;   // model vertex -> quotient vertex
  std::vector<int> edge_class;
  std::vector<OrbitRow> vertex_rows;  // indexed by quotient vertex
  std::vector<OrbitRow> edge_rows;    // indexed by quotient edge
  long long degree = 0;
  HarmonicCertificate certificate;
};

/// Quotient on the group's own model. The model must be equivariant and
/// must not fold any edge onto a loop; prepare_action delivers exactly
/// that, for every subgroup at once.
inline QuotientResult quotient_on_model(const ActionGroup& g,
                                        const Subgroup& sub,
                                        const std::string& name) {
  if (!g.equivariant())
    throw Error(Errc::RequiresEquivariantModel,
                "quotient needs an equivariantly refined model");
  require_subgroup(g, sub);
  const Curve& c = g.curve;

  QuotientResult out;
  out.quotient.name = name;
  out.vertex_class.assign(c.vertex_count(), -1);
  out.edge_class.assign(c.edge_count(), -1);

  for (const auto& orb : vertex_orbits(g, sub)) {
    int cls = static_cast<int>(out.vertex_rows.size());
    for (int v : orb) out.vertex_class[v] = cls;
    OrbitRow row;
    row.representative = orb.front();
    row.orbit_size = static_cast<int>(orb.size());
    row.stabilizer_order = vertex_stabilizer(g, sub, orb.front()).order();
    ensure(row.orbit_size * row.stabilizer_order == sub.order(),
           "orbit-stabilizer mismatch on vertices");
    out.vertex_rows.push_back(row);
    out.quotient.vertex_names.push_back("[" + c.vertex_names[orb.front()] +
                                        "]");
  }

  for (const auto& orb : edge_orbits(g, sub)) {
    int cls = static_cast<int>(out.edge_rows.size());
    for (int e : orb) out.edge_class[e] = cls;
    OrbitRow row;
    row.representative = orb.front();
    row.orbit_size = static_cast<int>(orb.size());
    row.stabilizer_order = edge_stabilizer(g, sub, orb.front()).order();
    ensure(row.orbit_size * row.stabilizer_order == sub.order(),
           "orbit-stabilizer mismatch on edges");
    out.edge_rows.push_back(row);

    const Edge& rep = c.edges[orb.front()];
    Edge qe;
    qe.name = "[" + rep.name + "]";
    qe.a = out.vertex_class[rep.a];
    qe.b = out.vertex_class[rep.b];
    ensure(qe.a != qe.b, "quotient would need a loop; model not prepared");
    qe.length = rep.length.scaled(row.stabilizer_order);
    if (rep.length.is_infinite()) qe.inf_end = InfEnd::B;
    out.quotient.edges.push_back(qe);
  }
  validate_model(out.quotient);

  MorphismRep& pi = out.projection;
  pi.name = name;
  pi.source = c;
  pi.target = out.quotient;
  pi.vertex_map = out.vertex_class;
  pi.edge_map = out.edge_class;
  pi.edge_flip.assign(c.edge_count(), 0);
  pi.edge_degree.assign(c.edge_count(), 1);
  for (int e = 0; e < c.edge_count(); ++e) {
    const Edge& src = c.edges[e];
    const Edge& dst = out.quotient.edges[out.edge_class[e]];
    int ca = out.vertex_class[src.a];
    int cb = out.vertex_class[src.b];
    if (ca == dst.a && cb == dst.b) {
      pi.edge_flip[e] = 0;
    } else {
      ensure(ca == dst.b && cb == dst.a, "quotient orientation impossible");
      pi.edge_flip[e] = 1;
    }
    pi.edge_degree[e] = out.edge_rows[out.edge_class[e]].stabilizer_order;
  }
  if (c.edge_count() == 0) pi.declared_degree = sub.order();

  require_finite_morphism(pi);
  out.certificate = check_harmonic(pi);
  out.degree = out.certificate.degree;
  ensure(out.degree == sub.order(),
         "projection degree differs from the subgroup order");
  return out;
}

/// End-to-end quotient of any action: prepares the model, then projects by
/// the full group.
struct PreparedQuotient {
  PreparedAction prepared;
  QuotientResult result;
};

inline PreparedQuotient quotient(const ActionGroup& g,
                                 const std::string& name) {
  PreparedQuotient out;
  out.prepared = prepare_action(g);
  out.result = quotient_on_model(out.prepared.group,
                                 full_subgroup(out.prepared.group), name);
  return out;
}

}  // namespace tropcover
