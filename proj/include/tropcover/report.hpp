#pragma once

// Rendering of analysis results: human-readable text, machine-readable
// JSON-lines records, and Graphviz DOT drawings. Every renderer is
// deterministic: the same input produces the same bytes.

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tropcover/catalog.hpp"
#include "tropcover/galois.hpp"
#include "tropcover/textio.hpp"

namespace tropcover {

using Json = nlohmann::ordered_json;

/// A report in both output formats at once; the caller picks one.
struct Rendered {
  std::string text;
  std::vector<Json> records;
};

inline std::string to_jsonl(const std::vector<Json>& records) {
  std::string out;
  for (const Json& j : records) {
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline const char* yn(bool b) { return b ? "yes" : "no"; }
inline const char* passfail(bool b) { return b ? "pass" : "fail"; }

namespace detail {

class TextTable {
 public:
  explicit TextTable(std::vector<std::string> headers)
      : rows_{std::move(headers)} {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str(const std::string& indent = "  ") const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_)
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c >= width.size()) width.resize(c + 1, 0);
        width[c] = std::max(width[c], row[c].size());
      }
    std::string out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      out += indent;
      for (std::size_t c = 0; c < rows_[r].size(); ++c) {
        std::string cell = rows_[r][c];
        if (c + 1 < rows_[r].size()) cell.resize(width[c] + 2, ' ');
        out += cell;
      }
      while (!out.empty() && out.back() == ' ') out.pop_back();
      out += '\n';
      if (r == 0) {
        out += indent;
        std::size_t total = 0;
        for (std::size_t c = 0; c < rows_[0].size(); ++c)
          total += width[c] + (c + 1 < rows_[0].size() ? 2 : 0);
        out += std::string(total, '-');
        out += '\n';
      }
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline std::string join(const std::vector<std::string>& parts,
                        const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------
// DOT drawings

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '"';
  return out;
}

inline const char* dot_palette(int i) {
  static const char* colors[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                 "#66a61e", "#e6ab02", "#a6761d", "#666666"};
  return colors[i % 8];
}

}  // namespace detail

/// Draws a curve as an undirected multigraph; edges are labelled
/// `name:length` (or `name:inf`). When a morphism out of this curve is
/// given, edges are coloured by the target edge they cover, so fibers
/// share a colour.
inline std::string to_dot(const Curve& c,
                          const MorphismRep* color_by = nullptr) {
  if (color_by)
    ensure(color_by->source == c,
           "fiber colouring needs a morphism out of the drawn curve");
  std::string out;
  out += "graph " + detail::dot_quote(c.name) + " {\n";
  out += "  node [shape=circle, fontsize=10, margin=0.02];\n";
  out += "  edge [fontsize=9];\n";
  for (int v = 0; v < c.vertex_count(); ++v)
    out += "  " + detail::dot_quote(c.vertex_names[v]) + ";\n";
  for (int e = 0; e < c.edge_count(); ++e) {
    const Edge& ed = c.edges[e];
    std::string label = ed.name + ":" +
                        (ed.length.is_infinite() ? std::string("inf")
                                                 : ed.length.str());
    std::string attrs = "label=" + detail::dot_quote(label);
    if (ed.length.is_infinite()) attrs += ", style=dashed";
    if (color_by) {
      attrs += ", color=" +
               detail::dot_quote(detail::dot_palette(color_by->edge_map[e]));
      attrs += ", penwidth=2";
    }
    out += "  " + detail::dot_quote(c.vertex_names[ed.a]) + " -- " +
           detail::dot_quote(c.vertex_names[ed.b]) + " [" + attrs + "];\n";
  }
  out += "}\n";
  return out;
}

/// The covering relations of the subgroup lattice: i -> j when subgroup i
/// is contained in subgroup j with nothing strictly between.
inline std::vector<std::pair<int, int>> hasse_edges(
    const CorrespondenceReport& rep) {
  const int n = static_cast<int>(rep.entries.size());
  std::vector<std::vector<char>> in(n, std::vector<char>(n, 0));
  for (const CorrespondencePair& p : rep.pairs)
    in[p.left][p.right] = p.contained ? 1 : 0;
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || !in[i][j]) continue;
      bool covering = true;
      for (int k = 0; k < n && covering; ++k)
        if (k != i && k != j && in[i][k] && in[k][j]) covering = false;
      if (covering) out.emplace_back(i, j);
    }
  return out;
}

/// Draws both lattices of the correspondence side by side: subgroups
/// ordered by inclusion, intermediate coverings by factorization. The
/// covering arrows run opposite to the subgroup arrows, which is the
/// order reversal of the correspondence.
inline std::string correspondence_dot(const CorrespondenceReport& rep) {
  std::vector<std::pair<int, int>> cov = hasse_edges(rep);
  std::string out;
  out += "digraph correspondence {\n";
  out += "  rankdir=BT;\n";
  out += "  node [shape=box, fontsize=10];\n";
  out += "  subgraph cluster_subgroups {\n    label=\"subgroups\";\n";
  for (const CorrespondenceEntry& e : rep.entries)
    out += "    " + e.label + " [label=\"" + e.label + "\\norder " +
           std::to_string(e.subgroup.order()) + "\"];\n";
  for (auto [i, j] : cov)
    out += "    " + rep.entries[i].label + " -> " + rep.entries[j].label +
           ";\n";
  out += "  }\n";
  out += "  subgraph cluster_coverings {\n";
  out += "    label=\"intermediate coverings\";\n";
  for (const CorrespondenceEntry& e : rep.entries)
    out += "    Q" + e.label + " [label=\"pi_" + e.label + "\\ntheta deg " +
           std::to_string(e.theta_degree) + "\"];\n";
  for (auto [i, j] : cov)
    out += "    Q" + rep.entries[j].label + " -> Q" + rep.entries[i].label +
           ";\n";
  out += "  }\n";
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------
// validate

inline Rendered report_validate(const Document& doc) {
  Rendered r;
  std::ostringstream os;
  for (const Curve& c : doc.curves) {
    int inf = 0;
    Rat finite_total(0);
    for (const Edge& e : c.edges) {
      if (e.length.is_infinite())
        ++inf;
      else
        finite_total += e.length.value();
    }
    const int genus = c.edge_count() - c.vertex_count() + 1;
    os << "curve " << c.name << ": " << c.vertex_count() << " vertices, "
       << c.edge_count() << " edges (" << inf << " infinite), genus "
       << genus << ", finite length " << format_rational(finite_total)
       << "\n";
    Json j;
    j["record"] = "curve";
    j["name"] = c.name;
    j["vertices"] = c.vertex_count();
    j["edges"] = c.edge_count();
    j["infinite_edges"] = inf;
    j["genus"] = genus;
    j["finite_length"] = format_rational(finite_total);
    j["status"] = "pass";
    r.records.push_back(std::move(j));
  }
  for (const MorphismRep& m : doc.morphisms) {
    std::string why;
    std::optional<HarmonicCertificate> cert = try_harmonic(m, &why);
    os << "morphism " << m.name << ": " << m.source.name << " -> "
       << m.target.name;
    if (cert)
      os << ", harmonic of degree " << cert->degree << "\n";
    else
      os << ", finite but not harmonic (" << why << ")\n";
    Json j;
    j["record"] = "morphism";
    j["name"] = m.name;
    j["source"] = m.source.name;
    j["target"] = m.target.name;
    j["harmonic"] = static_cast<bool>(cert);
    if (cert)
      j["degree"] = cert->degree;
    else
      j["why"] = why;
    j["status"] = "pass";
    r.records.push_back(std::move(j));
  }
  for (const NamedAction& a : doc.actions) {
    os << "action " << a.name << " on " << a.curve.name << ": order "
       << a.group.order() << " from " << a.generators.size()
       << " generator(s)\n";
    Json j;
    j["record"] = "action";
    j["name"] = a.name;
    j["curve"] = a.curve.name;
    j["order"] = a.group.order();
    j["generators"] = a.generators.size();
    j["status"] = "pass";
    r.records.push_back(std::move(j));
  }
  r.text = os.str();
  return r;
}

// ---------------------------------------------------------------------
// quotient

inline Rendered report_quotient(const std::string& action_name,
                                const PreparedQuotient& pq) {
  Rendered r;
  const Curve& model = pq.prepared.model();
  const Curve& input = pq.prepared.refinement.input;
  const QuotientResult& q = pq.result;
  std::ostringstream os;
  os << "quotient of " << input.name << " by " << action_name << " (order "
     << pq.prepared.group.order() << ")\n";
  if (pq.prepared.refinement.cuts.total() > 0)
    os << "model: refined with " << pq.prepared.refinement.cuts.total()
       << " cut(s) to " << model.vertex_count() << " vertices, "
       << model.edge_count() << " edges\n";
  else
    os << "model: the input curve, unrefined\n";

  os << "vertex orbits:\n";
  detail::TextTable vt({"representative", "orbit size", "stabilizer"});
  for (const OrbitRow& row : q.vertex_rows)
    vt.add({model.vertex_names[row.representative],
            std::to_string(row.orbit_size),
            std::to_string(row.stabilizer_order)});
  os << vt.str();

  os << "edge orbits:\n";
  detail::TextTable et(
      {"representative", "orbit size", "stabilizer", "quotient length"});
  for (std::size_t k = 0; k < q.edge_rows.size(); ++k) {
    const OrbitRow& row = q.edge_rows[k];
    et.add({model.edges[row.representative].name,
            std::to_string(row.orbit_size),
            std::to_string(row.stabilizer_order),
            q.quotient.edges[k].length.str()});
  }
  os << et.str();

  os << "quotient curve " << q.quotient.name << ": "
     << q.quotient.vertex_count() << " vertices, " << q.quotient.edge_count()
     << " edges\n";
  os << "projection degree: " << q.degree << "\n";

  Json head;
  head["record"] = "quotient";
  head["curve"] = input.name;
  head["action"] = action_name;
  head["group_order"] = pq.prepared.group.order();
  head["cuts"] = pq.prepared.refinement.cuts.total();
  head["quotient_vertices"] = q.quotient.vertex_count();
  head["quotient_edges"] = q.quotient.edge_count();
  head["degree"] = q.degree;
  head["status"] = "pass";
  r.records.push_back(std::move(head));
  for (const OrbitRow& row : q.vertex_rows) {
    Json j;
    j["record"] = "vertex_orbit";
    j["representative"] = model.vertex_names[row.representative];
    j["orbit_size"] = row.orbit_size;
    j["stabilizer_order"] = row.stabilizer_order;
    r.records.push_back(std::move(j));
  }
  for (std::size_t k = 0; k < q.edge_rows.size(); ++k) {
    const OrbitRow& row = q.edge_rows[k];
    Json j;
    j["record"] = "edge_orbit";
    j["representative"] = model.edges[row.representative].name;
    j["orbit_size"] = row.orbit_size;
    j["stabilizer_order"] = row.stabilizer_order;
    j["quotient_length"] = q.quotient.edges[k].length.str();
    r.records.push_back(std::move(j));
  }
  r.text = os.str();
  return r;
}

// ---------------------------------------------------------------------
// shared factor-result details

namespace detail {

inline void factor_details(std::ostringstream& os, Json& j,
                           const FactorResult& fr, const Curve& pi_target) {
  os << "factor: " << factor_class_name(fr.classification);
  j["factor"] = factor_class_name(fr.classification);
  switch (fr.classification) {
    case FactorClass::NotWellDefined:
      os << " (" << fr.witness << ")";
      j["witness"] = fr.witness;
      break;
    case FactorClass::ContinuousOnly: {
      std::vector<std::string> bad;
      for (int e = 0; e < pi_target.edge_count(); ++e) {
        const Rat& s = fr.edge_scale[e];
        if (s.denominator() != 1)
          bad.push_back(pi_target.edges[e].name + ":" + format_rational(s));
      }
      os << " (non-integral scale on " << join(bad) << ")";
      j["non_integral_scales"] = bad;
      break;
    }
    case FactorClass::FiniteMorphism:
      os << " (theta '" << fr.theta->name << "' is finite but not harmonic)";
      j["theta"] = fr.theta->name;
      break;
    case FactorClass::FiniteHarmonic:
      os << ", theta degree " << fr.certificate->degree;
      j["theta"] = fr.theta->name;
      j["theta_degree"] = fr.certificate->degree;
      break;
  }
  os << "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------
// classify

inline Rendered report_classify(const std::string& phi_name,
                                const std::string& action_name,
                                const std::string& subgroup_label,
                                const CoveringClassification& cls) {
  Rendered r;
  std::ostringstream os;
  os << "covering " << phi_name << ": degree " << cls.phi_degree << "\n";
  os << "acting subgroup " << subgroup_label << " of " << action_name
     << ": quotient " << cls.quotient.quotient.name << " with "
     << cls.quotient.quotient.vertex_count() << " vertices, "
     << cls.quotient.quotient.edge_count() << " edges, projection degree "
     << cls.quotient.degree << "\n";
  os << "action Galois: " << yn(cls.action.galois);
  if (!cls.action.galois)
    os << " (edge " << cls.action.witness_edge << " has stabilizer of order "
       << cls.action.witness_stabilizer_order << ")";
  os << "\n";
  if (cls.action.exceptional.empty())
    os << "exceptional set: empty\n";
  else
    os << "exceptional set: " << detail::join(cls.action.exceptional) << "\n";

  Json j;
  j["record"] = "classify";
  j["covering"] = phi_name;
  j["action"] = action_name;
  j["subgroup"] = subgroup_label;
  j["degree"] = cls.phi_degree;
  j["quotient"] = cls.quotient.quotient.name;
  j["projection_degree"] = cls.quotient.degree;
  j["action_galois"] = cls.action.galois;
  if (!cls.action.galois) {
    j["witness_edge"] = cls.action.witness_edge;
    j["witness_stabilizer_order"] = cls.action.witness_stabilizer_order;
  }
  j["exceptional"] = cls.action.exceptional;
  detail::factor_details(os, j, cls.factor, cls.quotient.quotient);

  os << "preGalois: " << yn(cls.pre_galois) << "\n";
  os << "Galois:    " << yn(cls.galois) << "\n";
  os << "normal:    " << yn(cls.normal) << "\n";
  j["pre_galois"] = cls.pre_galois;
  j["galois"] = cls.galois;
  j["normal"] = cls.normal;
  j["status"] = cls.galois ? "pass" : "fail";
  r.records.push_back(std::move(j));
  r.text = os.str();
  return r;
}

// ---------------------------------------------------------------------
// intermediate analysis (classify --psi)

inline Rendered report_intermediate(const std::string& phi_name,
                                    const std::string& psi_name,
                                    const ActionGroup& g,
                                    const IntermediateVerdict& v) {
  Rendered r;
  std::ostringstream os;
  std::vector<std::string> els;
  for (int i : v.invariance.elements) els.push_back(element_label(g, i));
  os << "intermediate covering " << psi_name << " under Galois covering "
     << phi_name << "\n";
  os << "invariance group G(" << psi_name << "): order "
     << v.invariance.order() << " = { " << detail::join(els) << " }\n";
  os << "normal in G: " << yn(v.normal_in_g) << "\n";
  os << "theta: " << factor_class_name(v.theta_class) << " of degree "
     << v.theta_degree << ", deck group order " << v.deck_order << "\n";
  os << "theta Galois: " << yn(v.theta_is_galois);
  if (v.theta_is_galois)
    os << " (witnessed by a deck subgroup of order " << v.galois_witness_order
       << ")";
  os << "\n";
  if (v.normal_in_g) {
    os << "induced action of G/G(" << psi_name
       << "): well-defined " << yn(v.induced_well_defined) << ", Galois "
       << yn(v.induced_galois) << ", isomorphic to the quotient group "
       << yn(v.induced_matches_quotient) << "\n";
  }
  os << "equivalence (normal in G <=> theta Galois): "
     << passfail(v.consistent) << "\n";

  Json j;
  j["record"] = "intermediate";
  j["covering"] = phi_name;
  j["psi"] = psi_name;
  j["invariance_order"] = v.invariance.order();
  j["invariance_elements"] = els;
  j["normal_in_g"] = v.normal_in_g;
  j["theta_class"] = factor_class_name(v.theta_class);
  j["theta_degree"] = v.theta_degree;
  j["deck_order"] = v.deck_order;
  j["theta_galois"] = v.theta_is_galois;
  if (v.theta_is_galois) j["galois_witness_order"] = v.galois_witness_order;
  if (v.normal_in_g) {
    j["induced_well_defined"] = v.induced_well_defined;
    j["induced_galois"] = v.induced_galois;
    j["induced_matches_quotient"] = v.induced_matches_quotient;
  }
  j["status"] = passfail(v.consistent);
  r.records.push_back(std::move(j));
  r.text = os.str();
  return r;
}

// ---------------------------------------------------------------------
// correspondence

inline Rendered report_correspondence(const std::string& phi_name,
                                      const CorrespondenceReport& rep) {
  Rendered r;
  std::ostringstream os;
  os << "Galois correspondence for " << phi_name << ", group order "
     << rep.group_order << ", " << rep.entries.size() << " subgroups\n";
  detail::TextTable t({"subgroup", "order", "theta deg", "deg ok", "Galois",
                       "recovered", "equivalent", "ok"});
  for (const CorrespondenceEntry& e : rep.entries)
    t.add({e.label, std::to_string(e.subgroup.order()),
           std::to_string(e.theta_degree), yn(e.degree_ok),
           yn(e.intermediate_galois), yn(e.roundtrip_subgroup),
           yn(e.roundtrip_covering), passfail(e.ok)});
  os << t.str();

  int consistent = 0;
  std::vector<std::string> bad;
  for (const CorrespondencePair& p : rep.pairs) {
    if (p.consistent)
      ++consistent;
    else
      bad.push_back(rep.entries[p.left].label + "<=" +
                    rep.entries[p.right].label);
  }
  os << "order reversal: " << consistent << "/" << rep.pairs.size()
     << " ordered pairs consistent";
  if (!bad.empty()) os << " (failing: " << detail::join(bad) << ")";
  os << "\n";
  os << "correspondence: " << passfail(rep.all_ok) << "\n";

  for (const CorrespondenceEntry& e : rep.entries) {
    Json j;
    j["record"] = "correspondence_entry";
    j["label"] = e.label;
    j["order"] = e.subgroup.order();
    j["elements"] = e.element_names;
    j["theta_class"] = factor_class_name(e.theta_class);
    j["theta_degree"] = e.theta_degree;
    j["degree_ok"] = e.degree_ok;
    j["intermediate_galois"] = e.intermediate_galois;
    j["roundtrip_subgroup"] = e.roundtrip_subgroup;
    j["roundtrip_covering"] = e.roundtrip_covering;
    j["status"] = passfail(e.ok);
    r.records.push_back(std::move(j));
  }
  for (const CorrespondencePair& p : rep.pairs) {
    Json j;
    j["record"] = "order_reversal";
    j["left"] = rep.entries[p.left].label;
    j["right"] = rep.entries[p.right].label;
    j["contained"] = p.contained;
    j["factors"] = p.factors;
    j["status"] = passfail(p.consistent);
    r.records.push_back(std::move(j));
  }
  Json s;
  s["record"] = "correspondence";
  s["covering"] = phi_name;
  s["group_order"] = rep.group_order;
  s["subgroups"] = rep.entries.size();
  s["pairs"] = rep.pairs.size();
  s["status"] = passfail(rep.all_ok);
  r.records.push_back(std::move(s));
  r.text = os.str();
  return r;
}

// ---------------------------------------------------------------------
// universal mapping property

inline Rendered report_ump(const PreparedCovering& pc, const MorphismRep& psi,
                           long long psi_degree, const FactorResult& fr) {
  Rendered r;
  std::ostringstream os;
  const bool pass = fr.classification == FactorClass::FiniteHarmonic;
  os << "universal property: does " << psi.name << " (degree " << psi_degree
     << ") factor through " << pc.phi.name << " (degree "
     << pc.phi_certificate.degree << ")?\n";
  Json j;
  j["record"] = "ump";
  j["psi"] = psi.name;
  j["psi_degree"] = psi_degree;
  j["covering"] = pc.phi.name;
  j["covering_degree"] = pc.phi_certificate.degree;
  detail::factor_details(os, j, fr, pc.phi.target);
  if (pass) {
    os << "degree check: " << psi_degree << " = "
       << fr.certificate->degree << " * " << pc.phi_certificate.degree
       << ": "
       << passfail(psi_degree ==
                   fr.certificate->degree * pc.phi_certificate.degree)
       << "\n";
  }
  os << "ump: " << passfail(pass) << "\n";
  j["status"] = passfail(pass);
  r.records.push_back(std::move(j));
  r.text = os.str();
  return r;
}

// ---------------------------------------------------------------------
// prenormality

inline Rendered report_prenormal(const std::string& case_name,
                                 const PrenormalReport& rep) {
  Rendered r;
  std::ostringstream os;
  if (!case_name.empty()) os << "prenormality: " << case_name << "\n";
  detail::TextTable t({"edge", "witnesses"});
  for (const PrenormalRow& row : rep.rows)
    t.add({row.edge_name, row.witness_names.empty()
                              ? std::string("none")
                              : detail::join(row.witness_names, " ")});
  os << t.str();
  os << "prenormal: " << passfail(rep.prenormal) << "\n";
  for (const PrenormalRow& row : rep.rows) {
    Json j;
    j["record"] = "prenormal_edge";
    j["edge"] = row.edge_name;
    j["witnesses"] = row.witness_names;
    j["status"] = passfail(!row.witness_names.empty());
    r.records.push_back(std::move(j));
  }
  Json s;
  s["record"] = "prenormal";
  if (!case_name.empty()) s["case"] = case_name;
  s["edges"] = rep.rows.size();
  s["status"] = passfail(rep.prenormal);
  r.records.push_back(std::move(s));
  r.text = os.str();
  return r;
}

// ---------------------------------------------------------------------
// example description

inline Rendered report_example(const ExampleBundle& b) {
  Rendered r;
  std::ostringstream os;
  os << "example " << b.name << ": " << b.summary << "\n";
  os << "curve " << b.curve().name << ": " << b.curve().vertex_count()
     << " vertices, " << b.curve().edge_count() << " edges\n";
  os << "action " << b.action.name << ": order " << b.action.group.order()
     << "\n";
  for (const auto& [label, sub] : b.marked_subgroups)
    os << "subgroup " << label << ": order " << sub.order() << "\n";
  for (const ExampleAction& a : b.side_actions)
    os << "side action " << a.name << ": order " << a.group.order() << "\n";
  Json j;
  j["record"] = "example";
  j["name"] = b.name;
  j["curve"] = b.curve().name;
  j["action"] = b.action.name;
  j["order"] = b.action.group.order();
  Json subs = Json::object();
  for (const auto& [label, sub] : b.marked_subgroups)
    subs[label] = sub.order();
  j["subgroups"] = subs;
  j["status"] = "pass";
  r.records.push_back(std::move(j));
  r.text = os.str();
  return r;
}

/// Serializes a bundle as a parseable document: the curve, the main
/// action, and every side action.
inline std::string format_example(const ExampleBundle& b) {
  std::string out = "# " + b.name + ": " + b.summary + "\n\n";
  out += format_curve(b.curve());
  out += "\n";
  out += format_action(b.action.name, b.curve(), b.action.generators);
  for (const ExampleAction& a : b.side_actions) {
    out += "\n";
    out += format_action(a.name, b.curve(), a.generators);
  }
  return out;
}

}  // namespace tropcover
