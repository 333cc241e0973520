// Command-line front end. Every command reads plain-text documents
// (curves, morphisms, actions), runs one analysis, and prints a report
// as text or JSON-lines records. Exit status: 0 when the mathematical
// verdict is positive, 1 when it is negative, 2 on input errors.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tropcover/tropcover.hpp"

namespace {

using namespace tropcover;

struct Options {
  int jobs = 1;
  std::string format = "text";
  std::string emit;
  std::string dot;
  std::vector<std::string> files;
  std::string action;
  std::string covering;
  std::string psi;
  std::string psi_quotient;
  std::string curve;
  std::string morphism;
  std::string example_name;
  std::vector<std::string> params;
};

// negative mathematical verdicts exit 1; everything else is an input or
// operational error and exits 2
int exit_code_for(Errc c) {
  switch (c) {
    case Errc::NotInvariant:
    case Errc::PsiNotInvariant:
    case Errc::NotGaloisCovering:
    case Errc::PhiNotNormal:
    case Errc::PsiNotInAPrime:
    case Errc::NotFiniteHarmonic:
    case Errc::CompositionMismatch:
    case Errc::NotNormal:
      return 1;
    default:
      return 2;
  }
}

Document load_documents(const std::vector<std::string>& files) {
  if (files.empty())
    throw Error(Errc::ParseError, "no input files given");
  Document all;
  for (const std::string& f : files) {
    Document d = parse_document(read_text_file(f), f, all.curves);
    for (Curve& c : d.curves) all.curves.push_back(std::move(c));
    for (MorphismRep& m : d.morphisms) {
      if (all.find_morphism(m.name))
        throw Error(Errc::DuplicateName,
                    f + ": duplicate morphism '" + m.name + "'");
      all.morphisms.push_back(std::move(m));
    }
    for (NamedAction& a : d.actions) {
      if (all.find_action(a.name))
        throw Error(Errc::DuplicateName,
                    f + ": duplicate action '" + a.name + "'");
      all.actions.push_back(std::move(a));
    }
  }
  return all;
}

const NamedAction& pick_action(const Document& doc, const std::string& name) {
  if (!name.empty()) {
    if (const NamedAction* a = doc.find_action(name)) return *a;
    throw Error(Errc::UnknownReference, "no action named '" + name + "'");
  }
  if (doc.actions.empty())
    throw Error(Errc::UnknownReference, "the input contains no action");
  if (doc.actions.size() > 1)
    throw Error(Errc::UnknownReference,
                "the input contains several actions; pick one with --action");
  return doc.actions.front();
}

const MorphismRep& pick_morphism(const Document& doc,
                                 const std::string& name) {
  if (const MorphismRep* m = doc.find_morphism(name)) return *m;
  throw Error(Errc::UnknownReference, "no morphism named '" + name + "'");
}

const Curve& pick_curve(const Document& doc, const std::string& name) {
  if (!name.empty()) {
    if (const Curve* c = doc.find_curve(name)) return *c;
    throw Error(Errc::UnknownReference, "no curve named '" + name + "'");
  }
  if (doc.curves.empty())
    throw Error(Errc::UnknownReference, "the input contains no curve");
  if (doc.curves.size() > 1)
    throw Error(Errc::UnknownReference,
                "the input contains several curves; pick one with --curve");
  return doc.curves.front();
}

// prints the report in the chosen format; --emit duplicates it to a file
void deliver(const Options& opt, const Rendered& r) {
  const std::string payload =
      opt.format == "records" ? to_jsonl(r.records) : r.text;
  std::cout << payload;
  if (!opt.emit.empty()) write_text_file(opt.emit, payload);
}

void deliver_dot(const Options& opt, const std::string& dot) {
  if (!opt.dot.empty()) write_text_file(opt.dot, dot);
}

// the default covering of an action is its own quotient projection
PreparedCovering default_covering(const NamedAction& a) {
  return projection_covering(a.group, "Q_" + a.name);
}

int cmd_validate(const Options& opt) {
  Document doc = load_documents(opt.files);
  deliver(opt, report_validate(doc));
  if (!opt.dot.empty() && !doc.curves.empty())
    deliver_dot(opt, to_dot(doc.curves.front()));
  return 0;
}

int cmd_quotient(const Options& opt) {
  Document doc = load_documents(opt.files);
  const NamedAction& a = pick_action(doc, opt.action);
  PreparedQuotient pq = quotient(a.group, "Q_" + a.name);
  Rendered r = report_quotient(a.name, pq);
  const std::string payload =
      opt.format == "records" ? to_jsonl(r.records) : r.text;
  std::cout << payload;
  if (!opt.emit.empty()) write_text_file(opt.emit, format_curve(pq.result.quotient));
  deliver_dot(opt, to_dot(pq.result.quotient));
  return 0;
}

int cmd_classify(const Options& opt) {
  Document doc = load_documents(opt.files);
  const NamedAction& a = pick_action(doc, opt.action);

  if (!opt.psi.empty()) {
    // intermediate-covering analysis under a Galois base covering
    const MorphismRep& psi = pick_morphism(doc, opt.psi);
    IntermediateVerdict v;
    std::string phi_name;
    if (!opt.covering.empty()) {
      const MorphismRep& phi = pick_morphism(doc, opt.covering);
      phi_name = phi.name;
      v = intermediate_analysis(a.group, phi, psi);
    } else {
      detail::JointPreparation joint =
          detail::prepare_with_morphisms(a.group, {&psi});
      PreparedCovering pc;
      QuotientResult q =
          quotient_on_model(joint.prepared.group,
                            full_subgroup(joint.prepared.group), "Q_" + a.name);
      pc.prepared = std::move(joint.prepared);
      pc.phi = std::move(q.projection);
      pc.phi_certificate = q.certificate;
      phi_name = pc.phi.name;
      v = intermediate_analysis_prepared(pc, joint.transported[0]);
    }
    deliver(opt, report_intermediate(phi_name, psi.name, a.group, v));
    return v.consistent ? 0 : 1;
  }

  PreparedCovering pc;
  if (!opt.covering.empty())
    pc = prepare_covering(a.group, pick_morphism(doc, opt.covering));
  else
    pc = default_covering(a);
  CoveringClassification cls = classify_covering_prepared(
      pc, full_subgroup(pc.prepared.group), "Q_" + a.name);
  deliver(opt, report_classify(pc.phi.name, a.name, "G", cls));
  deliver_dot(opt, to_dot(pc.phi.source, &pc.phi));
  return cls.galois ? 0 : 1;
}

int cmd_correspondence(const Options& opt) {
  Document doc = load_documents(opt.files);
  const NamedAction& a = pick_action(doc, opt.action);
  PreparedCovering pc;
  if (!opt.covering.empty())
    pc = prepare_covering(a.group, pick_morphism(doc, opt.covering));
  else
    pc = default_covering(a);
  CorrespondenceReport rep = galois_correspondence(pc, opt.jobs);
  deliver(opt, report_correspondence(pc.phi.name, rep));
  deliver_dot(opt, correspondence_dot(rep));
  return rep.all_ok ? 0 : 1;
}

int cmd_ump(const Options& opt) {
  Document doc = load_documents(opt.files);
  const NamedAction& a = pick_action(doc, opt.action);
  if (opt.psi.empty() == opt.psi_quotient.empty())
    throw Error(Errc::ParseError,
                "ump needs exactly one of --psi or --psi-quotient");

  PreparedCovering pc;
  MorphismRep psi;
  long long psi_degree = 0;

  if (!opt.psi_quotient.empty()) {
    // psi is the projection of a second group acting on the same curve
    const NamedAction* k = doc.find_action(opt.psi_quotient);
    if (!k)
      throw Error(Errc::UnknownReference,
                  "no action named '" + opt.psi_quotient + "'");
    if (!opt.covering.empty())
      throw Error(Errc::ParseError,
                  "--psi-quotient always tests the quotient projection; "
                  "--covering cannot be combined with it");
    CoPreparation co = co_prepare({&a.group, &k->group});
    pc.prepared.refinement = co.refinement;
    pc.prepared.group = co.groups[0];
    QuotientResult qg = quotient_on_model(
        co.groups[0], full_subgroup(co.groups[0]), "Q_" + a.name);
    pc.phi = std::move(qg.projection);
    pc.phi_certificate = qg.certificate;
    QuotientResult qk = quotient_on_model(
        co.groups[1], full_subgroup(co.groups[1]), "Q_" + k->name);
    psi = std::move(qk.projection);
    psi_degree = qk.degree;
  } else {
    const MorphismRep& raw_psi = pick_morphism(doc, opt.psi);
    if (!opt.covering.empty()) {
      const MorphismRep& phi = pick_morphism(doc, opt.covering);
      for (int i = 1; i < a.group.order(); ++i) {
        MorphismRep moved = compose_on_model(
            phi, as_morphism(a.group.curve, a.group.elements[i]));
        if (!same_map(moved, phi))
          throw Error(Errc::NotInvariant,
                      "'" + phi.name + "' o " + element_label(a.group, i) +
                          " differs from '" + phi.name + "'");
      }
      detail::JointPreparation joint =
          detail::prepare_with_morphisms(a.group, {&phi, &raw_psi});
      pc.prepared = std::move(joint.prepared);
      pc.phi = std::move(joint.transported[0]);
      pc.phi_certificate = check_harmonic(pc.phi);
      psi = std::move(joint.transported[1]);
    } else {
      detail::JointPreparation joint =
          detail::prepare_with_morphisms(a.group, {&raw_psi});
      QuotientResult q =
          quotient_on_model(joint.prepared.group,
                            full_subgroup(joint.prepared.group), "Q_" + a.name);
      pc.prepared = std::move(joint.prepared);
      pc.phi = std::move(q.projection);
      pc.phi_certificate = q.certificate;
      psi = std::move(joint.transported[0]);
    }
    psi_degree = check_harmonic(psi).degree;
  }

  FactorResult fr = ump_check_prepared(pc, psi);
  deliver(opt, report_ump(pc, psi, psi_degree, fr));
  deliver_dot(opt, to_dot(psi.source, &psi));
  return fr.classification == FactorClass::FiniteHarmonic ? 0 : 1;
}

int cmd_example(const Options& opt) {
  ExampleBundle b = make_example(opt.example_name, opt.params);
  const std::string document = format_example(b);
  Rendered r = report_example(b);
  if (opt.format == "records") {
    std::cout << to_jsonl(r.records);
    if (!opt.emit.empty()) write_text_file(opt.emit, document);
  } else if (!opt.emit.empty()) {
    write_text_file(opt.emit, document);
    std::cout << r.text;
  } else {
    std::cout << document;
  }
  deliver_dot(opt, to_dot(b.curve()));
  return 0;
}

int cmd_export_dot(const Options& opt) {
  Document doc = load_documents(opt.files);
  std::string dot;
  if (!opt.morphism.empty()) {
    const MorphismRep& m = pick_morphism(doc, opt.morphism);
    dot = to_dot(m.source, &m);
  } else {
    dot = to_dot(pick_curve(doc, opt.curve));
  }
  if (opt.dot.empty())
    std::cout << dot;
  else
    write_text_file(opt.dot, dot);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact analysis of finite harmonic coverings of tropical curves"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--jobs", opt.jobs, "worker threads for heavy sweeps")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"text", "records"}));
  app.add_option("--emit", opt.emit, "also write the main artifact here");
  app.add_option("--dot", opt.dot, "write a Graphviz drawing here");

  const auto add_files = [&](CLI::App* sub, bool required = true) {
    auto* o = sub->add_option("files", opt.files, "input documents");
    if (required) o->required();
    sub->fallthrough();
  };

  CLI::App* validate =
      app.add_subcommand("validate", "parse inputs and report their shape");
  add_files(validate);

  CLI::App* quot =
      app.add_subcommand("quotient", "quotient a curve by an acting group");
  add_files(quot);
  quot->add_option("--action", opt.action, "which action to use");

  CLI::App* classify = app.add_subcommand(
      "classify", "preGalois / Galois / normal classification");
  add_files(classify);
  classify->add_option("--action", opt.action, "which action to use");
  classify->add_option("--covering", opt.covering,
                       "covering morphism (default: quotient projection)");
  classify->add_option("--psi", opt.psi,
                       "analyse this intermediate covering instead");

  CLI::App* corr = app.add_subcommand(
      "correspondence", "check the Galois correspondence over all subgroups");
  add_files(corr);
  corr->add_option("--action", opt.action, "which action to use");
  corr->add_option("--covering", opt.covering,
                   "covering morphism (default: quotient projection)");

  CLI::App* ump = app.add_subcommand(
      "ump", "factor an invariant morphism through the covering");
  add_files(ump);
  ump->add_option("--action", opt.action, "which action to use");
  ump->add_option("--covering", opt.covering,
                  "covering morphism (default: quotient projection)");
  ump->add_option("--psi", opt.psi, "morphism to factor");
  ump->add_option("--psi-quotient", opt.psi_quotient,
                  "factor the projection of this second action");

  CLI::App* example =
      app.add_subcommand("example", "write a ready-made instance");
  example->add_option("name", opt.example_name, "example name")->required();
  example->add_option("params", opt.params, "example parameters");
  example->fallthrough();

  CLI::App* exdot =
      app.add_subcommand("export-dot", "draw a curve or a covering");
  add_files(exdot);
  exdot->add_option("--curve", opt.curve, "which curve to draw");
  exdot->add_option("--morphism", opt.morphism,
                    "draw its source with fiber colours");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (quot->parsed()) return cmd_quotient(opt);
    if (classify->parsed()) return cmd_classify(opt);
    if (corr->parsed()) return cmd_correspondence(opt);
    if (ump->parsed()) return cmd_ump(opt);
    if (example->parsed()) return cmd_example(opt);
    if (exdot->parsed()) return cmd_export_dot(opt);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err.code());
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
