#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tropcover/action.hpp"

namespace tropcover {

// ---------------------------------------------------------------------
// serialization
//
// Line-oriented text formats. A document is a sequence of blocks:
//
//   curve <name>
//   v <id>
//   e <id> <vertex_a> <vertex_b> <length|inf> [infinite_end=a|b]
//
//   morphism <name> <source_curve> <target_curve>
//   degree <d>                # only for edge-free sources
//   vm <v> <v'>
//   em <e> <e'> <deg> [flip]
//
//   action <name> <curve>
//   gen <name>
//   vm <v> <v'>
//   em <e> <e'> <deg> [flip]  # deg must be 1
//
// `#` starts a comment. Rationals are written p/q or as integers.

inline std::string format_curve(const Curve& c) {
  std::ostringstream os;
  os << "curve " << c.name << "\n";
  for (const std::string& v : c.vertex_names) os << "v " << v << "\n";
  for (const Edge& e : c.edges) {
    os << "e " << e.name << " " << c.vertex_names[e.a] << " "
       << c.vertex_names[e.b] << " ";
    if (e.length.is_infinite())
      os << "inf infinite_end=b";
    else
      os << format_rational(e.length.value());
    os << "\n";
  }
  return os.str();
}

inline std::string format_morphism(const MorphismRep& m) {
  std::ostringstream os;
  os << "morphism " << m.name << " " << m.source.name << " " << m.target.name
     << "\n";
  if (m.declared_degree && m.source.edge_count() == 0)
    os << "degree " << *m.declared_degree << "\n";
  for (int v = 0; v < m.source.vertex_count(); ++v)
    os << "vm " << m.source.vertex_names[v] << " "
       << m.target.vertex_names[m.vertex_map[v]] << "\n";
  for (int e = 0; e < m.source.edge_count(); ++e) {
    os << "em " << m.source.edges[e].name << " "
       << m.target.edges[m.edge_map[e]].name << " " << m.edge_degree[e];
    if (m.edge_flip[e]) os << " flip";
    os << "\n";
  }
  return os.str();
}

inline std::string format_action(
    const std::string& name, const Curve& c,
    const std::vector<std::pair<std::string, Automorphism>>& generators) {
  std::ostringstream os;
  os << "action " << name << " " << c.name << "\n";
  for (const auto& [gname, g] : generators) {
    os << "gen " << gname << "\n";
    for (int v = 0; v < c.vertex_count(); ++v)
      os << "vm " << c.vertex_names[v] << " " << c.vertex_names[g.vmap[v]]
         << "\n";
    for (int e = 0; e < c.edge_count(); ++e) {
      os << "em " << c.edges[e].name << " " << c.edges[g.emap[e]].name
         << " 1";
      if (g.eflip[e]) os << " flip";
      os << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------
// parsing

/// An action block as parsed: the generators by name plus the group they
/// generate.
struct NamedAction {
  std::string name;
  Curve curve;
  std::vector<std::pair<std::string, Automorphism>> generators;
  ActionGroup group;
};

struct Document {
  std::vector<Curve> curves;
  std::vector<MorphismRep> morphisms;
  std::vector<NamedAction> actions;

  const Curve* find_curve(const std::string& n) const {
    for (const Curve& c : curves)
      if (c.name == n) return &c;
    return nullptr;
  }
  const MorphismRep* find_morphism(const std::string& n) const {
    for (const MorphismRep& m : morphisms)
      if (m.name == n) return &m;
    return nullptr;
  }
  const NamedAction* find_action(const std::string& n) const {
    for (const NamedAction& a : actions)
      if (a.name == n) return &a;
    return nullptr;
  }
};

namespace detail {

struct Token {
  std::string text;
  int column = 0;  // 1-based
};

inline std::vector<Token> tokenize_line(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != '#' &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    out.push_back(
        Token{line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

class DocumentParser {
 public:
  DocumentParser(const std::string& where, const std::vector<Curve>& known)
      : where_(where), known_(known) {}

  Document run(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    line_no_ = 0;
    while (std::getline(in, line)) {
      ++line_no_;
      std::vector<Token> toks = tokenize_line(line);
      if (toks.empty()) continue;
      dispatch(toks);
    }
    flush_block();
    return std::move(doc_);
  }

 private:
  enum class Block { None, CurveBlock, MorphismBlock, ActionBlock };

  [[noreturn]] void fail(int column, const std::string& msg,
                         Errc code = Errc::ParseError) const {
    throw Error(code, where_ + ":" + std::to_string(line_no_) + ":" +
                          std::to_string(column) + ": " + msg);
  }

  void expect_args(const std::vector<Token>& toks, std::size_t lo,
                   std::size_t hi) const {
    if (toks.size() - 1 < lo || toks.size() - 1 > hi) {
      fail(toks[0].column, "'" + toks[0].text + "' expects " +
                               (lo == hi ? std::to_string(lo)
                                         : std::to_string(lo) + " to " +
                                               std::to_string(hi)) +
                               " argument(s), got " +
                               std::to_string(toks.size() - 1));
    }
  }

  const Curve* lookup_curve(const std::string& n) const {
    if (const Curve* c = doc_.find_curve(n)) return c;
    for (const Curve& c : known_)
      if (c.name == n) return &c;
    return nullptr;
  }

  void dispatch(const std::vector<Token>& toks) {
    const std::string& head = toks[0].text;
    if (head == "curve") {
      flush_block();
      expect_args(toks, 1, 1);
      block_ = Block::CurveBlock;
      header_line_ = line_no_;
      cb_.emplace(toks[1].text);
    } else if (head == "morphism") {
      flush_block();
      expect_args(toks, 3, 3);
      if (doc_.find_morphism(toks[1].text))
        fail(toks[1].column, "duplicate morphism '" + toks[1].text + "'");
      const Curve* src = lookup_curve(toks[2].text);
      if (!src)
        fail(toks[2].column, "unknown curve '" + toks[2].text + "'");
      const Curve* tgt = lookup_curve(toks[3].text);
      if (!tgt)
        fail(toks[3].column, "unknown curve '" + toks[3].text + "'");
      block_ = Block::MorphismBlock;
      header_line_ = line_no_;
      m_ = MorphismRep{};
      m_.name = toks[1].text;
      m_.source = *src;
      m_.target = *tgt;
      m_.vertex_map.assign(m_.source.vertex_count(), -1);
      m_.edge_map.assign(m_.source.edge_count(), -1);
      m_.edge_flip.assign(m_.source.edge_count(), 0);
      m_.edge_degree.assign(m_.source.edge_count(), 0);
    } else if (head == "action") {
      flush_block();
      expect_args(toks, 2, 2);
      for (const NamedAction& a : doc_.actions)
        if (a.name == toks[1].text)
          fail(toks[1].column, "duplicate action '" + toks[1].text + "'");
      const Curve* c = lookup_curve(toks[2].text);
      if (!c) fail(toks[2].column, "unknown curve '" + toks[2].text + "'");
      block_ = Block::ActionBlock;
      header_line_ = line_no_;
      a_ = NamedAction{};
      a_.name = toks[1].text;
      a_.curve = *c;
    } else if (head == "v") {
      if (block_ != Block::CurveBlock)
        fail(toks[0].column, "'v' outside a curve block");
      expect_args(toks, 1, 1);
      wrap_semantic(toks[0].column, [&] { cb_->vertex(toks[1].text); });
    } else if (head == "e") {
      if (block_ != Block::CurveBlock)
        fail(toks[0].column, "'e' outside a curve block");
      expect_args(toks, 4, 5);
      Length len = Length::infinity();
      if (toks[4].text != "inf") {
        Rat r(0);
        wrap_semantic(toks[4].column,
                      [&] { r = parse_rational(toks[4].text); });
        if (r <= Rat(0))
          fail(toks[4].column, "edge length must be positive",
               Errc::NonpositiveLength);
        len = Length::finite(r);
      }
      char tag = 0;
      if (toks.size() == 6) {
        if (toks[5].text == "infinite_end=a")
          tag = 'a';
        else if (toks[5].text == "infinite_end=b")
          tag = 'b';
        else
          fail(toks[5].column,
               "expected infinite_end=a or infinite_end=b, got '" +
                   toks[5].text + "'");
      }
      wrap_semantic(toks[0].column, [&] {
        cb_->edge(toks[1].text, toks[2].text, toks[3].text, len, tag);
      });
    } else if (head == "degree") {
      if (block_ != Block::MorphismBlock)
        fail(toks[0].column, "'degree' outside a morphism block");
      expect_args(toks, 1, 1);
      m_.declared_degree = parse_ll(toks[1]);
    } else if (head == "vm") {
      if (block_ == Block::MorphismBlock) {
        expect_args(toks, 2, 2);
        int v = need_vertex(m_.source, toks[1]);
        int w = need_vertex(m_.target, toks[2]);
        if (m_.vertex_map[v] >= 0)
          fail(toks[1].column,
               "duplicate image for vertex '" + toks[1].text + "'");
        m_.vertex_map[v] = w;
      } else if (block_ == Block::ActionBlock) {
        require_gen(toks[0].column);
        expect_args(toks, 2, 2);
        int v = need_vertex(a_.curve, toks[1]);
        int w = need_vertex(a_.curve, toks[2]);
        Automorphism& g = a_.generators.back().second;
        if (g.vmap[v] >= 0)
          fail(toks[1].column,
               "duplicate image for vertex '" + toks[1].text + "'");
        g.vmap[v] = w;
      } else {
        fail(toks[0].column, "'vm' outside a morphism or action block");
      }
    } else if (head == "em") {
      if (block_ == Block::MorphismBlock) {
        expect_args(toks, 3, 4);
        int e = need_edge(m_.source, toks[1]);
        int f = need_edge(m_.target, toks[2]);
        if (m_.edge_map[e] >= 0)
          fail(toks[1].column,
               "duplicate image for edge '" + toks[1].text + "'");
        m_.edge_map[e] = f;
        m_.edge_degree[e] = parse_ll(toks[3]);
        if (toks.size() == 5) {
          if (toks[4].text != "flip")
            fail(toks[4].column, "expected 'flip', got '" + toks[4].text + "'");
          m_.edge_flip[e] = 1;
        }
      } else if (block_ == Block::ActionBlock) {
        require_gen(toks[0].column);
        expect_args(toks, 3, 4);
        int e = need_edge(a_.curve, toks[1]);
        int f = need_edge(a_.curve, toks[2]);
        Automorphism& g = a_.generators.back().second;
        if (g.emap[e] >= 0)
          fail(toks[1].column,
               "duplicate image for edge '" + toks[1].text + "'");
        g.emap[e] = f;
        if (parse_ll(toks[3]) != 1)
          fail(toks[3].column, "action generators must have dilation 1");
        if (toks.size() == 5) {
          if (toks[4].text != "flip")
            fail(toks[4].column, "expected 'flip', got '" + toks[4].text + "'");
          g.eflip[e] = 1;
        }
      } else {
        fail(toks[0].column, "'em' outside a morphism or action block");
      }
    } else if (head == "gen") {
      if (block_ != Block::ActionBlock)
        fail(toks[0].column, "'gen' outside an action block");
      expect_args(toks, 1, 1);
      finish_generator();
      Automorphism g;
      g.vmap.assign(a_.curve.vertex_count(), -1);
      g.emap.assign(a_.curve.edge_count(), -1);
      g.eflip.assign(a_.curve.edge_count(), 0);
      a_.generators.emplace_back(toks[1].text, std::move(g));
      gen_line_ = line_no_;
    } else {
      fail(toks[0].column, "unknown directive '" + head + "'");
    }
  }

  int need_vertex(const Curve& c, const Token& t) const {
    int v = c.find_vertex(t.text);
    if (v < 0)
      fail(t.column,
           "unknown vertex '" + t.text + "' on curve '" + c.name + "'");
    return v;
  }

  int need_edge(const Curve& c, const Token& t) const {
    int e = c.find_edge(t.text);
    if (e < 0)
      fail(t.column, "unknown edge '" + t.text + "' on curve '" + c.name +
                         "'");
    return e;
  }

  long long parse_ll(const Token& t) const {
    try {
      std::size_t used = 0;
      long long v = std::stoll(t.text, &used);
      if (used != t.text.size()) throw std::invalid_argument(t.text);
      return v;
    } catch (...) {
      fail(t.column, "bad integer '" + t.text + "'");
    }
  }

  // semantic errors keep their own code, gaining only a location prefix
  template <typename F>
  void wrap_semantic(int column, F&& body) const {
    try {
      body();
    } catch (const Error& err) {
      fail(column, err.what(), err.code());
    }
  }

  void require_gen(int column) const {
    if (a_.generators.empty())
      fail(column, "expected 'gen <name>' before generator entries");
  }

  void finish_generator() {
    if (a_.generators.empty()) return;
    auto& [gname, g] = a_.generators.back();
    for (int v = 0; v < a_.curve.vertex_count(); ++v)
      if (g.vmap[v] < 0)
        semantic_fail(gen_line_, "generator '" + gname +
                                     "' misses vertex '" +
                                     a_.curve.vertex_names[v] + "'");
    for (int e = 0; e < a_.curve.edge_count(); ++e)
      if (g.emap[e] < 0)
        semantic_fail(gen_line_, "generator '" + gname + "' misses edge '" +
                                     a_.curve.edges[e].name + "'");
    try {
      validate_automorphism(a_.curve, g);
    } catch (const Error& err) {
      semantic_fail(gen_line_, "generator '" + gname + "': " + err.what(),
                    err.code());
    }
  }

  [[noreturn]] void semantic_fail(int line, const std::string& msg,
                                  Errc code = Errc::ParseError) const {
    throw Error(code, where_ + ":" + std::to_string(line) + ": " + msg);
  }

  void flush_block() {
    switch (block_) {
      case Block::None:
        break;
      case Block::CurveBlock: {
        std::optional<Curve> maybe;
        try {
          maybe.emplace(cb_->build());
        } catch (const Error& err) {
          semantic_fail(header_line_, err.what(), err.code());
        }
        Curve& built = *maybe;
        // a byte-identical re-declaration (e.g. the same curve emitted
        // into two files) is harmless; only conflicting ones are errors
        if (const Curve* prior = lookup_curve(built.name)) {
          if (!(*prior == built))
            semantic_fail(header_line_,
                          "curve '" + built.name +
                              "' conflicts with an earlier definition",
                          Errc::DuplicateName);
        } else {
          doc_.curves.push_back(std::move(*maybe));
        }
        cb_.reset();
        break;
      }
      case Block::MorphismBlock: {
        for (int v = 0; v < m_.source.vertex_count(); ++v)
          if (m_.vertex_map[v] < 0)
            semantic_fail(header_line_,
                          "morphism '" + m_.name + "' misses vertex '" +
                              m_.source.vertex_names[v] + "'");
        for (int e = 0; e < m_.source.edge_count(); ++e)
          if (m_.edge_map[e] < 0)
            semantic_fail(header_line_, "morphism '" + m_.name +
                                            "' misses edge '" +
                                            m_.source.edges[e].name + "'");
        try {
          require_finite_morphism(m_);
        } catch (const Error& err) {
          semantic_fail(header_line_, err.what(), err.code());
        }
        doc_.morphisms.push_back(std::move(m_));
        break;
      }
      case Block::ActionBlock: {
        finish_generator();
        std::vector<Automorphism> gens;
        for (const auto& [gname, g] : a_.generators) gens.push_back(g);
        try {
          a_.group = generate_group(a_.curve, gens);
        } catch (const Error& err) {
          semantic_fail(header_line_, err.what(), err.code());
        }
        doc_.actions.push_back(std::move(a_));
        break;
      }
    }
    block_ = Block::None;
  }

  std::string where_;
  const std::vector<Curve>& known_;
  Document doc_;
  Block block_ = Block::None;
  int line_no_ = 0;
  int header_line_ = 0;
  int gen_line_ = 0;
  std::optional<CurveBuilder> cb_;
  MorphismRep m_;
  NamedAction a_;
};

}  // namespace detail

inline Document parse_document(const std::string& text,
                               const std::string& where = "<input>",
                               const std::vector<Curve>& known = {}) {
  return detail::DocumentParser(where, known).run(text);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::ParseError, "cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(Errc::ParseError, "cannot write file '" + path + "'");
  out << content;
  if (!out.flush())
    throw Error(Errc::ParseError, "failed writing file '" + path + "'");
}

}  // namespace tropcover
