#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tropcover/curve.hpp"
#include "tropcover/refine.hpp"

namespace tropcover {

/// A finite morphism presented on models: vertices to vertices, every
/// source edge mapped onto a target edge with an integer dilation factor.
/// flip records whether the edge orientation is reversed. The target edge
/// must satisfy l(f) = deg_e * l(e).
///
/// declared_degree covers the degenerate case of two one-point curves,
/// where no edge carries the degree.
struct MorphismRep {
  std::string name;
  Curve source;
  Curve target;
  std::vector<VertexId> vertex_map;
  std::vector<EdgeId> edge_map;
  std::vector<char> edge_flip;
  std::vector<long long> edge_degree;
  std::optional<long long> declared_degree;
};

struct MorphismIssue {
  EdgeId edge;  // -1 for global problems
  std::string message;
};

struct MorphismCheck {
  bool ok = true;
  std::vector<MorphismIssue> issues;
};

/// Structural validation of a morphism representation; reports every
/// violation instead of stopping at the first.
inline MorphismCheck check_finite_morphism(const MorphismRep& m) {
  MorphismCheck out;
  auto flag = [&](EdgeId e, const std::string& msg) {
    out.ok = false;
    out.issues.push_back(MorphismIssue{e, msg});
  };
  const int sv = m.source.vertex_count(), se = m.source.edge_count();
  if (static_cast<int>(m.vertex_map.size()) != sv ||
      static_cast<int>(m.edge_map.size()) != se ||
      static_cast<int>(m.edge_flip.size()) != se ||
      static_cast<int>(m.edge_degree.size()) != se) {
    flag(-1, "map tables sized for a different curve");
    return out;
  }
  for (int v = 0; v < sv; ++v)
    if (m.vertex_map[v] < 0 || m.vertex_map[v] >= m.target.vertex_count()) {
      flag(-1, "vertex " + m.source.vertex_names[v] + " has no image");
      return out;
    }
  if (m.declared_degree) {
    if (se != 0 || m.target.edge_count() != 0)
      flag(-1, "declared degree is only for one-point curves");
    else if (*m.declared_degree < 1)
      flag(-1, "declared degree must be positive");
  } else if (se == 0 && m.target.edge_count() == 0 && sv > 0) {
    flag(-1, "one-point to one-point morphism needs a declared degree");
  }
  for (int e = 0; e < se; ++e) {
    const Edge& src = m.source.edges[e];
    if (m.edge_map[e] < 0 || m.edge_map[e] >= m.target.edge_count()) {
      flag(e, "edge " + src.name + " has no image edge");
      continue;
    }
    const Edge& dst = m.target.edges[m.edge_map[e]];
    const bool flip = m.edge_flip[e] != 0;
    if (m.edge_degree[e] < 1)
      flag(e, "edge " + src.name + " has nonpositive dilation");
    if (src.length.is_infinite() != dst.length.is_infinite()) {
      flag(e, "edge " + src.name + " maps between finite and infinite");
    } else if (src.length.is_infinite()) {
      if (flip)
        flag(e, "infinite edge " + src.name + " cannot reverse orientation");
    } else if (dst.length.value() !=
               src.length.value() * Rat(m.edge_degree[e])) {
      flag(e, "edge " + src.name + ": target length " + dst.length.str() +
                  " != " + std::to_string(m.edge_degree[e]) + " * " +
                  src.length.str());
    }
    VertexId ia = flip ? dst.b : dst.a;
    VertexId ib = flip ? dst.a : dst.b;
    if (m.vertex_map[src.a] != ia || m.vertex_map[src.b] != ib)
      flag(e, "edge " + src.name + " endpoints disagree with vertex map");
  }
  return out;
}

inline void require_finite_morphism(const MorphismRep& m) {
  MorphismCheck c = check_finite_morphism(m);
  if (!c.ok)
    throw Error(Errc::NotAMorphism,
                "morphism '" + m.name + "': " + c.issues.front().message);
}

/// Image of a point. Interior points stay interior since the map is a
/// dilation by edge_degree on each edge.
inline Point apply(const MorphismRep& m, const Point& p) {
  if (p.is_vertex()) return Point::at_vertex(m.vertex_map[p.id]);
  require_point(m.source, p);
  EdgeId f = m.edge_map[p.id];
  Rat s = p.offset * Rat(m.edge_degree[p.id]);
  if (m.edge_flip[p.id]) s = m.target.edges[f].length.value() - s;
  return Point::interior(f, s);
}

/// Witness that a finite morphism is harmonic: local degrees at every
/// source vertex and the global degree they sum to over each fiber.
struct HarmonicCertificate {
  std::vector<long long> vertex_degree;
  long long degree = 0;
};

/// Harmonicity test. A target half-edge at phi(v) must receive the same
/// total dilation from every choice; fibers of target vertices must carry
/// the same total local degree.
inline std::optional<HarmonicCertificate> try_harmonic(
    const MorphismRep& m, std::string* why = nullptr) {
  require_finite_morphism(m);
  const auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return std::nullopt;
  };
  HarmonicCertificate cert;
  cert.vertex_degree.assign(m.source.vertex_count(), 0);

  // target half-edges at each target vertex: (edge, at_a_end)
  struct Half {
    EdgeId e;
    bool at_a;
  };
  std::vector<std::vector<Half>> target_halves(m.target.vertex_count());
  for (int f = 0; f < m.target.edge_count(); ++f) {
    target_halves[m.target.edges[f].a].push_back(Half{f, true});
    target_halves[m.target.edges[f].b].push_back(Half{f, false});
  }
  std::vector<std::vector<Half>> source_halves(m.source.vertex_count());
  for (int e = 0; e < m.source.edge_count(); ++e) {
    source_halves[m.source.edges[e].a].push_back(Half{e, true});
    source_halves[m.source.edges[e].b].push_back(Half{e, false});
  }

  for (int v = 0; v < m.source.vertex_count(); ++v) {
    VertexId w = m.vertex_map[v];
    if (target_halves[w].empty()) {
      // one-point target; the declared degree rules
      cert.vertex_degree[v] = m.declared_degree.value_or(1);
      continue;
    }
    bool first = true;
    long long dv = 0;
    for (const Half& th : target_halves[w]) {
      long long sum = 0;
      for (const Half& sh : source_halves[v]) {
        if (m.edge_map[sh.e] != th.e) continue;
        // the a-end of sh.e lands at the a-end of its image unless flipped
        bool lands_at_a = sh.at_a != (m.edge_flip[sh.e] != 0);
        if (lands_at_a == th.at_a) sum += m.edge_degree[sh.e];
      }
      if (first) {
        dv = sum;
        first = false;
      } else if (sum != dv) {
        std::ostringstream os;
        os << "not harmonic at " << m.source.vertex_names[v]
           << ": half-edge sums differ (" << dv << " vs " << sum << " at "
           << m.target.edges[th.e].name << ")";
        return fail(os.str());
      }
    }
    if (dv <= 0) {
      return fail("not harmonic at " + m.source.vertex_names[v] +
                  ": local degree " + std::to_string(dv));
    }
    cert.vertex_degree[v] = dv;
  }

  // fibers of target vertices must sum to one global degree
  long long deg = -1;
  for (int w = 0; w < m.target.vertex_count(); ++w) {
    long long sum = 0;
    for (int v = 0; v < m.source.vertex_count(); ++v)
      if (m.vertex_map[v] == w) sum += cert.vertex_degree[v];
    if (deg < 0) {
      deg = sum;
    } else if (sum != deg) {
      return fail("fiber over " + m.target.vertex_names[w] + " has degree " +
                  std::to_string(sum) + ", expected " + std::to_string(deg));
    }
    if (sum == 0)
      return fail("fiber over " + m.target.vertex_names[w] + " is empty");
  }
  cert.degree = deg;
  return cert;
}

inline HarmonicCertificate check_harmonic(const MorphismRep& m) {
  std::string why;
  auto cert = try_harmonic(m, &why);
  if (!cert) throw Error(Errc::NotFiniteHarmonic, "morphism '" + m.name + "': " + why);
  return *cert;
}

inline long long degree_of(const MorphismRep& m) {
  return check_harmonic(m).degree;
}

inline MorphismRep identity_morphism(const Curve& c) {
  MorphismRep m;
  m.name = "id";
  m.source = c;
  m.target = c;
  m.vertex_map.resize(c.vertex_count());
  for (int v = 0; v < c.vertex_count(); ++v) m.vertex_map[v] = v;
  m.edge_map.resize(c.edge_count());
  for (int e = 0; e < c.edge_count(); ++e) m.edge_map[e] = e;
  m.edge_flip.assign(c.edge_count(), 0);
  m.edge_degree.assign(c.edge_count(), 1);
  if (c.edge_count() == 0) m.declared_degree = 1;
  return m;
}

/// Composition when the middle models literally coincide. The general
/// composition that aligns models first lives in align.hpp.
inline MorphismRep compose_on_model(const MorphismRep& outer,
                                    const MorphismRep& inner) {
  if (!(inner.target == outer.source))
    throw Error(Errc::IncompatibleMiddleCurve,
                "compose: middle models differ ('" + inner.name + "' into '" +
                    outer.name + "')");
  MorphismRep m;
  m.name = outer.name + "*" + inner.name;
  m.source = inner.source;
  m.target = outer.target;
  m.vertex_map.reserve(inner.vertex_map.size());
  for (VertexId v : inner.vertex_map)
    m.vertex_map.push_back(outer.vertex_map[v]);
  const int se = inner.source.edge_count();
  m.edge_map.resize(se);
  m.edge_flip.resize(se);
  m.edge_degree.resize(se);
  for (int e = 0; e < se; ++e) {
    EdgeId mid = inner.edge_map[e];
    m.edge_map[e] = outer.edge_map[mid];
    m.edge_flip[e] =
        static_cast<char>((inner.edge_flip[e] != 0) != (outer.edge_flip[mid] != 0));
    m.edge_degree[e] = inner.edge_degree[e] * outer.edge_degree[mid];
  }
  if (inner.declared_degree && outer.declared_degree)
    m.declared_degree = *inner.declared_degree * *outer.declared_degree;
  return m;
}

/// Restriction equality on one closed edge: do two morphisms with the same
/// source model agree pointwise on e? Edge image, orientation and dilation
/// determine the restriction completely.
inline bool agree_on_edge(const MorphismRep& m1, const MorphismRep& m2,
                          EdgeId e) {
  return m1.edge_map[e] == m2.edge_map[e] &&
         (m1.edge_flip[e] != 0) == (m2.edge_flip[e] != 0) &&
         m1.edge_degree[e] == m2.edge_degree[e];
}

inline bool same_map(const MorphismRep& m1, const MorphismRep& m2) {
  if (!(m1.source == m2.source) || !(m1.target == m2.target)) return false;
  if (m1.vertex_map != m2.vertex_map) return false;
  for (int e = 0; e < m1.source.edge_count(); ++e)
    if (!agree_on_edge(m1, m2, e)) return false;
  return m1.declared_degree.value_or(1) == m2.declared_degree.value_or(1);
}

/// Outcome ladder for factoring one morphism through another. Each level
/// includes the previous ones.
enum class FactorClass {
  NotWellDefined,   // psi is not constant on the fibers of pi
  ContinuousOnly,   // a continuous factor exists but some dilation ratio
                    // is not an integer
  FiniteMorphism,   // integral dilations, but not harmonic
  FiniteHarmonic,
};

inline const char* factor_class_name(FactorClass c) {
  switch (c) {
    case FactorClass::NotWellDefined: return "NotWellDefined";
    case FactorClass::ContinuousOnly: return "ContinuousOnly";
    case FactorClass::FiniteMorphism: return "FiniteMorphism";
    case FactorClass::FiniteHarmonic: return "FiniteHarmonic";
  }
  return "?";
}

struct FactorResult {
  FactorClass classification = FactorClass::NotWellDefined;
  std::string witness;              // set when NotWellDefined
  std::vector<Rat> edge_scale;      // per target(pi) edge, when defined
  std::optional<MorphismRep> theta;  // from FiniteMorphism upward
  std::optional<HarmonicCertificate> certificate;  // FiniteHarmonic only
};

/// Factors psi through pi: searches for theta with psi = theta o pi. Both
/// morphisms must be given on one shared source model; pi must be finite
/// harmonic (it is re-checked here). The factor exists as a set map iff psi
/// is constant on every pi-fiber, which is what is tested edge by edge.
inline FactorResult factor_through(const MorphismRep& psi,
                                   const MorphismRep& pi) {
  if (!(psi.source == pi.source))
    throw Error(Errc::SourceModelMismatch,
                "factor_through: '" + psi.name + "' and '" + pi.name +
                    "' are presented on different source models");
  require_finite_morphism(psi);
  require_finite_morphism(pi);
  check_harmonic(pi);

  FactorResult out;
  const Curve& mid = pi.target;

  // vertex level
  std::vector<VertexId> theta_v(mid.vertex_count(), -1);
  std::vector<VertexId> sample(mid.vertex_count(), -1);
  for (int v = 0; v < pi.source.vertex_count(); ++v) {
    VertexId w = pi.vertex_map[v];
    if (theta_v[w] < 0) {
      theta_v[w] = psi.vertex_map[v];
      sample[w] = v;
    } else if (theta_v[w] != psi.vertex_map[v]) {
      out.witness = "vertices " + pi.source.vertex_names[sample[w]] + " and " +
                    pi.source.vertex_names[v] + " share the fiber over " +
                    mid.vertex_names[w] + " but have different images";
      return out;
    }
  }

  // edge level: image edge, relative orientation and dilation ratio must
  // agree across each fiber
  std::vector<EdgeId> theta_e(mid.edge_count(), -1);
  std::vector<char> theta_flip(mid.edge_count(), 0);
  out.edge_scale.assign(mid.edge_count(), Rat(0));
  std::vector<EdgeId> esample(mid.edge_count(), -1);
  for (int e = 0; e < pi.source.edge_count(); ++e) {
    EdgeId f = pi.edge_map[e];
    EdgeId img = psi.edge_map[e];
    char rflip =
        static_cast<char>((psi.edge_flip[e] != 0) != (pi.edge_flip[e] != 0));
    Rat scale(psi.edge_degree[e], pi.edge_degree[e]);
    if (theta_e[f] < 0) {
      theta_e[f] = img;
      theta_flip[f] = rflip;
      out.edge_scale[f] = scale;
      esample[f] = e;
    } else if (theta_e[f] != img || theta_flip[f] != rflip ||
               out.edge_scale[f] != scale) {
      out.witness = "edges " + pi.source.edges[esample[f]].name + " and " +
                    pi.source.edges[e].name + " share the fiber over " +
                    mid.edges[f].name + " but induce different factors";
      return out;
    }
  }
  for (int f = 0; f < mid.edge_count(); ++f)
    ensure(theta_e[f] >= 0, "factor_through: pi misses edge " +
                                mid.edges[f].name);

  // endpoint compatibility holds automatically for fiber-consistent data;
  // verified below through the morphism validator
  bool integral = true;
  for (int f = 0; f < mid.edge_count(); ++f)
    if (out.edge_scale[f].denominator() != 1) integral = false;
  if (!integral) {
    out.classification = FactorClass::ContinuousOnly;
    return out;
  }

  MorphismRep theta;
  theta.name = psi.name + "/" + pi.name;
  theta.source = mid;
  theta.target = psi.target;
  theta.vertex_map = theta_v;
  theta.edge_map = theta_e;
  theta.edge_flip = theta_flip;
  theta.edge_degree.reserve(mid.edge_count());
  for (int f = 0; f < mid.edge_count(); ++f)
    theta.edge_degree.push_back(out.edge_scale[f].numerator());
  if (mid.edge_count() == 0 && psi.target.edge_count() == 0) {
    long long dpsi = psi.declared_degree.value_or(1);
    long long dpi = pi.declared_degree.value_or(1);
    if (dpsi % dpi != 0) {
      out.classification = FactorClass::ContinuousOnly;
      return out;
    }
    theta.declared_degree = dpsi / dpi;
  }
  MorphismCheck chk = check_finite_morphism(theta);
  ensure(chk.ok, "factor_through produced an invalid morphism: " +
                     (chk.issues.empty() ? std::string("?")
                                         : chk.issues.front().message));
  out.theta = theta;
  out.classification = FactorClass::FiniteMorphism;
  if (auto cert = try_harmonic(theta)) {
    out.certificate = *cert;
    out.classification = FactorClass::FiniteHarmonic;
  }
  return out;
}

}  // namespace tropcover
