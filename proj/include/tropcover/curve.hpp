#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tropcover/errors.hpp"
#include "tropcover/rational.hpp"

namespace tropcover {

using VertexId = int;
using EdgeId = int;

/// Which endpoint of an edge is a point at infinity. After validation an
/// infinite edge always has its infinite end at endpoint b, so only two
/// states remain.
enum class InfEnd : unsigned char { None, B };

struct Edge {
  std::string name;
  VertexId a = -1;
  VertexId b = -1;
  Length length;
  InfEnd inf_end = InfEnd::None;

  bool is_loop() const { return a == b; }
  bool operator==(const Edge&) const = default;
};

/// A model of a tropical curve: a finite connected multigraph with positive
/// rational edge lengths, where length infinity is allowed only on leaf
/// edges whose dangling endpoint is the point at infinity. Loops and
/// parallel edges are permitted.
struct Curve {
  std::string name;
  std::vector<std::string> vertex_names;
  std::vector<Edge> edges;

  int vertex_count() const { return static_cast<int>(vertex_names.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }

  bool has_loops() const {
    return std::any_of(edges.begin(), edges.end(),
                       [](const Edge& e) { return e.is_loop(); });
  }

  /// Valence of every vertex; a loop contributes two.
  std::vector<int> valences() const {
    std::vector<int> val(vertex_names.size(), 0);
    for (const Edge& e : edges) {
      ++val[e.a];
      ++val[e.b];
    }
    return val;
  }

  /// True when v is the finite-distance boundary of nothing, i.e. the
  /// vertex sitting at the infinite end of some edge.
  bool is_infinite_end(VertexId v) const {
    for (const Edge& e : edges)
      if (e.inf_end == InfEnd::B && e.b == v) return true;
    return false;
  }

  Length total_length() const {
    Length sum;
    for (const Edge& e : edges) sum += e.length;
    return sum;
  }

  VertexId find_vertex(const std::string& n) const {
    for (int i = 0; i < vertex_count(); ++i)
      if (vertex_names[i] == n) return i;
    return -1;
  }

  EdgeId find_edge(const std::string& n) const {
    for (int i = 0; i < edge_count(); ++i)
      if (edges[i].name == n) return i;
    return -1;
  }

  /// Structural equality up to nothing: same vertex list, same edge list in
  /// the same order with the same orientations.
  bool operator==(const Curve&) const = default;
};

/// A point of the metric realization: either a vertex or an interior point
/// of an edge, addressed by an offset from endpoint a. Offsets are finite
/// even on infinite edges.
struct Point {
  enum class Kind : unsigned char { Vertex, Interior };
  Kind kind = Kind::Vertex;
  int id = 0;   // vertex id, or edge id for interior points
  Rat offset;   // only for interior points; 0 < offset < length

  static Point at_vertex(VertexId v) { return Point{Kind::Vertex, v, Rat(0)}; }
  static Point interior(EdgeId e, const Rat& off) {
    return Point{Kind::Interior, e, off};
  }

  bool is_vertex() const { return kind == Kind::Vertex; }

  bool operator==(const Point& o) const {
    if (kind != o.kind || id != o.id) return false;
    return kind == Kind::Vertex || offset == o.offset;
  }
  bool operator<(const Point& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (id != o.id) return id < o.id;
    return kind == Kind::Interior && offset < o.offset;
  }
};

inline std::string format_point(const Curve& c, const Point& p) {
  if (p.is_vertex()) return c.vertex_names[p.id];
  return c.edges[p.id].name + "@" + format_rational(p.offset);
}

/// Checks that p addresses an actual point of c. Interior offsets must be
/// strictly between 0 and the edge length (any positive offset on an
/// infinite edge).
inline void require_point(const Curve& c, const Point& p) {
  if (p.is_vertex()) {
    if (p.id < 0 || p.id >= c.vertex_count())
      throw Error(Errc::BadIndex, "vertex id out of range");
    return;
  }
  if (p.id < 0 || p.id >= c.edge_count())
    throw Error(Errc::BadIndex, "edge id out of range");
  const Edge& e = c.edges[p.id];
  if (p.offset <= Rat(0) ||
      (e.length.is_finite() && p.offset >= e.length.value()))
    throw Error(Errc::OffsetOutOfRange,
                "offset " + format_rational(p.offset) + " not interior to " +
                    e.name);
}

namespace detail {

inline void check_connected(const Curve& c) {
  if (c.vertex_count() == 0) return;
  std::vector<std::vector<VertexId>> adj(c.vertex_count());
  for (const Edge& e : c.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<char> seen(c.vertex_count(), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  for (int v = 0; v < c.vertex_count(); ++v)
    if (!seen[v])
      throw Error(Errc::Disconnected,
                  "vertex " + c.vertex_names[v] + " unreachable");
}

}  // namespace detail

/// Full model validation: nonempty, connected, positive finite lengths or
/// properly tagged infinite leaf edges. Returns the valences as a byproduct
/// since every caller wants them next.
inline std::vector<int> validate_model(const Curve& c) {
  if (c.vertex_count() == 0)
    throw Error(Errc::EmptyGraph, "curve '" + c.name + "' has no vertices");
  for (const Edge& e : c.edges) {
    if (e.a < 0 || e.a >= c.vertex_count() || e.b < 0 ||
        e.b >= c.vertex_count())
      throw Error(Errc::BadIndex, "edge " + e.name + " has a bad endpoint");
    if (e.length.is_finite() && e.length.value() <= Rat(0))
      throw Error(Errc::NonpositiveLength,
                  "edge " + e.name + " has length " + e.length.str());
    if (e.length.is_finite() && e.inf_end != InfEnd::None)
      throw Error(Errc::AmbiguousInfiniteEnd,
                  "finite edge " + e.name + " carries an infinite-end tag");
  }
  detail::check_connected(c);
  std::vector<int> val = c.valences();
  for (const Edge& e : c.edges) {
    if (e.length.is_infinite()) {
      if (e.inf_end != InfEnd::B)
        throw Error(Errc::AmbiguousInfiniteEnd,
                    "infinite edge " + e.name + " lacks an infinite end");
      if (e.is_loop() || val[e.b] != 1)
        throw Error(Errc::InfinityOnNonLeafEdge,
                    "infinite edge " + e.name +
                        " must dangle: its infinite end has valence " +
                        std::to_string(val[e.b]));
    }
  }
  return val;
}

/// Incremental construction with name-based references, normalizing the
/// infinite end to endpoint b. Used by the parser, the builtin examples and
/// the tests; build() validates.
class CurveBuilder {
 public:
  explicit CurveBuilder(std::string name) { curve_.name = std::move(name); }

  CurveBuilder& vertex(const std::string& n) {
    if (curve_.find_vertex(n) >= 0)
      throw Error(Errc::DuplicateName, "vertex " + n);
    curve_.vertex_names.push_back(n);
    return *this;
  }

  /// inf_end: 0 for finite edges, 'a' or 'b' to pick the infinite end of an
  /// infinite edge. For an infinite edge whose dangling end is unambiguous
  /// the tag may be omitted and is inferred.
  CurveBuilder& edge(const std::string& n, const std::string& va,
                     const std::string& vb, const Length& len,
                     char inf_end = 0) {
    if (curve_.find_edge(n) >= 0) throw Error(Errc::DuplicateName, "edge " + n);
    VertexId a = curve_.find_vertex(va);
    VertexId b = curve_.find_vertex(vb);
    if (a < 0) throw Error(Errc::UnknownReference, "vertex " + va);
    if (b < 0) throw Error(Errc::UnknownReference, "vertex " + vb);
    Edge e;
    e.name = n;
    e.a = a;
    e.b = b;
    e.length = len;
    if (len.is_infinite()) {
      if (inf_end == 'a') {
        std::swap(e.a, e.b);
        e.inf_end = InfEnd::B;
      } else if (inf_end == 'b') {
        e.inf_end = InfEnd::B;
      } else if (inf_end == 0) {
        pending_infer_.push_back(static_cast<int>(curve_.edges.size()));
        e.inf_end = InfEnd::None;  // resolved in build()
      } else {
        throw Error(Errc::ParseError, std::string("bad infinite_end tag '") +
                                          inf_end + "' on edge " + n);
      }
    } else if (inf_end != 0) {
      throw Error(Errc::AmbiguousInfiniteEnd,
                  "finite edge " + n + " carries an infinite-end tag");
    }
    curve_.edges.push_back(e);
    return *this;
  }

  Curve build() {
    resolve_inferred();
    validate_model(curve_);
    return curve_;
  }

 private:
  // An untagged infinite edge is acceptable only when exactly one endpoint
  // is a leaf of the whole graph; otherwise the dangling end is ambiguous.
  void resolve_inferred() {
    if (pending_infer_.empty()) return;
    std::vector<int> val = curve_.valences();
    for (int ei : pending_infer_) {
      Edge& e = curve_.edges[ei];
      bool leaf_a = val[e.a] == 1;
      bool leaf_b = val[e.b] == 1;
      if (leaf_a == leaf_b)
        throw Error(Errc::AmbiguousInfiniteEnd,
                    "infinite edge " + e.name +
                        " needs an explicit infinite_end tag");
      if (leaf_a) std::swap(e.a, e.b);
      e.inf_end = InfEnd::B;
    }
    pending_infer_.clear();
  }

  Curve curve_;
  std::vector<int> pending_infer_;
};

}  // namespace tropcover
