#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dbb/debruijn.hpp"
#include "dbb/digraph.hpp"
#include "dbb/errors.hpp"
#include "dbb/rational.hpp"

namespace dbb {

// Cost per vertex, defined on every vertex of the graph it accompanies.
class VertexWeights {
 public:
  VertexWeights() = default;
  explicit VertexWeights(std::vector<Rational> weights)
      : weights_(std::move(weights)) {}

  static VertexWeights constant(Vertex count, const Rational& value) {
    if (count < 0) throw DomainError("negative vertex count");
    return VertexWeights(
        std::vector<Rational>(static_cast<std::size_t>(count), value));
  }

  Vertex size() const { return static_cast<Vertex>(weights_.size()); }

  const Rational& at(Vertex v) const {
    check(v);
    return weights_[static_cast<std::size_t>(v)];
  }
  Rational& at(Vertex v) {
    check(v);
    return weights_[static_cast<std::size_t>(v)];
  }

  std::span<const Rational> values() const { return weights_; }

  Rational sum() const {
    Rational total = 0;
    for (const Rational& w : weights_) total += w;
    return total;
  }

  // Arithmetic mean over all vertices; on B(n, d) this is the common cycle
  // mean of the balanced assignment.
  Rational mean() const {
    if (weights_.empty()) throw DomainError("mean of empty weight vector");
    return sum() / Rational(size());
  }

  friend bool operator==(const VertexWeights& a, const VertexWeights& b) {
    return a.weights_ == b.weights_;
  }

 private:
  void check(Vertex v) const {
    if (v < 0 || v >= size())
      throw DomainError("vertex " + std::to_string(v) + " out of range");
  }
  std::vector<Rational> weights_;
};

// Text format: lines `vertex_id numerator[/denominator]`, `#` comments and
// blank lines allowed. Every vertex must appear exactly once.
inline VertexWeights parse_vertex_weights(std::string_view text,
                                          Vertex expected_count) {
  std::vector<Rational> weights(static_cast<std::size_t>(expected_count));
  std::vector<char> present(static_cast<std::size_t>(expected_count), 0);
  detail::for_each_line(text, [&](int line_no, std::string_view line) {
    if (!detail::is_content_line(line)) return;
    auto fields = detail::split_fields(line);
    if (fields.size() != 2)
      throw ParseError(line_no, "expected 'vertex weight'");
    Vertex v = detail::parse_int_field(fields[0], line_no, "vertex id");
    if (v < 0 || v >= expected_count)
      throw ParseError(line_no,
                       "vertex " + std::to_string(v) + " out of range");
    if (present[static_cast<std::size_t>(v)])
      throw ParseError(line_no,
                       "duplicate weight for vertex " + std::to_string(v));
    try {
      weights[static_cast<std::size_t>(v)] = Rational::parse(fields[1]);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    present[static_cast<std::size_t>(v)] = 1;
  });
  for (Vertex v = 0; v < expected_count; ++v)
    if (!present[static_cast<std::size_t>(v)])
      throw ParseError("no weight given for vertex " + std::to_string(v));
  return VertexWeights(std::move(weights));
}

inline std::string serialize_vertex_weights(const VertexWeights& weights) {
  std::string out;
  for (Vertex v = 0; v < weights.size(); ++v) {
    out += std::to_string(v);
    out += ' ';
    out += weights.at(v).str();
    out += '\n';
  }
  return out;
}

// Weight per de Bruijn edge, addressed by (source vertex, appended digit).
// Values are stored in edge_id order, which equals the CSR order of
// DeBruijnGraph::to_digraph().
class EdgeWeightAssignment {
 public:
  EdgeWeightAssignment() = default;
  explicit EdgeWeightAssignment(const DeBruijnGraph& g)
      : symbols_(g.symbols()),
        vertex_count_(g.vertex_count()),
        weights_(static_cast<std::size_t>(g.edge_count())) {}

  int symbols() const { return symbols_; }
  Vertex vertex_count() const { return vertex_count_; }

  const Rational& at(Vertex m, int digit) const {
    return weights_[index(m, digit)];
  }
  Rational& at(Vertex m, int digit) { return weights_[index(m, digit)]; }

  std::span<const Rational> values() const { return weights_; }

  // Outgoing sum at m; zero for every vertex of a valid assignment.
  Rational outgoing_sum(Vertex m) const {
    Rational total = 0;
    for (int digit = 0; digit < symbols_; ++digit) total += at(m, digit);
    return total;
  }

  friend bool operator==(const EdgeWeightAssignment& a,
                         const EdgeWeightAssignment& b) = default;

 private:
  std::size_t index(Vertex m, int digit) const {
    if (m < 0 || m >= vertex_count_)
      throw DomainError("vertex " + std::to_string(m) + " out of range");
    if (digit < 0 || digit >= symbols_)
      throw DomainError("digit " + std::to_string(digit) + " out of range");
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(symbols_) +
           static_cast<std::size_t>(digit);
  }

  int symbols_ = 0;
  Vertex vertex_count_ = 0;
  std::vector<Rational> weights_;
};

// Text format: lines `src dst numerator[/denominator]`; every de Bruijn edge
// must appear exactly once.
inline EdgeWeightAssignment parse_edge_weights(std::string_view text,
                                               const DeBruijnGraph& g) {
  EdgeWeightAssignment f(g);
  std::vector<char> present(static_cast<std::size_t>(g.edge_count()), 0);
  detail::for_each_line(text, [&](int line_no, std::string_view line) {
    if (!detail::is_content_line(line)) return;
    auto fields = detail::split_fields(line);
    if (fields.size() != 3)
      throw ParseError(line_no, "expected 'src dst weight'");
    Vertex src = detail::parse_int_field(fields[0], line_no, "source vertex");
    Vertex dst = detail::parse_int_field(fields[1], line_no, "target vertex");
    if (src < 0 || src >= g.vertex_count())
      throw ParseError(line_no,
                       "source vertex " + std::to_string(src) + " out of range");
    int digit = g.edge_digit(src, dst);
    if (digit < 0)
      throw ParseError(line_no, std::to_string(src) + " -> " +
                                    std::to_string(dst) + " is not an edge");
    std::size_t id = static_cast<std::size_t>(g.edge_id(src, digit));
    if (present[id])
      throw ParseError(line_no, "duplicate weight for edge " +
                                    std::to_string(src) + " -> " +
                                    std::to_string(dst));
    try {
      f.at(src, digit) = Rational::parse(fields[2]);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    present[id] = 1;
  });
  for (Vertex m = 0; m < g.vertex_count(); ++m)
    for (int digit = 0; digit < g.symbols(); ++digit)
      if (!present[static_cast<std::size_t>(g.edge_id(m, digit))])
        throw ParseError("no weight given for edge " + std::to_string(m) +
                         " -> " + std::to_string(g.successor(m, digit)));
  return f;
}

// Lines sorted by (src, dst): iterating digits ascending gives ascending
// targets.
inline std::string serialize_edge_weights(const DeBruijnGraph& g,
                                          const EdgeWeightAssignment& f) {
  std::string out;
  for (Vertex m = 0; m < g.vertex_count(); ++m) {
    for (int digit = 0; digit < g.symbols(); ++digit) {
      out += std::to_string(m);
      out += ' ';
      out += std::to_string(g.successor(m, digit));
      out += ' ';
      out += f.at(m, digit).str();
      out += '\n';
    }
  }
  return out;
}

// Generic edge weights for an arbitrary digraph, CSR-indexed. Same text
// format as the de Bruijn assignment.
inline std::vector<Rational> parse_digraph_edge_weights(std::string_view text,
                                                        const Digraph& g) {
  std::vector<Rational> weights(static_cast<std::size_t>(g.edge_count()));
  std::vector<char> present(static_cast<std::size_t>(g.edge_count()), 0);
  detail::for_each_line(text, [&](int line_no, std::string_view line) {
    if (!detail::is_content_line(line)) return;
    auto fields = detail::split_fields(line);
    if (fields.size() != 3)
      throw ParseError(line_no, "expected 'src dst weight'");
    Vertex src = detail::parse_int_field(fields[0], line_no, "source vertex");
    Vertex dst = detail::parse_int_field(fields[1], line_no, "target vertex");
    if (src < 0 || src >= g.vertex_count())
      throw ParseError(line_no,
                       "source vertex " + std::to_string(src) + " out of range");
    EdgeId e = g.find_edge(src, dst);
    if (e < 0)
      throw ParseError(line_no, std::to_string(src) + " -> " +
                                    std::to_string(dst) + " is not an edge");
    if (present[static_cast<std::size_t>(e)])
      throw ParseError(line_no, "duplicate weight for edge " +
                                    std::to_string(src) + " -> " +
                                    std::to_string(dst));
    try {
      weights[static_cast<std::size_t>(e)] = Rational::parse(fields[2]);
    } catch (const ParseError& e2) {
      throw ParseError(line_no, e2.what());
    }
    present[static_cast<std::size_t>(e)] = 1;
  });
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (!present[static_cast<std::size_t>(e)])
      throw ParseError("no weight given for edge " +
                       std::to_string(g.edge_source(e)) + " -> " +
                       std::to_string(g.edge_target(e)));
  return weights;
}

// Weight of a walk: every visited vertex (repeats included) plus every
// traversed edge.
inline Rational walk_weight(const DeBruijnGraph& g, const VertexWeights& c,
                            const EdgeWeightAssignment& f,
                            std::span<const Vertex> walk) {
  if (walk.empty()) throw StructureError("empty walk");
  Rational total = c.at(walk[0]);
  for (std::size_t i = 1; i < walk.size(); ++i) {
    int digit = g.edge_digit(walk[i - 1], walk[i]);
    if (digit < 0)
      throw StructureError(std::to_string(walk[i - 1]) + " -> " +
                           std::to_string(walk[i]) + " is not an edge");
    total += f.at(walk[i - 1], digit);
    total += c.at(walk[i]);
  }
  return total;
}

// Weight of a simple cycle given as its distinct vertices in order (closing
// edge implied): each vertex and each edge counted exactly once.
inline Rational cycle_weight(const DeBruijnGraph& g, const VertexWeights& c,
                             const EdgeWeightAssignment& f,
                             std::span<const Vertex> cycle) {
  if (cycle.empty()) throw StructureError("empty cycle");
  std::set<Vertex> distinct(cycle.begin(), cycle.end());
  if (distinct.size() != cycle.size())
    throw StructureError("cycle repeats a vertex");
  Rational total = 0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    Vertex from = cycle[i];
    Vertex to = cycle[(i + 1) % cycle.size()];
    int digit = g.edge_digit(from, to);
    if (digit < 0)
      throw StructureError(std::to_string(from) + " -> " + std::to_string(to) +
                           " is not an edge");
    total += c.at(from);
    total += f.at(from, digit);
  }
  return total;
}

inline Rational cycle_mean(const DeBruijnGraph& g, const VertexWeights& c,
                           const EdgeWeightAssignment& f,
                           std::span<const Vertex> cycle) {
  return cycle_weight(g, c, f, cycle) /
         Rational(static_cast<std::int64_t>(cycle.size()));
}

}  // namespace dbb
