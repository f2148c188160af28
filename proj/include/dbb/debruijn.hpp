#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbb/digraph.hpp"
#include "dbb/errors.hpp"
#include "dbb/rational.hpp"

namespace dbb {

inline constexpr Vertex kDefaultVertexCap = Vertex{1} << 24;

// Directed graph on all length-d words over an n-symbol alphabet. Vertex m's
// successors drop m's leading base-n digit and append one digit, so every
// vertex has exactly n outgoing and n incoming edges. Vertices are plain
// integers 0..n^d-1; digit strings are presentation only.
class DeBruijnGraph {
 public:
  DeBruijnGraph(int symbols, int word_length,
                Vertex vertex_cap = kDefaultVertexCap) {
    if (symbols < 2) throw DomainError("symbol count must be at least 2");
    if (word_length < 1) throw DomainError("word length must be at least 1");
    detail::Int128 count = 1;
    for (int i = 0; i < word_length; ++i) {
      count *= symbols;
      if (count > vertex_cap)
        throw CapacityError("vertex count " + std::to_string(symbols) + "^" +
                            std::to_string(word_length) + " exceeds cap " +
                            std::to_string(vertex_cap));
    }
    symbols_ = symbols;
    word_length_ = word_length;
    vertex_count_ = static_cast<Vertex>(count);
    suffix_mod_ = vertex_count_ / symbols;
  }

  int symbols() const { return symbols_; }       // n
  int word_length() const { return word_length_; }  // d
  Vertex vertex_count() const { return vertex_count_; }
  EdgeId edge_count() const { return vertex_count_ * symbols_; }

  // The word obtained from m by dropping its leading digit and appending
  // `digit`.
  Vertex successor(Vertex m, int digit) const {
    check_vertex(m);
    check_digit(digit);
    return (m % suffix_mod_) * symbols_ + digit;
  }

  // Dense id of the edge (m, successor(m, digit)).
  EdgeId edge_id(Vertex m, int digit) const {
    check_vertex(m);
    check_digit(digit);
    return m * symbols_ + digit;
  }

  // Digit appended by the edge src -> dst, or -1 when that pair is not an
  // edge of the graph.
  int edge_digit(Vertex src, Vertex dst) const {
    check_vertex(src);
    if (dst < 0 || dst >= vertex_count_) return -1;
    if (dst / symbols_ != src % suffix_mod_) return -1;
    return static_cast<int>(dst % symbols_);
  }

  // CSR conversion. Successors ascend with the appended digit, so the CSR
  // edge order coincides with edge_id order.
  Digraph to_digraph() const {
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(static_cast<std::size_t>(edge_count()));
    for (Vertex m = 0; m < vertex_count_; ++m)
      for (int digit = 0; digit < symbols_; ++digit)
        edges.emplace_back(m, successor(m, digit));
    return Digraph(vertex_count_, std::move(edges));
  }

  friend bool operator==(const DeBruijnGraph& a, const DeBruijnGraph& b) {
    return a.symbols_ == b.symbols_ && a.word_length_ == b.word_length_;
  }

 private:
  void check_vertex(Vertex m) const {
    if (m < 0 || m >= vertex_count_)
      throw DomainError("vertex " + std::to_string(m) + " out of range");
  }
  void check_digit(int digit) const {
    if (digit < 0 || digit >= symbols_)
      throw DomainError("digit " + std::to_string(digit) + " out of range");
  }

  int symbols_ = 0;
  int word_length_ = 0;
  Vertex vertex_count_ = 0;
  Vertex suffix_mod_ = 0;  // n^(d-1)
};

inline DeBruijnGraph build_debruijn(int symbols, int word_length,
                                    Vertex vertex_cap = kDefaultVertexCap) {
  return DeBruijnGraph(symbols, word_length, vertex_cap);
}

// Recognizes a CSR graph that is exactly some B(n, d); used by the CLI so a
// graph loaded from file gets the full de Bruijn treatment.
inline std::optional<DeBruijnGraph> detect_debruijn(const Digraph& g) {
  const Vertex n_vertices = g.vertex_count();
  if (n_vertices < 2) return std::nullopt;
  const std::int64_t degree = g.out_degree(0);
  if (degree < 2) return std::nullopt;
  for (Vertex v = 1; v < n_vertices; ++v)
    if (g.out_degree(v) != degree) return std::nullopt;
  int word_length = 0;
  Vertex acc = 1;
  while (acc < n_vertices) {
    acc *= degree;
    ++word_length;
    if (word_length > 62) return std::nullopt;
  }
  if (acc != n_vertices) return std::nullopt;
  DeBruijnGraph candidate(static_cast<int>(degree), word_length,
                          std::max(n_vertices, kDefaultVertexCap));
  for (Vertex m = 0; m < n_vertices; ++m) {
    auto succ = g.successors(m);
    for (int digit = 0; digit < candidate.symbols(); ++digit)
      if (succ[static_cast<std::size_t>(digit)] != candidate.successor(m, digit))
        return std::nullopt;
  }
  return candidate;
}

}  // namespace dbb
