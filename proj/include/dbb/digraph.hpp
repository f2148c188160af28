#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dbb/errors.hpp"

namespace dbb {

using Vertex = std::int64_t;
using EdgeId = std::int64_t;

// Directed graph in CSR form. Successor lists are ascending and duplicate
// free, so edge ids (positions in the flattened list) and all iteration
// orders are deterministic. Sink-freedom is checked by the operations that
// need it, not by the container.
class Digraph {
 public:
  Digraph() = default;

  Digraph(Vertex vertex_count, std::vector<std::pair<Vertex, Vertex>> edges) {
    if (vertex_count < 0) throw DomainError("negative vertex count");
    for (const auto& [src, dst] : edges) {
      if (src < 0 || src >= vertex_count || dst < 0 || dst >= vertex_count)
        throw DomainError("edge endpoint out of range: " +
                          std::to_string(src) + " -> " + std::to_string(dst));
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i] == edges[i - 1])
        throw DomainError("duplicate edge " + std::to_string(edges[i].first) +
                          " -> " + std::to_string(edges[i].second));
    }
    offsets_.assign(static_cast<std::size_t>(vertex_count) + 1, 0);
    targets_.reserve(edges.size());
    for (const auto& [src, dst] : edges) {
      ++offsets_[static_cast<std::size_t>(src) + 1];
      targets_.push_back(dst);
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i)
      offsets_[i] += offsets_[i - 1];
  }

  Vertex vertex_count() const {
    return static_cast<Vertex>(offsets_.size()) - 1;
  }
  EdgeId edge_count() const { return static_cast<EdgeId>(targets_.size()); }

  std::span<const Vertex> successors(Vertex v) const {
    check_vertex(v);
    auto first = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
    auto last = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
    return {targets_.data() + first, last - first};
  }

  std::int64_t out_degree(Vertex v) const {
    check_vertex(v);
    return offsets_[static_cast<std::size_t>(v) + 1] -
           offsets_[static_cast<std::size_t>(v)];
  }

  EdgeId first_out_edge(Vertex v) const {
    check_vertex(v);
    return offsets_[static_cast<std::size_t>(v)];
  }

  // CSR position of edge (src, dst), or -1 when absent.
  EdgeId find_edge(Vertex src, Vertex dst) const {
    auto succ = successors(src);
    auto it = std::lower_bound(succ.begin(), succ.end(), dst);
    if (it == succ.end() || *it != dst) return -1;
    return first_out_edge(src) + (it - succ.begin());
  }

  Vertex edge_source(EdgeId e) const {
    if (e < 0 || e >= edge_count()) throw DomainError("edge id out of range");
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), e);
    return static_cast<Vertex>(it - offsets_.begin()) - 1;
  }

  Vertex edge_target(EdgeId e) const {
    if (e < 0 || e >= edge_count()) throw DomainError("edge id out of range");
    return targets_[static_cast<std::size_t>(e)];
  }

  // Lowest-id vertex with out-degree zero, or -1 when sink-free.
  Vertex first_sink() const {
    for (Vertex v = 0; v < vertex_count(); ++v)
      if (out_degree(v) == 0) return v;
    return -1;
  }
  bool sink_free() const { return first_sink() < 0; }

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.offsets_ == b.offsets_ && a.targets_ == b.targets_;
  }

 private:
  void check_vertex(Vertex v) const {
    if (v < 0 || v >= vertex_count())
      throw DomainError("vertex " + std::to_string(v) + " out of range");
  }

  std::vector<EdgeId> offsets_{0};
  std::vector<Vertex> targets_;
};

struct SccPartition {
  std::vector<int> component;  // -1 for vertices below the floor
  int count = 0;
};

// Tarjan over the subgraph induced on vertices >= floor_vertex (iterative,
// so deep graphs cannot blow the call stack).
inline SccPartition strongly_connected_components(const Digraph& g,
                                                  Vertex floor_vertex = 0) {
  const Vertex n = g.vertex_count();
  SccPartition result;
  result.component.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> lowlink(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> stack;
  int next_index = 0;

  struct Frame {
    Vertex v;
    std::size_t child;
  };
  std::vector<Frame> call;

  for (Vertex root = std::max<Vertex>(floor_vertex, 0); root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      auto& frame = call.back();
      Vertex v = frame.v;
      if (frame.child == 0) {
        index[static_cast<std::size_t>(v)] = next_index;
        lowlink[static_cast<std::size_t>(v)] = next_index;
        ++next_index;
        stack.push_back(v);
        on_stack[static_cast<std::size_t>(v)] = 1;
      }
      auto succ = g.successors(v);
      bool descended = false;
      while (frame.child < succ.size()) {
        Vertex w = succ[frame.child];
        ++frame.child;
        if (w < floor_vertex) continue;
        if (index[static_cast<std::size_t>(w)] == -1) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[static_cast<std::size_t>(w)]) {
          lowlink[static_cast<std::size_t>(v)] =
              std::min(lowlink[static_cast<std::size_t>(v)],
                       index[static_cast<std::size_t>(w)]);
        }
      }
      if (descended) continue;
      if (lowlink[static_cast<std::size_t>(v)] ==
          index[static_cast<std::size_t>(v)]) {
        while (true) {
          Vertex w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          result.component[static_cast<std::size_t>(w)] = result.count;
          if (w == v) break;
        }
        ++result.count;
      }
      call.pop_back();
      if (!call.empty()) {
        Vertex parent = call.back().v;
        lowlink[static_cast<std::size_t>(parent)] =
            std::min(lowlink[static_cast<std::size_t>(parent)],
                     lowlink[static_cast<std::size_t>(v)]);
      }
    }
  }
  return result;
}

// Rotates a cycle's vertex sequence so the smallest id comes first; this is
// the canonical form used for ordering and deduplication.
inline std::vector<Vertex> canonical_cycle(std::span<const Vertex> cycle) {
  if (cycle.empty()) throw StructureError("empty cycle");
  auto it = std::min_element(cycle.begin(), cycle.end());
  std::vector<Vertex> out;
  out.reserve(cycle.size());
  out.insert(out.end(), it, cycle.end());
  out.insert(out.end(), cycle.begin(), it);
  return out;
}

namespace detail {

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Calls fn(line_number, line) for each line, 1-based.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) {
      if (pos < text.size()) fn(++line_no, strip_cr(text.substr(pos)));
      break;
    }
    fn(++line_no, strip_cr(text.substr(pos, eol - pos)));
    pos = eol + 1;
  }
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

inline bool is_content_line(std::string_view line) {
  auto fields = split_fields(line);
  return !fields.empty() && fields[0][0] != '#';
}

inline std::int64_t parse_int_field(std::string_view field, int line_no,
                                    const char* what) {
  std::int64_t value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(line_no, std::string("malformed ") + what + " '" +
                                  std::string(field) + "'");
  return value;
}

}  // namespace detail

// Edge-list text format: first content line is the vertex count, every other
// non-empty, non-`#` line is `src dst`. Rejects graphs with sinks.
inline Digraph parse_digraph(std::string_view text) {
  bool have_count = false;
  Vertex vertex_count = 0;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::set<std::pair<Vertex, Vertex>> seen;
  detail::for_each_line(text, [&](int line_no, std::string_view line) {
    if (!detail::is_content_line(line)) return;
    auto fields = detail::split_fields(line);
    if (!have_count) {
      if (fields.size() != 1)
        throw ParseError(line_no, "expected a single vertex count");
      vertex_count = detail::parse_int_field(fields[0], line_no, "vertex count");
      if (vertex_count < 0) throw ParseError(line_no, "negative vertex count");
      have_count = true;
      return;
    }
    if (fields.size() != 2) throw ParseError(line_no, "expected 'src dst'");
    Vertex src = detail::parse_int_field(fields[0], line_no, "source vertex");
    Vertex dst = detail::parse_int_field(fields[1], line_no, "target vertex");
    if (src < 0 || src >= vertex_count)
      throw ParseError(line_no,
                       "source vertex " + std::to_string(src) + " out of range");
    if (dst < 0 || dst >= vertex_count)
      throw ParseError(line_no,
                       "target vertex " + std::to_string(dst) + " out of range");
    if (!seen.insert({src, dst}).second)
      throw ParseError(line_no, "duplicate edge " + std::to_string(src) +
                                    " -> " + std::to_string(dst));
    edges.emplace_back(src, dst);
  });
  if (!have_count) throw ParseError("missing vertex count line");
  Digraph g(vertex_count, std::move(edges));
  if (Vertex sink = g.first_sink(); sink >= 0)
    throw SinkError("vertex " + std::to_string(sink) +
                    " has no outgoing edges");
  return g;
}

inline std::string serialize_digraph(const Digraph& g) {
  std::string out = std::to_string(g.vertex_count());
  out += '\n';
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (Vertex w : g.successors(v)) {
      out += std::to_string(v);
      out += ' ';
      out += std::to_string(w);
      out += '\n';
    }
  }
  return out;
}

}  // namespace dbb
