#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dbb/digraph.hpp"
#include "dbb/errors.hpp"
#include "dbb/rational.hpp"
#include "dbb/weights.hpp"

namespace dbb {

namespace detail {

inline void require_sink_free(const Digraph& g) {
  if (Vertex sink = g.first_sink(); sink >= 0)
    throw SinkError("vertex " + std::to_string(sink) +
                    " has no outgoing edges");
}

}  // namespace detail

// One application of the uniform walk rule: each out-neighbor of v is
// reached with probability 1 / out-degree(v), so the result at v is the
// average of `values` over v's successors. The induced operator is row
// stochastic by construction.
inline std::vector<Rational> uniform_step_operator(
    const Digraph& g, std::span<const Rational> values) {
  if (static_cast<Vertex>(values.size()) != g.vertex_count())
    throw DomainError("value vector length does not match graph");
  detail::require_sink_free(g);
  std::vector<Rational> next(values.size());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    Rational sum = 0;
    for (Vertex w : g.successors(v)) sum += values[static_cast<std::size_t>(w)];
    next[static_cast<std::size_t>(v)] = sum / Rational(g.out_degree(v));
  }
  return next;
}

// Expected cost of the vertex reached after `steps` uniform random steps,
// one entry per start vertex: `steps` applications of the step operator to
// the cost vector.
inline std::vector<Rational> expected_step_costs(const Digraph& g,
                                                 const VertexWeights& c,
                                                 int steps) {
  if (steps < 0) throw DomainError("steps must be nonnegative");
  if (c.size() != g.vertex_count())
    throw DomainError("vertex weight count does not match graph");
  detail::require_sink_free(g);
  std::vector<Rational> current(c.values().begin(), c.values().end());
  for (int k = 0; k < steps; ++k) current = uniform_step_operator(g, current);
  return current;
}

inline Rational expected_step_cost(const Digraph& g, const VertexWeights& c,
                                   int steps, Vertex start) {
  if (start < 0 || start >= g.vertex_count())
    throw DomainError("vertex " + std::to_string(start) + " out of range");
  return expected_step_costs(g, c, steps)[static_cast<std::size_t>(start)];
}

// Game values on an arbitrary sink-free digraph, rows t = 0..T.
class WalkValueTable {
 public:
  WalkValueTable(int horizon, Vertex vertex_count)
      : horizon_(horizon),
        vertex_count_(vertex_count),
        rows_(static_cast<std::size_t>(horizon + 1) *
              static_cast<std::size_t>(vertex_count)) {}

  int horizon() const { return horizon_; }
  Vertex vertex_count() const { return vertex_count_; }

  const Rational& at(int t, Vertex m) const { return rows_[index(t, m)]; }
  Rational& at(int t, Vertex m) { return rows_[index(t, m)]; }

 private:
  std::size_t index(int t, Vertex m) const {
    if (t < 0 || t > horizon_) throw DomainError("turn out of range");
    if (m < 0 || m >= vertex_count_) throw DomainError("vertex out of range");
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(vertex_count_) +
           static_cast<std::size_t>(m);
  }
  int horizon_;
  Vertex vertex_count_;
  std::vector<Rational> rows_;
};

// Value via the explicit formula: u(t, m) is the sum over k = 0..T-t of the
// expected cost after k uniform steps from m. Every entry is re-checked
// against the one-step averaging recursion before returning.
inline WalkValueTable uniform_walk_values(const Digraph& g,
                                          const VertexWeights& c, int horizon) {
  if (horizon < 0) throw DomainError("horizon must be nonnegative");
  if (c.size() != g.vertex_count())
    throw DomainError("vertex weight count does not match graph");
  detail::require_sink_free(g);
  const Vertex vertices = g.vertex_count();
  WalkValueTable table(horizon, vertices);

  std::vector<Rational> step_cost(c.values().begin(), c.values().end());
  std::vector<Rational> next(step_cost.size());
  for (Vertex m = 0; m < vertices; ++m) table.at(horizon, m) = step_cost[static_cast<std::size_t>(m)];
  for (int t = horizon - 1; t >= 0; --t) {
    for (Vertex v = 0; v < vertices; ++v) {
      Rational sum = 0;
      for (Vertex w : g.successors(v)) sum += step_cost[static_cast<std::size_t>(w)];
      next[static_cast<std::size_t>(v)] = sum / Rational(g.out_degree(v));
    }
    step_cost.swap(next);  // now E[C_{T-t}, .]
    for (Vertex m = 0; m < vertices; ++m)
      table.at(t, m) = table.at(t + 1, m) + step_cost[static_cast<std::size_t>(m)];
  }

  for (int t = 0; t < horizon; ++t) {
    for (Vertex m = 0; m < vertices; ++m) {
      Rational sum = 0;
      for (Vertex w : g.successors(m)) sum += table.at(t + 1, w);
      Rational recursed = c.at(m) + sum / Rational(g.out_degree(m));
      if (recursed != table.at(t, m))
        throw AssertionFailure(
            "walk value table violates the one-step recursion");
    }
  }
  return table;
}

inline Rational uniform_walk_value(const Digraph& g, const VertexWeights& c,
                                   int horizon, int t, Vertex m) {
  if (t < 0 || t > horizon) throw DomainError("turn out of range");
  return uniform_walk_values(g, c, horizon).at(t, m);
}

// z(to, from, k): number of length-k walks from `from` to `to`, exact
// integers with overflow detection.
class PathCountTable {
 public:
  PathCountTable(const Digraph& g, int max_steps)
      : max_steps_(max_steps), vertex_count_(g.vertex_count()) {
    if (max_steps < 0) throw DomainError("steps must be nonnegative");
    const std::size_t n = static_cast<std::size_t>(vertex_count_);
    tables_.resize(static_cast<std::size_t>(max_steps) + 1,
                   std::vector<std::int64_t>(n * n, 0));
    for (std::size_t m = 0; m < n; ++m) tables_[0][m * n + m] = 1;
    for (int k = 1; k <= max_steps; ++k) {
      const auto& prev = tables_[static_cast<std::size_t>(k - 1)];
      auto& cur = tables_[static_cast<std::size_t>(k)];
      for (Vertex from = 0; from < vertex_count_; ++from) {
        for (Vertex mid : g.successors(from)) {
          for (std::size_t to = 0; to < n; ++to) {
            detail::Int128 acc =
                detail::Int128(cur[static_cast<std::size_t>(from) * n + to]) +
                prev[static_cast<std::size_t>(mid) * n + to];
            if (acc > std::numeric_limits<std::int64_t>::max())
              throw ArithmeticError("path count overflows 64 bits");
            cur[static_cast<std::size_t>(from) * n + to] =
                static_cast<std::int64_t>(acc);
          }
        }
      }
    }
  }

  std::int64_t count(Vertex to, Vertex from, int steps) const {
    if (steps < 0 || steps > max_steps_) throw DomainError("steps out of range");
    if (to < 0 || to >= vertex_count_ || from < 0 || from >= vertex_count_)
      throw DomainError("vertex out of range");
    return tables_[static_cast<std::size_t>(steps)]
                  [static_cast<std::size_t>(from) *
                       static_cast<std::size_t>(vertex_count_) +
                   static_cast<std::size_t>(to)];
  }

  int max_steps() const { return max_steps_; }
  Vertex vertex_count() const { return vertex_count_; }

 private:
  int max_steps_;
  Vertex vertex_count_;
  std::vector<std::vector<std::int64_t>> tables_;
};

inline PathCountTable path_counts(const Digraph& g, int max_steps) {
  return PathCountTable(g, max_steps);
}

// Common out-degree, or nullopt when out-degrees differ (or the graph is
// empty).
inline std::optional<std::int64_t> uniform_out_degree(const Digraph& g) {
  if (g.vertex_count() == 0) return std::nullopt;
  std::int64_t degree = g.out_degree(0);
  for (Vertex v = 1; v < g.vertex_count(); ++v)
    if (g.out_degree(v) != degree) return std::nullopt;
  return degree;
}

// Value on an out-regular graph through walk counts: sum over k = 0..T-t of
// degree^-k times the count-weighted cost total.
inline Rational regular_walk_value(const Digraph& g, const VertexWeights& c,
                                   int horizon, int t, Vertex m) {
  auto degree = uniform_out_degree(g);
  if (!degree || *degree == 0)
    throw RegularityError("graph is not out-regular");
  if (t < 0 || t > horizon) throw DomainError("turn out of range");
  if (m < 0 || m >= g.vertex_count()) throw DomainError("vertex out of range");
  if (c.size() != g.vertex_count())
    throw DomainError("vertex weight count does not match graph");
  const PathCountTable counts(g, horizon - t);
  Rational total = 0;
  for (int k = 0; k <= horizon - t; ++k) {
    Rational level = 0;
    for (Vertex j = 0; j < g.vertex_count(); ++j) {
      std::int64_t z = counts.count(j, m, k);
      if (z != 0) level += c.at(j) * Rational(z);
    }
    total += level / Rational(checked_pow(*degree, k));
  }
  return total;
}

}  // namespace dbb
