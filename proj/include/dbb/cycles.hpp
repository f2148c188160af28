#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dbb/debruijn.hpp"
#include "dbb/digraph.hpp"
#include "dbb/errors.hpp"
#include "dbb/rational.hpp"
#include "dbb/weights.hpp"

namespace dbb {

inline constexpr std::int64_t kDefaultCycleCap = 1000000;

namespace detail {

template <typename Emit>
struct CycleSearch {
  const Digraph& g;
  Emit& emit;
  std::int64_t cap;
  std::int64_t emitted = 0;
  Vertex start = 0;
  std::vector<char> in_component;
  std::vector<char> blocked;
  std::vector<std::vector<Vertex>> block_list;
  std::vector<Vertex> stack;

  explicit CycleSearch(const Digraph& graph, Emit& emit_fn, std::int64_t cap_in)
      : g(graph),
        emit(emit_fn),
        cap(cap_in),
        in_component(static_cast<std::size_t>(graph.vertex_count()), 0),
        blocked(static_cast<std::size_t>(graph.vertex_count()), 0),
        block_list(static_cast<std::size_t>(graph.vertex_count())) {}

  void unblock(Vertex v) {
    blocked[static_cast<std::size_t>(v)] = 0;
    auto pending = std::move(block_list[static_cast<std::size_t>(v)]);
    block_list[static_cast<std::size_t>(v)].clear();
    for (Vertex w : pending)
      if (blocked[static_cast<std::size_t>(w)]) unblock(w);
  }

  bool circuit(Vertex v) {
    bool found = false;
    stack.push_back(v);
    blocked[static_cast<std::size_t>(v)] = 1;
    for (Vertex w : g.successors(v)) {
      if (!in_component[static_cast<std::size_t>(w)]) continue;
      if (w == start) {
        if (++emitted > cap)
          throw CapacityError("simple cycle count exceeds cap " +
                              std::to_string(cap));
        emit(std::span<const Vertex>(stack));
        found = true;
      } else if (!blocked[static_cast<std::size_t>(w)]) {
        if (circuit(w)) found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (Vertex w : g.successors(v))
        if (in_component[static_cast<std::size_t>(w)])
          block_list[static_cast<std::size_t>(w)].push_back(v);
    }
    stack.pop_back();
    return found;
  }
};

}  // namespace detail

// Johnson-style enumeration of every simple directed cycle, each emitted
// exactly once in canonical rotation (minimum vertex first) and in
// lexicographic order. `emit` receives the vertex sequence as a span valid
// only during the call. Throws CapacityError past `cap` emissions rather
// than truncating silently.
template <typename Emit>
void for_each_simple_cycle(const Digraph& g, std::int64_t cap, Emit&& emit) {
  detail::CycleSearch<Emit> search(g, emit, cap);
  const Vertex n = g.vertex_count();
  for (Vertex s = 0; s < n; ++s) {
    // Cycles whose minimum vertex is s live in s's strongly connected
    // component within the subgraph on vertices >= s.
    SccPartition scc = strongly_connected_components(g, s);
    const int comp = scc.component[static_cast<std::size_t>(s)];
    bool may_cycle = g.find_edge(s, s) >= 0;
    for (Vertex v = s; v < n; ++v) {
      const bool member = scc.component[static_cast<std::size_t>(v)] == comp;
      search.in_component[static_cast<std::size_t>(v)] = member ? 1 : 0;
      search.blocked[static_cast<std::size_t>(v)] = 0;
      search.block_list[static_cast<std::size_t>(v)].clear();
      if (member && v != s) may_cycle = true;
    }
    if (may_cycle) {
      search.start = s;
      search.circuit(s);
    }
    for (Vertex v = s; v < n; ++v)
      search.in_component[static_cast<std::size_t>(v)] = 0;
  }
}

inline std::vector<std::vector<Vertex>> enumerate_simple_cycles(
    const Digraph& g, std::int64_t cap = kDefaultCycleCap) {
  std::vector<std::vector<Vertex>> cycles;
  for_each_simple_cycle(g, cap, [&](std::span<const Vertex> cycle) {
    cycles.emplace_back(cycle.begin(), cycle.end());
  });
  return cycles;
}

// Per-edge cost c(src) + f(edge), CSR-indexed. Each cycle visits each of its
// vertices as a source exactly once, so cycle edge-cost sums equal the
// doubly-weighted cycle weight.
inline std::vector<Rational> edge_cost_projection(
    const Digraph& g, const VertexWeights& c,
    std::span<const Rational> edge_weights) {
  if (c.size() != g.vertex_count())
    throw DomainError("vertex weight count does not match graph");
  if (static_cast<EdgeId>(edge_weights.size()) != g.edge_count())
    throw DomainError("edge weight count does not match graph");
  std::vector<Rational> costs(edge_weights.begin(), edge_weights.end());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    EdgeId first = g.first_out_edge(v);
    for (std::int64_t i = 0; i < g.out_degree(v); ++i)
      costs[static_cast<std::size_t>(first + i)] += c.at(v);
  }
  return costs;
}

inline std::vector<Rational> debruijn_edge_costs(const DeBruijnGraph& g,
                                                 const VertexWeights& c,
                                                 const EdgeWeightAssignment& f) {
  std::vector<Rational> costs(static_cast<std::size_t>(g.edge_count()));
  for (Vertex m = 0; m < g.vertex_count(); ++m)
    for (int digit = 0; digit < g.symbols(); ++digit)
      costs[static_cast<std::size_t>(g.edge_id(m, digit))] =
          c.at(m) + f.at(m, digit);
  return costs;
}

struct MeanCycleResult {
  Rational mean;
  std::vector<Vertex> cycle;  // canonical rotation, attains `mean`
};

namespace detail {

// Karp's dynamic program on one strongly connected component, exact
// rationals throughout. Returns the minimum cycle mean over the component
// and a cycle attaining it.
struct KarpComponent {
  std::vector<Vertex> vertices;              // global ids, ascending
  std::vector<std::pair<int, int>> edges;    // local (from, to)
  std::vector<Rational> edge_costs;

  MeanCycleResult solve() const {
    const int count = static_cast<int>(vertices.size());
    const std::size_t rows = static_cast<std::size_t>(count) + 1;
    std::vector<std::vector<std::optional<Rational>>> dist(
        rows, std::vector<std::optional<Rational>>(
                  static_cast<std::size_t>(count)));
    std::vector<std::vector<int>> parent(
        rows, std::vector<int>(static_cast<std::size_t>(count), -1));
    dist[0][0] = Rational(0);
    for (std::size_t k = 1; k < rows; ++k) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [from, to] = edges[e];
        const auto& base = dist[k - 1][static_cast<std::size_t>(from)];
        if (!base) continue;
        Rational cand = *base + edge_costs[e];
        auto& slot = dist[k][static_cast<std::size_t>(to)];
        if (!slot || cand < *slot) {
          slot = cand;
          parent[k][static_cast<std::size_t>(to)] = from;
        }
      }
    }
    std::optional<Rational> best;
    int best_vertex = -1;
    for (int v = 0; v < count; ++v) {
      const auto& full = dist[static_cast<std::size_t>(count)][static_cast<std::size_t>(v)];
      if (!full) continue;
      std::optional<Rational> worst;
      for (int k = 0; k < count; ++k) {
        const auto& partial = dist[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)];
        if (!partial) continue;
        Rational ratio = (*full - *partial) / Rational(count - k);
        if (!worst || *worst < ratio) worst = ratio;
      }
      if (worst && (!best || *worst < *best)) {
        best = worst;
        best_vertex = v;
      }
    }
    if (!best) throw AssertionFailure("Karp found no closed walk in an SCC");

    // Walk the parents back from (best_vertex, count). Every cycle on this
    // walk has mean exactly *best; take the first repeat.
    std::vector<int> walk(rows);
    walk[static_cast<std::size_t>(count)] = best_vertex;
    for (int k = count; k > 0; --k)
      walk[static_cast<std::size_t>(k - 1)] =
          parent[static_cast<std::size_t>(k)][static_cast<std::size_t>(walk[static_cast<std::size_t>(k)])];
    std::vector<int> seen_at(static_cast<std::size_t>(count), -1);
    int cycle_from = -1, cycle_to = -1;
    for (int i = 0; i <= count; ++i) {
      int v = walk[static_cast<std::size_t>(i)];
      if (seen_at[static_cast<std::size_t>(v)] >= 0) {
        cycle_from = seen_at[static_cast<std::size_t>(v)];
        cycle_to = i;
        break;
      }
      seen_at[static_cast<std::size_t>(v)] = i;
    }
    if (cycle_from < 0) throw AssertionFailure("Karp walk has no repeat");
    std::vector<Vertex> cycle;
    for (int i = cycle_from; i < cycle_to; ++i)
      cycle.push_back(vertices[static_cast<std::size_t>(
          walk[static_cast<std::size_t>(i)])]);
    return {*best, canonical_cycle(cycle)};
  }
};

inline Rational cycle_mean_over_costs(const Digraph& g,
                                      std::span<const Rational> edge_costs,
                                      std::span<const Vertex> cycle) {
  Rational total = 0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    EdgeId e = g.find_edge(cycle[i], cycle[(i + 1) % cycle.size()]);
    if (e < 0) throw StructureError("witness is not a cycle");
    total += edge_costs[static_cast<std::size_t>(e)];
  }
  return total / Rational(static_cast<std::int64_t>(cycle.size()));
}

}  // namespace detail

// Exact minimum cycle mean over all directed cycles (not only simple ones),
// by Karp's dynamic program run per strongly connected component. Also
// returns a simple cycle attaining the minimum. StructureError when the
// graph has no cycle at all.
inline MeanCycleResult min_mean_cycle_witness(
    const Digraph& g, std::span<const Rational> edge_costs) {
  if (static_cast<EdgeId>(edge_costs.size()) != g.edge_count())
    throw DomainError("edge cost count does not match graph");
  SccPartition scc = strongly_connected_components(g);
  std::vector<detail::KarpComponent> components(
      static_cast<std::size_t>(scc.count));
  std::vector<int> local_index(static_cast<std::size_t>(g.vertex_count()), -1);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    auto& comp = components[static_cast<std::size_t>(
        scc.component[static_cast<std::size_t>(v)])];
    local_index[static_cast<std::size_t>(v)] =
        static_cast<int>(comp.vertices.size());
    comp.vertices.push_back(v);
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    int cv = scc.component[static_cast<std::size_t>(v)];
    EdgeId e = g.first_out_edge(v);
    for (Vertex w : g.successors(v)) {
      if (scc.component[static_cast<std::size_t>(w)] == cv) {
        auto& comp = components[static_cast<std::size_t>(cv)];
        comp.edges.emplace_back(local_index[static_cast<std::size_t>(v)],
                                local_index[static_cast<std::size_t>(w)]);
        comp.edge_costs.push_back(edge_costs[static_cast<std::size_t>(e)]);
      }
      ++e;
    }
  }
  std::optional<MeanCycleResult> best;
  for (const auto& comp : components) {
    if (comp.edges.empty()) continue;  // single vertex without self-loop
    MeanCycleResult local = comp.solve();
    if (!best || local.mean < best->mean) best = std::move(local);
  }
  if (!best) throw StructureError("graph has no directed cycle");
  if (detail::cycle_mean_over_costs(g, edge_costs, best->cycle) != best->mean)
    throw AssertionFailure("Karp witness does not attain the reported mean");
  return *best;
}

inline MeanCycleResult max_mean_cycle_witness(
    const Digraph& g, std::span<const Rational> edge_costs) {
  std::vector<Rational> negated(edge_costs.size());
  for (std::size_t i = 0; i < edge_costs.size(); ++i)
    negated[i] = -edge_costs[i];
  MeanCycleResult result = min_mean_cycle_witness(g, negated);
  result.mean = -result.mean;
  return result;
}

inline Rational min_mean_cycle(const Digraph& g,
                               std::span<const Rational> edge_costs) {
  return min_mean_cycle_witness(g, edge_costs).mean;
}

inline Rational max_mean_cycle(const Digraph& g,
                               std::span<const Rational> edge_costs) {
  return max_mean_cycle_witness(g, edge_costs).mean;
}

struct CycleReport {
  Rational target_mean;
  Rational min_mean;  // over all cycles (Karp)
  Rational max_mean;
  bool all_equal = false;
  std::int64_t cycle_count = 0;  // simple cycles enumerated
  bool enumeration_complete = true;
  std::map<Rational, std::int64_t> mean_counts;  // empty when incomplete
  std::optional<std::vector<Vertex>> witness;    // a cycle off the target
};

// Runs both oracles: exhaustive simple-cycle enumeration (up to `cycle_cap`)
// and the Karp min/max means. all_equal holds exactly when every cycle mean
// equals the target; with no explicit target the Karp minimum is used, which
// turns the check into "all cycle means coincide". When the cap is exceeded
// the report flags the enumeration as incomplete and the verdict rests on
// the min/max oracle alone.
inline CycleReport verify_equal_means(
    const Digraph& g, const VertexWeights& c,
    std::span<const Rational> edge_weights,
    std::optional<Rational> target = std::nullopt,
    std::int64_t cycle_cap = kDefaultCycleCap) {
  const std::vector<Rational> costs = edge_cost_projection(g, c, edge_weights);
  MeanCycleResult low = min_mean_cycle_witness(g, costs);
  MeanCycleResult high = max_mean_cycle_witness(g, costs);

  CycleReport report;
  report.target_mean = target.value_or(low.mean);
  report.min_mean = low.mean;
  report.max_mean = high.mean;
  try {
    for_each_simple_cycle(g, cycle_cap, [&](std::span<const Vertex> cycle) {
      ++report.cycle_count;
      Rational mean = detail::cycle_mean_over_costs(g, costs, cycle);
      ++report.mean_counts[mean];
      if (mean != report.target_mean && !report.witness)
        report.witness = canonical_cycle(cycle);
    });
  } catch (const CapacityError&) {
    report.enumeration_complete = false;
    report.cycle_count = cycle_cap;
    report.mean_counts.clear();
  }
  bool enumerated_ok =
      !report.enumeration_complete ||
      (report.mean_counts.size() == 1 &&
       report.mean_counts.begin()->first == report.target_mean);
  report.all_equal = report.min_mean == report.target_mean &&
                     report.max_mean == report.target_mean && enumerated_ok;
  if (!report.all_equal && !report.witness) {
    report.witness =
        low.mean != report.target_mean ? low.cycle : high.cycle;
  }
  return report;
}

inline CycleReport verify_equal_means(const DeBruijnGraph& g,
                                      const VertexWeights& c,
                                      const EdgeWeightAssignment& f,
                                      std::int64_t cycle_cap = kDefaultCycleCap) {
  return verify_equal_means(g.to_digraph(), c, std::span(f.values()),
                            c.mean(), cycle_cap);
}

// Flat key-value block with stable key order, for diffable output.
inline std::string to_text(const CycleReport& report,
                           const NumberFormat& fmt = {}) {
  std::string out;
  out += "target_mean " + fmt(report.target_mean) + '\n';
  out += "min_mean " + fmt(report.min_mean) + '\n';
  out += "max_mean " + fmt(report.max_mean) + '\n';
  out += std::string("all_equal ") + (report.all_equal ? "true" : "false") + '\n';
  out += "cycle_count " + std::to_string(report.cycle_count) + '\n';
  out += std::string("enumeration_complete ") +
         (report.enumeration_complete ? "true" : "false") + '\n';
  if (report.enumeration_complete) {
    out += "distinct_means " + std::to_string(report.mean_counts.size()) + '\n';
    std::size_t listed = 0;
    for (const auto& [mean, count] : report.mean_counts) {
      if (++listed > 16) {
        out += "means_truncated true\n";
        break;
      }
      out += "mean " + fmt(mean) + ' ' + std::to_string(count) + '\n';
    }
  } else {
    out += "distinct_means na\n";
  }
  if (report.witness) {
    out += "witness";
    for (Vertex v : *report.witness) out += ' ' + std::to_string(v);
    out += '\n';
  } else {
    out += "witness none\n";
  }
  return out;
}

}  // namespace dbb
