#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbb/cycles.hpp"
#include "dbb/errors.hpp"
#include "dbb/linalg.hpp"
#include "dbb/rational.hpp"
#include "dbb/value.hpp"
#include "dbb/weights.hpp"

namespace dbb {

// The time-independent balanced assignment: for t <= T - d - 1 the
// equalizing weights do not depend on t, so they are computed once from the
// closed-form values at turn 1 and cross-checked against the
// backward-induction weights over the whole stationary window. Under this
// assignment every cycle's mean equals the global vertex-weight mean.
inline EdgeWeightAssignment stationary_weights(const GameConfig& cfg) {
  const DeBruijnGraph& g = cfg.graph;
  const int d = g.word_length();
  if (cfg.horizon < d + 1)
    throw HorizonError("horizon " + std::to_string(cfg.horizon) +
                       " is too short; need at least d + 1 = " +
                       std::to_string(d + 1));
  const int n = g.symbols();
  const std::vector<Rational> next_values = value_closed_form_slice(cfg, 1);
  EdgeWeightAssignment f(g);
  for (Vertex m = 0; m < g.vertex_count(); ++m) {
    Rational sum = 0;
    for (int digit = 0; digit < n; ++digit)
      sum += next_values[static_cast<std::size_t>(g.successor(m, digit))];
    const Rational average = sum / Rational(n);
    for (int digit = 0; digit < n; ++digit)
      f.at(m, digit) =
          average - next_values[static_cast<std::size_t>(g.successor(m, digit))];
  }

  const ValueTable vt = solve_minmax(cfg);
  for (int t = 0; t <= cfg.horizon - d - 1; ++t)
    for (Vertex m = 0; m < g.vertex_count(); ++m)
      for (int digit = 0; digit < n; ++digit)
        if (vt.turn_weight(t, m, digit) != f.at(m, digit))
          throw AssertionFailure(
              "closed-form stationary weight disagrees with backward "
              "induction at turn " +
              std::to_string(t));
  return f;
}

struct StationarityCheck {
  bool stationary = true;        // weights agree across turns 0..T-d-1
  bool boundary_matches = true;  // turn T-d agrees with the window as well
  struct Violation {
    int turn;
    Vertex source;
    int digit;
  };
  std::optional<Violation> first_violation;
};

// Compares the equalizing weights recomputed from the table's values across
// the stationary window. The turn T-d is reported separately: the window
// guaranteed by the theory is {0..T-d-1}, and whether its right boundary
// also matches is an observation, not an assumption.
inline StationarityCheck verify_stationarity(const GameConfig& cfg,
                                             const ValueTable& vt) {
  StationarityCheck check;
  const DeBruijnGraph& g = cfg.graph;
  const int d = g.word_length();
  const int last_window_turn = cfg.horizon - d - 1;
  if (last_window_turn < 0) return check;  // empty window: vacuously true

  std::vector<std::vector<Rational>> reference(
      static_cast<std::size_t>(g.vertex_count()));
  for (Vertex m = 0; m < g.vertex_count(); ++m)
    reference[static_cast<std::size_t>(m)] = optimal_edge_weights(cfg, vt, 0, m);

  for (int t = 1; t <= last_window_turn && check.stationary; ++t) {
    for (Vertex m = 0; m < g.vertex_count() && check.stationary; ++m) {
      std::vector<Rational> weights = optimal_edge_weights(cfg, vt, t, m);
      for (int digit = 0; digit < g.symbols(); ++digit) {
        if (weights[static_cast<std::size_t>(digit)] !=
            reference[static_cast<std::size_t>(m)]
                     [static_cast<std::size_t>(digit)]) {
          check.stationary = false;
          check.first_violation = {t, m, digit};
          break;
        }
      }
    }
  }

  const int boundary = cfg.horizon - d;
  if (boundary < cfg.horizon) {
    for (Vertex m = 0; m < g.vertex_count() && check.boundary_matches; ++m) {
      std::vector<Rational> weights = optimal_edge_weights(cfg, vt, boundary, m);
      for (int digit = 0; digit < g.symbols(); ++digit) {
        if (weights[static_cast<std::size_t>(digit)] !=
            reference[static_cast<std::size_t>(m)]
                     [static_cast<std::size_t>(digit)]) {
          check.boundary_matches = false;
          break;
        }
      }
    }
  }
  return check;
}

// Residual of the discrete Poisson identity at turn t < T - d:
//   [v(t,m) - (1/n) sum_digits v(t, m|digit)] - [c(m) - mean(c)]
// per vertex; exactly zero everywhere. The Laplacian here is normalized by
// 1/n and evaluated at one fixed turn on both sides.
inline std::vector<Rational> poisson_residual(const GameConfig& cfg,
                                              const ValueTable& vt, int t) {
  const DeBruijnGraph& g = cfg.graph;
  const int d = g.word_length();
  if (t < 0 || t >= cfg.horizon - d)
    throw DomainError("turn " + std::to_string(t) +
                      " is outside the window t < T - d");
  const Rational mean = cfg.costs.mean();
  const Rational inv_n(1, g.symbols());
  std::vector<Rational> residual(static_cast<std::size_t>(g.vertex_count()));
  for (Vertex m = 0; m < g.vertex_count(); ++m) {
    Rational sum = 0;
    for (int digit = 0; digit < g.symbols(); ++digit)
      sum += vt.at(t, g.successor(m, digit));
    const Rational laplacian = vt.at(t, m) - sum * inv_n;
    residual[static_cast<std::size_t>(m)] =
        laplacian - (cfg.costs.at(m) - mean);
  }
  return residual;
}

// Linear system whose unknowns are the edge weights: one equation per simple
// cycle (edge weights along the cycle sum to length * mean - vertex costs)
// plus one zero-sum equation per vertex.
class CycleConstraintSystem {
 public:
  CycleConstraintSystem(Digraph graph, const VertexWeights& costs,
                        const std::vector<std::vector<Vertex>>& cycles,
                        std::int64_t assembly_cap = kDefaultCycleCap)
      : graph_(std::move(graph)), target_mean_(costs.mean()) {
    if (costs.size() != graph_.vertex_count())
      throw DomainError("vertex weight count does not match graph");
    if (static_cast<std::int64_t>(cycles.size()) > assembly_cap)
      throw CapacityError("cycle count " + std::to_string(cycles.size()) +
                          " exceeds assembly cap " +
                          std::to_string(assembly_cap));
    cycle_edges_.reserve(cycles.size());
    cycle_rhs_.reserve(cycles.size());
    for (const auto& cycle : cycles) {
      std::vector<EdgeId> edges;
      Rational vertex_total = 0;
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        Vertex from = cycle[i];
        Vertex to = cycle[(i + 1) % cycle.size()];
        EdgeId e = graph_.find_edge(from, to);
        if (e < 0)
          throw StructureError(std::to_string(from) + " -> " +
                               std::to_string(to) + " is not an edge");
        edges.push_back(e);
        vertex_total += costs.at(from);
      }
      cycle_rhs_.push_back(
          Rational(static_cast<std::int64_t>(cycle.size())) * target_mean_ -
          vertex_total);
      cycle_edges_.push_back(std::move(edges));
    }
  }

  std::int64_t equation_count() const {
    return static_cast<std::int64_t>(cycle_edges_.size()) +
           graph_.vertex_count();
  }
  std::int64_t variable_count() const { return graph_.edge_count(); }
  const Rational& target_mean() const { return target_mean_; }

  // Exact satisfaction of every cycle equation and every zero-sum equation.
  bool verify(std::span<const Rational> edge_values) const {
    if (static_cast<EdgeId>(edge_values.size()) != graph_.edge_count())
      throw DomainError("edge value count does not match graph");
    for (std::size_t r = 0; r < cycle_edges_.size(); ++r) {
      Rational sum = 0;
      for (EdgeId e : cycle_edges_[r])
        sum += edge_values[static_cast<std::size_t>(e)];
      if (sum != cycle_rhs_[r]) return false;
    }
    for (Vertex v = 0; v < graph_.vertex_count(); ++v) {
      Rational sum = 0;
      EdgeId first = graph_.first_out_edge(v);
      for (std::int64_t i = 0; i < graph_.out_degree(v); ++i)
        sum += edge_values[static_cast<std::size_t>(first + i)];
      if (!sum.is_zero()) return false;
    }
    return true;
  }

  struct Analysis {
    std::int64_t reduced_rank = 0;   // cycle rows on the zero-sum subspace
    std::int64_t zero_sum_rank = 0;  // vertices with at least one out-edge
    std::int64_t full_rank = 0;      // independent constraints overall
    bool consistent = false;
    bool unique = false;
    std::vector<Rational> solution;  // full edge vector when unique
  };

  // Eliminates the zero-sum constraints (each vertex's last outgoing edge is
  // minus the sum of its siblings), then runs exact elimination on the cycle
  // rows: rank by fraction-free Bareiss, solution by rational Gauss-Jordan.
  // Capped at 64 vertices.
  Analysis analyze(Vertex rank_vertex_cap = 64) const {
    if (graph_.vertex_count() > rank_vertex_cap)
      throw CapacityError("rank analysis capped at " +
                          std::to_string(rank_vertex_cap) + " vertices");
    const EdgeId edges = graph_.edge_count();
    std::vector<std::int64_t> column_of(static_cast<std::size_t>(edges), -1);
    std::int64_t columns = 0;
    for (Vertex v = 0; v < graph_.vertex_count(); ++v) {
      EdgeId first = graph_.first_out_edge(v);
      for (std::int64_t i = 0; i + 1 < graph_.out_degree(v); ++i)
        column_of[static_cast<std::size_t>(first + i)] = columns++;
    }

    RationalMatrix reduced(cycle_edges_.size(),
                           std::vector<Rational>(
                               static_cast<std::size_t>(columns), Rational(0)));
    for (std::size_t r = 0; r < cycle_edges_.size(); ++r) {
      for (EdgeId e : cycle_edges_[r]) {
        if (std::int64_t col = column_of[static_cast<std::size_t>(e)]; col >= 0) {
          reduced[r][static_cast<std::size_t>(col)] += 1;
        } else {
          Vertex v = graph_.edge_source(e);
          EdgeId first = graph_.first_out_edge(v);
          for (std::int64_t i = 0; i + 1 < graph_.out_degree(v); ++i)
            reduced[r][static_cast<std::size_t>(
                column_of[static_cast<std::size_t>(first + i)])] -= 1;
        }
      }
    }

    Analysis analysis;
    analysis.reduced_rank = fraction_free_rank(reduced);
    for (Vertex v = 0; v < graph_.vertex_count(); ++v)
      if (graph_.out_degree(v) > 0) ++analysis.zero_sum_rank;
    // zero-sum rows touch disjoint variable sets, so the whole system's
    // rank splits into theirs plus the reduced cycle rank
    analysis.full_rank = analysis.zero_sum_rank + analysis.reduced_rank;
    LinearSolveResult solve = solve_linear_system(reduced, cycle_rhs_);
    if (solve.rank != analysis.reduced_rank)
      throw AssertionFailure(
          "fraction-free and rational elimination disagree on rank");
    analysis.consistent = solve.consistent;
    analysis.unique = solve.unique;
    if (solve.consistent) {
      analysis.solution.assign(static_cast<std::size_t>(edges), Rational(0));
      for (EdgeId e = 0; e < edges; ++e)
        if (std::int64_t col = column_of[static_cast<std::size_t>(e)]; col >= 0)
          analysis.solution[static_cast<std::size_t>(e)] =
              solve.solution[static_cast<std::size_t>(col)];
      for (Vertex v = 0; v < graph_.vertex_count(); ++v) {
        EdgeId first = graph_.first_out_edge(v);
        std::int64_t degree = graph_.out_degree(v);
        if (degree == 0) continue;
        Rational sum = 0;
        for (std::int64_t i = 0; i + 1 < degree; ++i)
          sum += analysis.solution[static_cast<std::size_t>(first + i)];
        analysis.solution[static_cast<std::size_t>(first + degree - 1)] = -sum;
      }
    }
    return analysis;
  }

 private:
  Digraph graph_;
  Rational target_mean_;
  std::vector<std::vector<EdgeId>> cycle_edges_;
  std::vector<Rational> cycle_rhs_;
};

inline CycleConstraintSystem cycle_constraint_system(
    const Digraph& graph, const VertexWeights& costs,
    const std::vector<std::vector<Vertex>>& cycles,
    std::int64_t assembly_cap = kDefaultCycleCap) {
  return CycleConstraintSystem(graph, costs, cycles, assembly_cap);
}

struct BalanceReport {
  Rational global_mean;
  bool poisson_checked = false;
  Rational poisson_residual_max;  // max |residual| over the checked window
  std::optional<std::int64_t> cycle_equations;
  std::optional<std::int64_t> cycle_variables;
  std::optional<bool> cycle_residual_zero;
  std::optional<std::int64_t> cycle_rank;
};

inline BalanceReport make_balance_report(const GameConfig& cfg,
                                         const ValueTable& vt,
                                         const EdgeWeightAssignment& f,
                                         std::int64_t cycle_cap = kDefaultCycleCap,
                                         Vertex rank_vertex_cap = 64) {
  BalanceReport report;
  report.global_mean = cfg.costs.mean();
  report.poisson_residual_max = 0;
  const int window = cfg.horizon - cfg.graph.word_length();
  report.poisson_checked = window > 0;
  for (int t = 0; t < window; ++t) {
    for (const Rational& r : poisson_residual(cfg, vt, t)) {
      Rational magnitude = r.abs();
      if (report.poisson_residual_max < magnitude)
        report.poisson_residual_max = magnitude;
    }
  }
  if (cfg.graph.vertex_count() <= rank_vertex_cap) {
    try {
      Digraph g = cfg.graph.to_digraph();
      auto cycles = enumerate_simple_cycles(g, cycle_cap);
      CycleConstraintSystem system(g, cfg.costs, cycles, cycle_cap);
      report.cycle_equations = system.equation_count();
      report.cycle_variables = system.variable_count();
      report.cycle_residual_zero = system.verify(f.values());
      report.cycle_rank = system.analyze(rank_vertex_cap).reduced_rank;
    } catch (const CapacityError&) {
      // leave the cycle-system fields unset
    }
  }
  return report;
}

inline std::string to_text(const BalanceReport& report,
                           const NumberFormat& fmt = {}) {
  auto opt_int = [](const std::optional<std::int64_t>& v) {
    return v ? std::to_string(*v) : std::string("na");
  };
  std::string out;
  out += "global_mean " + fmt(report.global_mean) + '\n';
  out += std::string("poisson_checked ") +
         (report.poisson_checked ? "true" : "false") + '\n';
  out += "poisson_residual_max " + fmt(report.poisson_residual_max) + '\n';
  out += "cycle_equations " + opt_int(report.cycle_equations) + '\n';
  out += "cycle_variables " + opt_int(report.cycle_variables) + '\n';
  out += "cycle_residual_zero ";
  out += report.cycle_residual_zero
             ? (*report.cycle_residual_zero ? "true" : "false")
             : "na";
  out += '\n';
  out += "cycle_rank " + opt_int(report.cycle_rank) + '\n';
  return out;
}

}  // namespace dbb
