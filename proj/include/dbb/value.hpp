#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dbb/debruijn.hpp"
#include "dbb/errors.hpp"
#include "dbb/rational.hpp"
#include "dbb/weights.hpp"

namespace dbb {

// One game instance: the graph, the vertex costs, and the horizon T. The
// weight setter pays for the path, the mover collects; play runs from turn 0
// through turn T.
struct GameConfig {
  GameConfig(DeBruijnGraph graph_in, VertexWeights costs_in, int horizon_in)
      : graph(std::move(graph_in)),
        costs(std::move(costs_in)),
        horizon(horizon_in) {
    if (horizon < 0) throw DomainError("horizon must be nonnegative");
    if (costs.size() != graph.vertex_count())
      throw DomainError("vertex weight count does not match graph");
  }

  DeBruijnGraph graph;
  VertexWeights costs;
  int horizon;
};

enum class GameVariant { kMinMax, kMaxMin, kMixed };

// Backward-induction value v(t, m) for t in 0..T and every vertex, plus the
// equalizing edge weight chosen at each turn t < T.
class ValueTable {
 public:
  ValueTable(int horizon, Vertex vertex_count, int symbols, GameVariant variant)
      : horizon_(horizon),
        vertex_count_(vertex_count),
        symbols_(symbols),
        variant_(variant),
        values_(static_cast<std::size_t>(horizon + 1) *
                static_cast<std::size_t>(vertex_count)),
        turn_weights_(static_cast<std::size_t>(horizon) *
                      static_cast<std::size_t>(vertex_count) *
                      static_cast<std::size_t>(symbols)) {
    if (horizon < 0 || vertex_count <= 0 || symbols <= 0)
      throw DomainError("bad value table shape");
  }

  int horizon() const { return horizon_; }
  Vertex vertex_count() const { return vertex_count_; }
  int symbols() const { return symbols_; }
  GameVariant variant() const { return variant_; }

  // The turn set a mixed-variant table was solved with; empty otherwise.
  const std::set<int>& mixed_turns() const { return mixed_turns_; }
  void set_mixed_turns(std::set<int> turns) { mixed_turns_ = std::move(turns); }

  const Rational& at(int t, Vertex m) const { return values_[index(t, m)]; }
  Rational& at(int t, Vertex m) { return values_[index(t, m)]; }

  // Cost of an optimally played game with `steps_left` turns remaining,
  // i.e. the value at turn T - steps_left.
  const Rational& game_cost(int steps_left, Vertex m) const {
    if (steps_left < 0 || steps_left > horizon_)
      throw DomainError("steps out of range");
    return at(horizon_ - steps_left, m);
  }

  // Equalizing weight put on edge (m, digit) at turn t.
  const Rational& turn_weight(int t, Vertex m, int digit) const {
    return turn_weights_[weight_index(t, m, digit)];
  }
  Rational& turn_weight(int t, Vertex m, int digit) {
    return turn_weights_[weight_index(t, m, digit)];
  }

  bool same_values(const ValueTable& other) const {
    return horizon_ == other.horizon_ && vertex_count_ == other.vertex_count_ &&
           values_ == other.values_;
  }

 private:
  std::size_t index(int t, Vertex m) const {
    if (t < 0 || t > horizon_) throw DomainError("turn out of range");
    if (m < 0 || m >= vertex_count_)
      throw DomainError("vertex " + std::to_string(m) + " out of range");
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(vertex_count_) +
           static_cast<std::size_t>(m);
  }
  std::size_t weight_index(int t, Vertex m, int digit) const {
    if (t < 0 || t >= horizon_) throw DomainError("turn out of range");
    if (m < 0 || m >= vertex_count_)
      throw DomainError("vertex " + std::to_string(m) + " out of range");
    if (digit < 0 || digit >= symbols_) throw DomainError("digit out of range");
    return (static_cast<std::size_t>(t) * static_cast<std::size_t>(vertex_count_) +
            static_cast<std::size_t>(m)) *
               static_cast<std::size_t>(symbols_) +
           static_cast<std::size_t>(digit);
  }

  int horizon_;
  Vertex vertex_count_;
  int symbols_;
  GameVariant variant_;
  std::set<int> mixed_turns_;
  std::vector<Rational> values_;
  std::vector<Rational> turn_weights_;
};

// Turns at which the weight setter minimizes and the mover maximizes; on the
// complement the roles swap.
class TurnSet {
 public:
  TurnSet(int horizon, std::set<int> turns)
      : horizon_(horizon), turns_(std::move(turns)) {
    if (horizon < 0) throw DomainError("horizon must be nonnegative");
    for (int t : turns_)
      if (t < 0 || t >= horizon)
        throw DomainError("turn " + std::to_string(t) +
                          " outside {0..T-1}");
  }

  static TurnSet all(int horizon) {
    std::set<int> s;
    for (int t = 0; t < horizon; ++t) s.insert(t);
    return TurnSet(horizon, std::move(s));
  }
  static TurnSet none(int horizon) { return TurnSet(horizon, {}); }

  int horizon() const { return horizon_; }
  bool contains(int t) const { return turns_.count(t) > 0; }
  const std::set<int>& turns() const { return turns_; }

 private:
  int horizon_;
  std::set<int> turns_;
};

// Randomized move rule: a probability vector over the n outgoing digits for
// every (turn, vertex). Rows are exact rationals, nonnegative, summing to 1.
class MoveStrategy {
 public:
  MoveStrategy(int horizon, Vertex vertex_count, int symbols)
      : horizon_(horizon),
        vertex_count_(vertex_count),
        symbols_(symbols),
        probs_(static_cast<std::size_t>(horizon) *
                   static_cast<std::size_t>(vertex_count) *
                   static_cast<std::size_t>(symbols),
               Rational(1, symbols)) {
    if (horizon < 0 || vertex_count <= 0 || symbols <= 0)
      throw DomainError("bad strategy shape");
  }

  static MoveStrategy point_mass(int horizon, Vertex vertex_count, int symbols,
                                 int digit) {
    MoveStrategy s(horizon, vertex_count, symbols);
    std::vector<Rational> row(static_cast<std::size_t>(symbols), Rational(0));
    if (digit < 0 || digit >= symbols) throw DomainError("digit out of range");
    row[static_cast<std::size_t>(digit)] = 1;
    for (int t = 0; t < horizon; ++t)
      for (Vertex m = 0; m < vertex_count; ++m) s.set(t, m, row);
    return s;
  }

  void set(int t, Vertex m, std::vector<Rational> row) {
    if (static_cast<int>(row.size()) != symbols_)
      throw DomainError("probability row has wrong length");
    Rational total = 0;
    for (const Rational& p : row) {
      if (p.sign() < 0) throw DomainError("negative move probability");
      total += p;
    }
    if (total != Rational(1))
      throw DomainError("move probabilities must sum to 1");
    std::size_t base = index(t, m);
    for (int digit = 0; digit < symbols_; ++digit)
      probs_[base + static_cast<std::size_t>(digit)] =
          row[static_cast<std::size_t>(digit)];
  }

  std::span<const Rational> at(int t, Vertex m) const {
    return {probs_.data() + index(t, m), static_cast<std::size_t>(symbols_)};
  }

  int horizon() const { return horizon_; }
  int symbols() const { return symbols_; }

 private:
  std::size_t index(int t, Vertex m) const {
    if (t < 0 || t >= horizon_) throw DomainError("turn out of range");
    if (m < 0 || m >= vertex_count_) throw DomainError("vertex out of range");
    return (static_cast<std::size_t>(t) * static_cast<std::size_t>(vertex_count_) +
            static_cast<std::size_t>(m)) *
           static_cast<std::size_t>(symbols_);
  }

  int horizon_;
  Vertex vertex_count_;
  int symbols_;
  std::vector<Rational> probs_;
};

namespace detail {

// Shared backward induction. At each turn the weight setter equalizes the
// mover's options (the unique optimum among linear expressions with a
// zero-sum weight constraint); the slice then evaluates the mover's extremum
// over digits, whose direction depends on the variant and, for mixed games,
// on the turn.
inline ValueTable solve_backward(const GameConfig& cfg, GameVariant variant,
                                 const TurnSet* mixed_turns) {
  const DeBruijnGraph& g = cfg.graph;
  const int n = g.symbols();
  const Vertex vertices = g.vertex_count();
  const int horizon = cfg.horizon;
  ValueTable vt(horizon, vertices, n, variant);
  for (Vertex m = 0; m < vertices; ++m) vt.at(horizon, m) = cfg.costs.at(m);
  const Rational inv_n(1, n);
  for (int t = horizon - 1; t >= 0; --t) {
    const bool mover_maximizes =
        variant == GameVariant::kMinMax ||
        (variant == GameVariant::kMixed && mixed_turns->contains(t));
    for (Vertex m = 0; m < vertices; ++m) {
      Rational sum = 0;
      for (int digit = 0; digit < n; ++digit)
        sum += vt.at(t + 1, g.successor(m, digit));
      const Rational average = sum * inv_n;
      std::optional<Rational> best;
      for (int digit = 0; digit < n; ++digit) {
        const Rational& next = vt.at(t + 1, g.successor(m, digit));
        const Rational weight = average - next;
        vt.turn_weight(t, m, digit) = weight;
        const Rational option = cfg.costs.at(m) + weight + next;
        if (!best || (mover_maximizes ? *best < option : option < *best))
          best = option;
      }
      vt.at(t, m) = *best;
    }
  }
  return vt;
}

}  // namespace detail

// Baseline game: the weight setter minimizes, the mover maximizes.
inline ValueTable solve_minmax(const GameConfig& cfg) {
  return detail::solve_backward(cfg, GameVariant::kMinMax, nullptr);
}

// Swapped objectives: the weight setter maximizes, the mover minimizes. The
// resulting table must coincide with the baseline; a mismatch means a bug.
inline ValueTable solve_maxmin(const GameConfig& cfg) {
  ValueTable table = detail::solve_backward(cfg, GameVariant::kMaxMin, nullptr);
  if (!table.same_values(solve_minmax(cfg)))
    throw AssertionFailure("max-min value table differs from min-max table");
  return table;
}

// Mixed game: on turns in `turns` the weight setter minimizes and the mover
// maximizes; elsewhere the roles swap. The table must again equal the
// baseline.
inline ValueTable solve_mixed(const GameConfig& cfg, const TurnSet& turns) {
  if (turns.horizon() != cfg.horizon)
    throw DomainError("turn set horizon does not match game");
  ValueTable table = detail::solve_backward(cfg, GameVariant::kMixed, &turns);
  table.set_mixed_turns(turns.turns());
  if (!table.same_values(solve_minmax(cfg)))
    throw AssertionFailure("mixed value table differs from min-max table");
  return table;
}

// One whole slice of the closed-form value: for each vertex, the sum over
// path lengths j of n^-j times the total cost over all length-j digit
// strings. Lengths >= d contribute the global mean once each, so the tail
// collapses to (T - t - d + 1) times the mean when T - t > d; the boundary
// length T - t = d goes through the generic sum.
inline std::vector<Rational> value_closed_form_slice(const GameConfig& cfg,
                                                     int t) {
  if (t < 0 || t > cfg.horizon) throw DomainError("turn out of range");
  const DeBruijnGraph& g = cfg.graph;
  const int n = g.symbols();
  const int d = g.word_length();
  const Vertex vertices = g.vertex_count();
  const int steps = cfg.horizon - t;
  const int direct_terms = steps > d ? d - 1 : steps;

  std::vector<Rational> total(cfg.costs.values().begin(),
                              cfg.costs.values().end());
  // path_sums[m] = sum of c over all length-j digit strings appended to m
  std::vector<Rational> path_sums = total;
  std::vector<Rational> next(static_cast<std::size_t>(vertices));
  for (int j = 1; j <= direct_terms; ++j) {
    for (Vertex m = 0; m < vertices; ++m) {
      Rational sum = 0;
      for (int digit = 0; digit < n; ++digit)
        sum += path_sums[static_cast<std::size_t>(g.successor(m, digit))];
      next[static_cast<std::size_t>(m)] = sum;
    }
    path_sums.swap(next);
    const Rational scale(1, checked_pow(n, j));
    for (Vertex m = 0; m < vertices; ++m)
      total[static_cast<std::size_t>(m)] +=
          path_sums[static_cast<std::size_t>(m)] * scale;
  }
  if (steps > d) {
    const Rational tail = Rational(steps - d + 1) * cfg.costs.mean();
    for (Rational& v : total) v += tail;
  }
  return total;
}

inline Rational value_closed_form(const GameConfig& cfg, int t, Vertex m) {
  if (m < 0 || m >= cfg.graph.vertex_count())
    throw DomainError("vertex " + std::to_string(m) + " out of range");
  return value_closed_form_slice(cfg, t)[static_cast<std::size_t>(m)];
}

// Backward induction keeping only two slices; returns the slice at turn t.
// Memory stays O(N) for cross-checking the closed form at large horizons.
inline std::vector<Rational> value_slice_rolling(const GameConfig& cfg, int t) {
  if (t < 0 || t > cfg.horizon) throw DomainError("turn out of range");
  const DeBruijnGraph& g = cfg.graph;
  const int n = g.symbols();
  const Vertex vertices = g.vertex_count();
  const Rational inv_n(1, n);
  std::vector<Rational> later(cfg.costs.values().begin(),
                              cfg.costs.values().end());
  std::vector<Rational> current(static_cast<std::size_t>(vertices));
  for (int s = cfg.horizon - 1; s >= t; --s) {
    for (Vertex m = 0; m < vertices; ++m) {
      Rational sum = 0;
      for (int digit = 0; digit < n; ++digit)
        sum += later[static_cast<std::size_t>(g.successor(m, digit))];
      current[static_cast<std::size_t>(m)] = cfg.costs.at(m) + sum * inv_n;
    }
    later.swap(current);
  }
  return later;
}

// The equalizing weights at (t, m): average of the successors' next-turn
// values minus each successor's own value. Sums to zero and makes all of the
// mover's options equal.
inline std::vector<Rational> optimal_edge_weights(const GameConfig& cfg,
                                                  const ValueTable& vt,
                                                  int t, Vertex m) {
  if (t < 0 || t >= cfg.horizon)
    throw DomainError("turn " + std::to_string(t) + " has no weight choice");
  if (vt.horizon() != cfg.horizon ||
      vt.vertex_count() != cfg.graph.vertex_count())
    throw DomainError("value table does not match game config");
  const DeBruijnGraph& g = cfg.graph;
  const int n = g.symbols();
  Rational sum = 0;
  for (int digit = 0; digit < n; ++digit)
    sum += vt.at(t + 1, g.successor(m, digit));
  const Rational average = sum / Rational(n);
  std::vector<Rational> weights(static_cast<std::size_t>(n));
  for (int digit = 0; digit < n; ++digit)
    weights[static_cast<std::size_t>(digit)] =
        average - vt.at(t + 1, g.successor(m, digit));
  return weights;
}

// One-step expected cost when the mover randomizes by `strategy` against the
// equalizing weights. Equal to v(t, m) for every probability vector.
inline Rational expected_cost_under_strategy(const GameConfig& cfg,
                                             const ValueTable& vt,
                                             const MoveStrategy& strategy,
                                             int t, Vertex m) {
  if (t < 0 || t >= cfg.horizon) throw DomainError("turn out of range");
  if (strategy.horizon() != cfg.horizon ||
      strategy.symbols() != cfg.graph.symbols())
    throw DomainError("strategy does not match game config");
  const std::vector<Rational> weights = optimal_edge_weights(cfg, vt, t, m);
  auto probs = strategy.at(t, m);
  Rational total = 0;
  for (int digit = 0; digit < cfg.graph.symbols(); ++digit) {
    const Rational option = cfg.costs.at(m) +
                            weights[static_cast<std::size_t>(digit)] +
                            vt.at(t + 1, cfg.graph.successor(m, digit));
    total += probs[static_cast<std::size_t>(digit)] * option;
  }
  return total;
}

}  // namespace dbb
