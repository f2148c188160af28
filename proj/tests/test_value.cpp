#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "dbb/value.hpp"
#include "support.hpp"

using dbb::DeBruijnGraph;
using dbb::GameConfig;
using dbb::MoveStrategy;
using dbb::Rational;
using dbb::TurnSet;
using dbb::ValueTable;
using dbb::Vertex;
using dbb::VertexWeights;

namespace {

GameConfig b21_config(int horizon) {
  return GameConfig(DeBruijnGraph(2, 1),
                    testsupport::weights_from({Rational(1), Rational(3)}),
                    horizon);
}

GameConfig worked_b22(int horizon) {
  return GameConfig(DeBruijnGraph(2, 2),
                    testsupport::weights_from(
                        {Rational(0), Rational(4), Rational(0), Rational(0)}),
                    horizon);
}

}  // namespace

TEST_SUITE("value") {

TEST_CASE("terminal turn equals the costs") {
  std::mt19937_64 rng(3);
  GameConfig cfg(DeBruijnGraph(2, 2), testsupport::random_weights(rng, 4), 0);
  ValueTable vt = dbb::solve_minmax(cfg);
  for (Vertex m = 0; m < 4; ++m) CHECK(vt.at(0, m) == cfg.costs.at(m));
}

TEST_CASE("constant costs accumulate linearly") {
  for (auto [n, d] : {std::pair{2, 1}, {2, 2}, {3, 2}}) {
    GameConfig cfg(DeBruijnGraph(n, d),
                   VertexWeights::constant(dbb::checked_pow(n, d), Rational(7, 2)),
                   6);
    ValueTable vt = dbb::solve_minmax(cfg);
    for (int t = 0; t <= 6; ++t)
      for (Vertex m = 0; m < cfg.graph.vertex_count(); ++m)
        CHECK(vt.at(t, m) == Rational(7, 2) * Rational(6 - t + 1));
  }
}

TEST_CASE("frozen two-vertex game") {
  GameConfig cfg = b21_config(5);
  ValueTable vt = dbb::solve_minmax(cfg);
  for (int t = 0; t <= 5; ++t) {
    CHECK(vt.at(t, 0) == Rational(1 + 2 * (5 - t)));
    CHECK(vt.at(t, 1) == Rational(3 + 2 * (5 - t)));
  }
  CHECK(vt.at(0, 0) == Rational(11));
  CHECK(vt.game_cost(5, 0) == Rational(11));
  CHECK(vt.game_cost(0, 1) == Rational(3));
  CHECK_THROWS_AS(vt.game_cost(6, 0), dbb::DomainError);
}

TEST_CASE("one-step recursion holds everywhere") {
  std::mt19937_64 rng(5);
  for (auto [n, d, horizon] : {std::tuple{2, 2, 6}, {3, 2, 5}, {2, 3, 7}}) {
    DeBruijnGraph g(n, d);
    GameConfig cfg(g, testsupport::random_weights(rng, g.vertex_count()),
                   horizon);
    ValueTable vt = dbb::solve_minmax(cfg);
    for (int t = 0; t < horizon; ++t) {
      for (Vertex m = 0; m < g.vertex_count(); ++m) {
        Rational sum = 0;
        for (int digit = 0; digit < n; ++digit)
          sum += vt.at(t + 1, g.successor(m, digit));
        CHECK(vt.at(t, m) == cfg.costs.at(m) + sum / Rational(n));
      }
    }
  }
}

TEST_CASE("closed form equals backward induction") {
  std::mt19937_64 rng(9);
  for (auto [n, d] : {std::pair{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
    DeBruijnGraph g(n, d);
    for (int horizon : {d, d + 1, 2 * d + 3}) {
      for (int rep = 0; rep < 10; ++rep) {
        GameConfig cfg(g, testsupport::random_weights(rng, g.vertex_count()),
                       horizon);
        ValueTable vt = dbb::solve_minmax(cfg);
        for (int t = 0; t <= horizon; ++t) {
          auto slice = dbb::value_closed_form_slice(cfg, t);
          for (Vertex m = 0; m < g.vertex_count(); ++m)
            CHECK(vt.at(t, m) == slice[static_cast<std::size_t>(m)]);
        }
      }
    }
  }
}

TEST_CASE("closed form frozen examples") {
  SUBCASE("worked B(2,2) at three steps to go") {
    GameConfig cfg = worked_b22(3);
    CHECK(dbb::value_closed_form(cfg, 0, 0) == Rational(4));
    CHECK(dbb::value_closed_form(cfg, 0, 1) == Rational(6));
    CHECK(dbb::value_closed_form(cfg, 0, 2) == Rational(4));
    CHECK(dbb::value_closed_form(cfg, 0, 3) == Rational(2));
  }
  SUBCASE("zero steps returns the cost") {
    GameConfig cfg = worked_b22(4);
    for (Vertex m = 0; m < 4; ++m)
      CHECK(dbb::value_closed_form(cfg, 4, m) == cfg.costs.at(m));
  }
  SUBCASE("two-vertex game at four steps to go") {
    GameConfig cfg = b21_config(4);
    CHECK(dbb::value_closed_form(cfg, 0, 0) == Rational(9));
    CHECK(dbb::value_closed_form(cfg, 0, 1) == Rational(11));
  }
  SUBCASE("domain errors") {
    GameConfig cfg = b21_config(4);
    CHECK_THROWS_AS(dbb::value_closed_form(cfg, 5, 0), dbb::DomainError);
    CHECK_THROWS_AS(dbb::value_closed_form(cfg, -1, 0), dbb::DomainError);
    CHECK_THROWS_AS(dbb::value_closed_form(cfg, 0, 2), dbb::DomainError);
  }
}

TEST_CASE("boundary steps-to-go equals the collapsed tail form") {
  // At T - t = d the generic sum must coincide with the d-1 direct terms
  // plus one copy of the global mean. The direct terms are evaluated here
  // through explicit digit-string walks, independent of the library path.
  std::mt19937_64 rng(13);
  for (auto [n, d] : {std::pair{2, 3}, {3, 2}}) {
    DeBruijnGraph g(n, d);
    VertexWeights c = testsupport::random_weights(rng, g.vertex_count());
    GameConfig cfg(g, c, d);
    for (Vertex m = 0; m < g.vertex_count(); ++m) {
      Rational expected = 0;
      for (int j = 0; j < d; ++j) {
        Rational level = 0;
        std::vector<Vertex> frontier{m};
        for (int step = 0; step < j; ++step) {
          std::vector<Vertex> next;
          for (Vertex v : frontier)
            for (int digit = 0; digit < n; ++digit)
              next.push_back(
                  testsupport::string_successor(n, d, v, digit));
          frontier = std::move(next);
        }
        for (Vertex v : frontier) level += c.at(v);
        expected += level / Rational(dbb::checked_pow(n, j));
      }
      expected += c.mean();
      CHECK(dbb::value_closed_form(cfg, 0, m) == expected);
    }
  }
}

TEST_CASE("adding a constant shifts values by horizon length") {
  std::mt19937_64 rng(17);
  DeBruijnGraph g(2, 2);
  VertexWeights c = testsupport::random_weights(rng, 4);
  const Rational kappa(5, 3);
  std::vector<Rational> shifted(c.values().begin(), c.values().end());
  for (auto& x : shifted) x += kappa;
  GameConfig cfg(g, c, 6);
  GameConfig cfg_shifted(g, VertexWeights(shifted), 6);
  ValueTable vt = dbb::solve_minmax(cfg);
  ValueTable vt2 = dbb::solve_minmax(cfg_shifted);
  for (int t = 0; t <= 6; ++t)
    for (Vertex m = 0; m < 4; ++m)
      CHECK(vt2.at(t, m) == vt.at(t, m) + kappa * Rational(6 - t + 1));
}

TEST_CASE("rolling slice matches the closed form at a large horizon") {
  std::mt19937_64 rng(19);
  DeBruijnGraph g(2, 2);
  GameConfig cfg(g, testsupport::random_weights(rng, 4), 120);
  auto rolled = dbb::value_slice_rolling(cfg, 0);
  auto closed = dbb::value_closed_form_slice(cfg, 0);
  CHECK(rolled == closed);
  auto mid = dbb::value_slice_rolling(cfg, 60);
  auto mid_closed = dbb::value_closed_form_slice(cfg, 60);
  CHECK(mid == mid_closed);
}

TEST_CASE("optimal edge weights") {
  SUBCASE("frozen two-vertex example") {
    GameConfig cfg = b21_config(5);
    ValueTable vt = dbb::solve_minmax(cfg);
    for (int t = 0; t <= 3; ++t) {
      for (Vertex m = 0; m < 2; ++m) {
        auto w = dbb::optimal_edge_weights(cfg, vt, t, m);
        CHECK(w[0] == Rational(1));
        CHECK(w[1] == Rational(-1));
      }
    }
  }
  SUBCASE("constant costs give zero weights") {
    GameConfig cfg(DeBruijnGraph(3, 2), VertexWeights::constant(9, Rational(4)),
                   5);
    ValueTable vt = dbb::solve_minmax(cfg);
    auto w = dbb::optimal_edge_weights(cfg, vt, 2, 7);
    for (const auto& x : w) CHECK(x.is_zero());
  }
  SUBCASE("weights sum to zero and equalize the options") {
    std::mt19937_64 rng(23);
    DeBruijnGraph g(3, 2);
    GameConfig cfg(g, testsupport::random_weights(rng, 9), 6);
    ValueTable vt = dbb::solve_minmax(cfg);
    for (int t = 0; t < 6; ++t) {
      for (Vertex m = 0; m < 9; ++m) {
        auto w = dbb::optimal_edge_weights(cfg, vt, t, m);
        Rational sum = 0;
        std::set<Rational> options;
        for (int digit = 0; digit < 3; ++digit) {
          sum += w[static_cast<std::size_t>(digit)];
          options.insert(cfg.costs.at(m) + w[static_cast<std::size_t>(digit)] +
                         vt.at(t + 1, g.successor(m, digit)));
        }
        CHECK(sum.is_zero());
        CHECK(options.size() == 1);
        CHECK(*options.begin() == vt.at(t, m));
      }
    }
  }
  SUBCASE("recorded turn weights equal the recomputed ones") {
    std::mt19937_64 rng(29);
    DeBruijnGraph g(2, 3);
    GameConfig cfg(g, testsupport::random_weights(rng, 8), 5);
    ValueTable vt = dbb::solve_minmax(cfg);
    for (int t = 0; t < 5; ++t)
      for (Vertex m = 0; m < 8; ++m) {
        auto w = dbb::optimal_edge_weights(cfg, vt, t, m);
        for (int digit = 0; digit < 2; ++digit)
          CHECK(vt.turn_weight(t, m, digit) ==
                w[static_cast<std::size_t>(digit)]);
      }
  }
  SUBCASE("no weight choice at the final turn") {
    GameConfig cfg = b21_config(3);
    ValueTable vt = dbb::solve_minmax(cfg);
    CHECK_THROWS_AS(dbb::optimal_edge_weights(cfg, vt, 3, 0),
                    dbb::DomainError);
  }
}

TEST_CASE("equalizer is the minimizer over the weight simplex") {
  // For n = 2 the weight setter's choice is one number x with weights
  // (x, -x); the mover then takes the larger option. Sampling x around the
  // equalizing point confirms it is the unique minimum.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    DeBruijnGraph g(2, 2);
    GameConfig cfg(g, testsupport::random_weights(rng, 4), 4);
    ValueTable vt = dbb::solve_minmax(cfg);
    std::uniform_int_distribution<int> pick_t(0, 3);
    std::uniform_int_distribution<Vertex> pick_m(0, 3);
    int t = pick_t(rng);
    Vertex m = pick_m(rng);
    auto w = dbb::optimal_edge_weights(cfg, vt, t, m);
    Rational a0 = cfg.costs.at(m) + vt.at(t + 1, g.successor(m, 0));
    Rational a1 = cfg.costs.at(m) + vt.at(t + 1, g.successor(m, 1));
    for (int k = -8; k <= 8; ++k) {
      Rational x = w[0] + Rational(k, 4);
      Rational worst = std::max(a0 + x, a1 - x);
      if (k == 0) {
        CHECK(worst == vt.at(t, m));
      } else {
        CHECK(worst > vt.at(t, m));
      }
    }
  }
}

TEST_CASE("max-min variant produces the same table") {
  std::mt19937_64 rng(37);
  GameConfig cfg = b21_config(5);
  ValueTable vt = dbb::solve_maxmin(cfg);
  CHECK(vt.variant() == dbb::GameVariant::kMaxMin);
  CHECK(vt.same_values(dbb::solve_minmax(cfg)));
  for (int rep = 0; rep < 20; ++rep) {
    GameConfig random_cfg(DeBruijnGraph(2, 2),
                          testsupport::random_weights(rng, 4), 5);
    CHECK(dbb::solve_maxmin(random_cfg)
              .same_values(dbb::solve_minmax(random_cfg)));
  }
  GameConfig flat(DeBruijnGraph(2, 2), VertexWeights::constant(4, Rational(2)),
                  0);
  ValueTable vt0 = dbb::solve_maxmin(flat);
  for (Vertex m = 0; m < 4; ++m) CHECK(vt0.at(0, m) == Rational(2));
}

TEST_CASE("turn sets validate membership") {
  CHECK_THROWS_AS(TurnSet(4, {4}), dbb::DomainError);
  CHECK_THROWS_AS(TurnSet(4, {-1}), dbb::DomainError);
  CHECK(TurnSet::all(3).turns() == std::set<int>{0, 1, 2});
  CHECK(TurnSet::none(3).turns().empty());
}

TEST_CASE("mixed games collapse to the same value") {
  std::mt19937_64 rng(43);
  DeBruijnGraph g(2, 2);
  SUBCASE("all turns is the baseline game") {
    GameConfig cfg(g, testsupport::random_weights(rng, 4), 6);
    CHECK(dbb::solve_mixed(cfg, TurnSet::all(6))
              .same_values(dbb::solve_minmax(cfg)));
  }
  SUBCASE("no turns is the swapped game") {
    GameConfig cfg(g, testsupport::random_weights(rng, 4), 6);
    CHECK(dbb::solve_mixed(cfg, TurnSet::none(6))
              .same_values(dbb::solve_maxmin(cfg)));
  }
  SUBCASE("random turn sets over random costs") {
    std::uniform_int_distribution<int> coin(0, 1);
    for (int rep = 0; rep < 100; ++rep) {
      GameConfig cfg(g, testsupport::random_weights(rng, 4), 6);
      std::set<int> turns;
      for (int t = 0; t < 6; ++t)
        if (coin(rng)) turns.insert(t);
      ValueTable vt = dbb::solve_mixed(cfg, TurnSet(6, std::move(turns)));
      CHECK(vt.same_values(dbb::solve_minmax(cfg)));
    }
  }
  SUBCASE("horizon mismatch is rejected") {
    GameConfig cfg(g, testsupport::random_weights(rng, 4), 6);
    CHECK_THROWS_AS(dbb::solve_mixed(cfg, TurnSet::all(5)), dbb::DomainError);
  }
  SUBCASE("the table carries its variant tag and turn set") {
    GameConfig cfg(g, testsupport::random_weights(rng, 4), 6);
    ValueTable vt = dbb::solve_mixed(cfg, TurnSet(6, {1, 4}));
    CHECK(vt.variant() == dbb::GameVariant::kMixed);
    CHECK(vt.mixed_turns() == std::set<int>{1, 4});
    CHECK(dbb::solve_minmax(cfg).mixed_turns().empty());
  }
}

TEST_CASE("move strategies") {
  SUBCASE("rows validate") {
    MoveStrategy s(3, 4, 2);
    CHECK_THROWS_AS(s.set(0, 0, {Rational(1, 2), Rational(1, 3)}),
                    dbb::DomainError);
    CHECK_THROWS_AS(s.set(0, 0, {Rational(3, 2), Rational(-1, 2)}),
                    dbb::DomainError);
    CHECK_THROWS_AS(s.set(0, 0, {Rational(1)}), dbb::DomainError);
    CHECK_NOTHROW(s.set(0, 0, {Rational(1, 4), Rational(3, 4)}));
  }
  SUBCASE("point mass and uniform recover the value") {
    std::mt19937_64 rng(47);
    DeBruijnGraph g(2, 2);
    GameConfig cfg(g, testsupport::random_weights(rng, 4), 5);
    ValueTable vt = dbb::solve_minmax(cfg);
    for (int digit = 0; digit < 2; ++digit) {
      MoveStrategy point = MoveStrategy::point_mass(5, 4, 2, digit);
      for (int t = 0; t < 5; ++t)
        for (Vertex m = 0; m < 4; ++m)
          CHECK(dbb::expected_cost_under_strategy(cfg, vt, point, t, m) ==
                vt.at(t, m));
    }
    MoveStrategy uniform(5, 4, 2);
    CHECK(dbb::expected_cost_under_strategy(cfg, vt, uniform, 1, 2) ==
          vt.at(1, 2));
  }
  SUBCASE("any probability vector recovers the value exactly") {
    std::mt19937_64 rng(53);
    DeBruijnGraph g(3, 2);
    std::uniform_int_distribution<std::int64_t> mass(0, 10);
    std::uniform_int_distribution<int> pick_t(0, 4);
    std::uniform_int_distribution<Vertex> pick_m(0, 8);
    for (int rep = 0; rep < 100; ++rep) {
      GameConfig cfg(g, testsupport::random_weights(rng, 9), 5);
      ValueTable vt = dbb::solve_minmax(cfg);
      std::vector<Rational> row(3);
      Rational total = 0;
      do {
        total = 0;
        for (auto& p : row) {
          p = Rational(mass(rng));
          total += p;
        }
      } while (total.is_zero());
      for (auto& p : row) p /= total;
      MoveStrategy strategy(5, 9, 3);
      int t = pick_t(rng);
      Vertex m = pick_m(rng);
      strategy.set(t, m, row);
      CHECK(dbb::expected_cost_under_strategy(cfg, vt, strategy, t, m) ==
            vt.at(t, m));
    }
  }
  SUBCASE("final turn has no move") {
    std::mt19937_64 rng(59);
    DeBruijnGraph g(2, 2);
    GameConfig cfg(g, testsupport::random_weights(rng, 4), 3);
    ValueTable vt = dbb::solve_minmax(cfg);
    MoveStrategy uniform(3, 4, 2);
    CHECK_THROWS_AS(dbb::expected_cost_under_strategy(cfg, vt, uniform, 3, 0),
                    dbb::DomainError);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(GameConfig(DeBruijnGraph(2, 2),
                             VertexWeights::constant(3, Rational(0)), 4),
                  dbb::DomainError);
  CHECK_THROWS_AS(GameConfig(DeBruijnGraph(2, 2),
                             VertexWeights::constant(4, Rational(0)), -1),
                  dbb::DomainError);
}

}  // TEST_SUITE
