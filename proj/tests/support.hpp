#pragma once

// Shared helpers for the test suites: deterministic random generators, the
// hand-transcribed B(2,3) adjacency, and independent oracles (subset
// brute-force cycle enumeration, digit-string successors, uniform-walk
// simulation) kept separate from the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dbb/cycles.hpp"
#include "dbb/debruijn.hpp"
#include "dbb/digraph.hpp"
#include "dbb/rational.hpp"
#include "dbb/weights.hpp"

namespace testsupport {

using dbb::Digraph;
using dbb::Rational;
using dbb::Vertex;

inline Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> num(-12, 12);
  std::uniform_int_distribution<std::int64_t> den(1, 8);
  return Rational(num(rng), den(rng));
}

inline dbb::VertexWeights random_weights(std::mt19937_64& rng, Vertex count) {
  std::vector<Rational> w(static_cast<std::size_t>(count));
  for (auto& x : w) x = random_rational(rng);
  return dbb::VertexWeights(std::move(w));
}

inline dbb::VertexWeights weights_from(std::vector<Rational> values) {
  return dbb::VertexWeights(std::move(values));
}

// The 16 edges of the n=2, d=3 graph, transcribed by hand from its drawing:
// 000 and 111 carry self-loops, 010 points to 100 and 101, and so on.
inline std::vector<std::pair<Vertex, Vertex>> b23_adjacency() {
  return {
      {0, 0}, {0, 1},  // 000 -> 000, 001
      {1, 2}, {1, 3},  // 001 -> 010, 011
      {2, 4}, {2, 5},  // 010 -> 100, 101
      {3, 6}, {3, 7},  // 011 -> 110, 111
      {4, 0}, {4, 1},  // 100 -> 000, 001
      {5, 2}, {5, 3},  // 101 -> 010, 011
      {6, 4}, {6, 5},  // 110 -> 100, 101
      {7, 6}, {7, 7},  // 111 -> 110, 111
  };
}

// Oracle successor through explicit digit strings: decompose m in base n,
// drop the leading digit, append the new one.
inline Vertex string_successor(int symbols, int word_length, Vertex m,
                               int digit) {
  std::vector<int> digits(static_cast<std::size_t>(word_length));
  Vertex rest = m;
  for (int i = word_length - 1; i >= 0; --i) {
    digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % symbols);
    rest /= symbols;
  }
  digits.erase(digits.begin());
  digits.push_back(digit);
  Vertex out = 0;
  for (int d : digits) out = out * symbols + d;
  return out;
}

// Oracle cycle enumeration for small graphs: try every vertex subset and
// every rotation-fixed permutation of it.
inline std::set<std::vector<Vertex>> brute_force_cycles(const Digraph& g) {
  std::set<std::vector<Vertex>> cycles;
  const int n = static_cast<int>(g.vertex_count());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<Vertex> members;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) members.push_back(v);
    std::vector<Vertex> rest(members.begin() + 1, members.end());
    std::sort(rest.begin(), rest.end());
    do {
      std::vector<Vertex> cycle;
      cycle.push_back(members[0]);
      cycle.insert(cycle.end(), rest.begin(), rest.end());
      bool ok = true;
      for (std::size_t i = 0; i < cycle.size() && ok; ++i)
        ok = g.find_edge(cycle[i], cycle[(i + 1) % cycle.size()]) >= 0;
      if (ok) cycles.insert(cycle);
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  return cycles;
}

// Sample mean and standard error of the accumulated vertex cost along
// uniform random walks of the given length.
struct WalkSimulation {
  double mean = 0.0;
  double std_error = 0.0;
};

inline WalkSimulation simulate_uniform_walks(const Digraph& g,
                                             const dbb::VertexWeights& c,
                                             int steps, Vertex start,
                                             int episodes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> cost_of(static_cast<std::size_t>(g.vertex_count()));
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    cost_of[static_cast<std::size_t>(v)] = c.at(v).to_double();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Vertex at = start;
    double cost = cost_of[static_cast<std::size_t>(at)];
    for (int s = 0; s < steps; ++s) {
      auto succ = g.successors(at);
      std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
      at = succ[pick(rng)];
      cost += cost_of[static_cast<std::size_t>(at)];
    }
    sum += cost;
    sum_sq += cost * cost;
  }
  WalkSimulation out;
  out.mean = sum / episodes;
  double variance = (sum_sq - sum * sum / episodes) / (episodes - 1);
  out.std_error = std::sqrt(std::max(variance, 0.0) / episodes);
  return out;
}

}  // namespace testsupport
