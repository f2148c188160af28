// Command-line front end: build de Bruijn graphs, solve the repeated game,
// extract the balanced edge weights, and verify the equal-cycle-mean
// property with independent oracles. All output is deterministic and
// diffable; the numeric core is exact rationals.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbb/balance.hpp"
#include "dbb/cycles.hpp"
#include "dbb/debruijn.hpp"
#include "dbb/digraph.hpp"
#include "dbb/errors.hpp"
#include "dbb/value.hpp"
#include "dbb/walk_value.hpp"
#include "dbb/weights.hpp"

namespace {

// Exit codes: 0 success/verified, 1 verification failure, 2 usage or input
// error, 3 capacity, 70 internal error.
constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsage = 2;
constexpr int kCapacity = 3;
constexpr int kInternal = 70;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dbb::ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Temp file in the target directory, then rename: readers never observe a
// half-written file.
void write_file_atomic(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw dbb::ParseError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw dbb::ParseError("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

void emit(const std::optional<std::string>& out_path,
          const std::string& content) {
  if (out_path) {
    write_file_atomic(*out_path, content);
  } else {
    std::cout << content;
  }
}

struct CommonOptions {
  std::optional<int> decimal;
  std::optional<std::int64_t> cycle_cap_flag;

  dbb::NumberFormat format() const { return dbb::NumberFormat{decimal}; }

  std::int64_t cycle_cap() const {
    if (cycle_cap_flag) return *cycle_cap_flag;
    if (const char* env = std::getenv("DBB_CYCLE_CAP")) {
      try {
        std::size_t used = 0;
        std::int64_t cap = std::stoll(env, &used);
        if (used != std::string(env).size() || cap <= 0)
          throw std::invalid_argument(env);
        return cap;
      } catch (const std::exception&) {
        throw dbb::DomainError(std::string("bad DBB_CYCLE_CAP value '") + env +
                               "'");
      }
    }
    return dbb::kDefaultCycleCap;
  }
};

std::string value_table_lines(const dbb::ValueTable& table,
                              const dbb::NumberFormat& fmt) {
  std::string out;
  for (int t = 0; t <= table.horizon(); ++t)
    for (dbb::Vertex m = 0; m < table.vertex_count(); ++m)
      out += std::to_string(t) + ' ' + std::to_string(m) + ' ' +
             fmt(table.at(t, m)) + '\n';
  return out;
}

std::string walk_table_lines(const dbb::WalkValueTable& table,
                             const dbb::NumberFormat& fmt) {
  std::string out;
  for (int t = 0; t <= table.horizon(); ++t)
    for (dbb::Vertex m = 0; m < table.vertex_count(); ++m)
      out += std::to_string(t) + ' ' + std::to_string(m) + ' ' +
             fmt(table.at(t, m)) + '\n';
  return out;
}

dbb::TurnSet parse_turn_list(const std::string& text, int horizon) {
  std::set<int> turns;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) throw dbb::DomainError("empty entry in turn list");
    std::size_t used = 0;
    int turn = 0;
    try {
      turn = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw dbb::DomainError("bad turn '" + item + "'");
    }
    if (used != item.size()) throw dbb::DomainError("bad turn '" + item + "'");
    turns.insert(turn);
  }
  return dbb::TurnSet(horizon, std::move(turns));
}

int cmd_build(int n, int d, const std::optional<std::string>& out) {
  dbb::DeBruijnGraph g = dbb::build_debruijn(n, d);
  emit(out, dbb::serialize_digraph(g.to_digraph()));
  return kOk;
}

int cmd_solve(int n, int d, int horizon, const std::string& weights_path,
              const std::optional<std::string>& mixed, bool maxmin,
              const std::optional<std::string>& out,
              const CommonOptions& common) {
  dbb::DeBruijnGraph g = dbb::build_debruijn(n, d);
  dbb::VertexWeights c =
      dbb::parse_vertex_weights(read_file(weights_path), g.vertex_count());
  dbb::GameConfig cfg(g, c, horizon);
  const dbb::NumberFormat fmt = common.format();
  dbb::ValueTable baseline = dbb::solve_minmax(cfg);
  std::string text;
  if (mixed) {
    dbb::TurnSet turns = parse_turn_list(*mixed, horizon);
    dbb::ValueTable table = dbb::solve_mixed(cfg, turns);
    text = value_table_lines(table, fmt);
    text += std::string("mixed_equals_baseline ") +
            (table.same_values(baseline) ? "true" : "false") + '\n';
  } else if (maxmin) {
    dbb::ValueTable table = dbb::solve_maxmin(cfg);
    text = value_table_lines(table, fmt);
    text += std::string("maxmin_equals_baseline ") +
            (table.same_values(baseline) ? "true" : "false") + '\n';
  } else {
    text = value_table_lines(baseline, fmt);
  }
  emit(out, text);
  return kOk;
}

int cmd_balance(int n, int d, const std::string& weights_path,
                const std::string& out, const CommonOptions& common) {
  dbb::DeBruijnGraph g = dbb::build_debruijn(n, d);
  dbb::VertexWeights c =
      dbb::parse_vertex_weights(read_file(weights_path), g.vertex_count());
  // smallest horizon whose stationary window has two turns to compare
  dbb::GameConfig cfg(g, c, d + 2);
  dbb::EdgeWeightAssignment f = dbb::stationary_weights(cfg);
  write_file_atomic(out, dbb::serialize_edge_weights(g, f));
  dbb::ValueTable vt = dbb::solve_minmax(cfg);
  dbb::BalanceReport report =
      dbb::make_balance_report(cfg, vt, f, common.cycle_cap());
  std::cout << dbb::to_text(report, common.format());
  return kOk;
}

int cmd_verify(std::optional<int> n, std::optional<int> d,
               const std::optional<std::string>& graph_path,
               const std::string& weights_path, const std::string& edges_path,
               const CommonOptions& common) {
  const dbb::NumberFormat fmt = common.format();
  std::optional<dbb::DeBruijnGraph> debruijn;
  std::optional<dbb::Digraph> generic;
  if (graph_path) {
    dbb::Digraph parsed = dbb::parse_digraph(read_file(*graph_path));
    debruijn = dbb::detect_debruijn(parsed);
    if (!debruijn) generic = std::move(parsed);
  } else {
    debruijn = dbb::build_debruijn(*n, *d);
  }

  if (debruijn) {
    const dbb::DeBruijnGraph& g = *debruijn;
    dbb::VertexWeights c =
        dbb::parse_vertex_weights(read_file(weights_path), g.vertex_count());
    dbb::EdgeWeightAssignment f =
        dbb::parse_edge_weights(read_file(edges_path), g);
    dbb::CycleReport report =
        dbb::verify_equal_means(g, c, f, common.cycle_cap());
    dbb::GameConfig cfg(g, c, g.word_length() + 2);
    dbb::ValueTable vt = dbb::solve_minmax(cfg);
    bool poisson_zero = true;
    for (int t = 0; t < cfg.horizon - g.word_length(); ++t)
      for (const dbb::Rational& r : dbb::poisson_residual(cfg, vt, t))
        if (!r.is_zero()) poisson_zero = false;
    std::cout << dbb::to_text(report, fmt);
    std::cout << "poisson_zero " << (poisson_zero ? "true" : "false") << '\n';
    return report.all_equal && poisson_zero ? kOk : kVerificationFailed;
  }

  dbb::VertexWeights c = dbb::parse_vertex_weights(read_file(weights_path),
                                                   generic->vertex_count());
  std::vector<dbb::Rational> weights =
      dbb::parse_digraph_edge_weights(read_file(edges_path), *generic);
  dbb::CycleReport report = dbb::verify_equal_means(
      *generic, c, weights, std::nullopt, common.cycle_cap());
  std::cout << dbb::to_text(report, fmt);
  std::cout << "poisson_zero na\n";
  return report.all_equal ? kOk : kVerificationFailed;
}

int cmd_general(const std::string& graph_path, const std::string& weights_path,
                int horizon, const std::optional<std::string>& out,
                const CommonOptions& common) {
  dbb::Digraph g = dbb::parse_digraph(read_file(graph_path));
  dbb::VertexWeights c =
      dbb::parse_vertex_weights(read_file(weights_path), g.vertex_count());
  const dbb::NumberFormat fmt = common.format();
  dbb::WalkValueTable table = dbb::uniform_walk_values(g, c, horizon);
  std::string text = walk_table_lines(table, fmt);
  if (auto degree = dbb::uniform_out_degree(g); degree && *degree > 0) {
    bool match = true;
    for (int t = 0; t <= horizon && match; ++t)
      for (dbb::Vertex m = 0; m < g.vertex_count() && match; ++m)
        match = dbb::regular_walk_value(g, c, horizon, t, m) == table.at(t, m);
    text += std::string("k_regular_cross_check ") + (match ? "true" : "false") +
            '\n';
  }
  emit(out, text);
  return kOk;
}

int cmd_report(int n, int d, const std::string& weights_path,
               const std::optional<std::string>& edges_path, bool list_cycles,
               const std::optional<std::string>& out,
               const CommonOptions& common) {
  dbb::DeBruijnGraph g = dbb::build_debruijn(n, d);
  dbb::VertexWeights c =
      dbb::parse_vertex_weights(read_file(weights_path), g.vertex_count());
  dbb::GameConfig cfg(g, c, d + 2);
  dbb::EdgeWeightAssignment f =
      edges_path ? dbb::parse_edge_weights(read_file(*edges_path), g)
                 : dbb::stationary_weights(cfg);
  const dbb::NumberFormat fmt = common.format();
  dbb::ValueTable vt = dbb::solve_minmax(cfg);
  std::string text =
      dbb::to_text(dbb::make_balance_report(cfg, vt, f, common.cycle_cap()), fmt);
  text += dbb::to_text(dbb::verify_equal_means(g, c, f, common.cycle_cap()), fmt);
  auto stationarity = dbb::verify_stationarity(cfg, vt);
  text += std::string("stationary ") +
          (stationarity.stationary ? "true" : "false") + '\n';
  text += std::string("stationary_boundary_matches ") +
          (stationarity.boundary_matches ? "true" : "false") + '\n';
  if (list_cycles) {
    for (const auto& cycle :
         dbb::enumerate_simple_cycles(g.to_digraph(), common.cycle_cap())) {
      text += "cycle";
      for (dbb::Vertex v : cycle) text += ' ' + std::to_string(v);
      text += '\n';
    }
  }
  emit(out, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge balancing on de Bruijn graphs via a repeated zero-sum "
               "game: every cycle of the balanced graph has the same mean "
               "weight."};
  app.require_subcommand(1);
  CommonOptions common;

  int n = 0, d = 0, horizon = 0;
  std::string weights_path, edges_required, graph_required, balance_out;
  std::optional<std::string> out, mixed, graph_opt, edges_opt;
  std::optional<int> n_opt, d_opt;
  bool maxmin = false, list_cycles = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--decimal", common.decimal,
                    "print numbers as fixed decimals with this many digits")
        ->check(CLI::Range(0, 18));
    cmd->add_option("--cycle-cap", common.cycle_cap_flag,
                    "simple-cycle enumeration cap (default 1000000, or "
                    "DBB_CYCLE_CAP)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* build = app.add_subcommand("build", "write B(n,d) as an edge list");
  build->add_option("--n", n, "alphabet size")->required();
  build->add_option("--d", d, "word length")->required();
  build->add_option("--out", out, "output path (default stdout)");

  CLI::App* solve = app.add_subcommand("solve", "solve the repeated game");
  solve->add_option("--n", n, "alphabet size")->required();
  solve->add_option("--d", d, "word length")->required();
  solve->add_option("--T", horizon, "horizon")->required();
  solve->add_option("--weights", weights_path, "vertex weight file")->required();
  auto* mixed_opt_handle =
      solve->add_option("--mixed", mixed,
                        "comma-separated turns on which the weight setter "
                        "minimizes; elsewhere roles swap");
  solve->add_flag("--maxmin", maxmin, "swap both objectives")
      ->excludes(mixed_opt_handle);
  solve->add_option("--out", out, "output path (default stdout)");
  add_common(solve);

  CLI::App* balance =
      app.add_subcommand("balance", "extract the balanced edge weights");
  balance->add_option("--n", n, "alphabet size")->required();
  balance->add_option("--d", d, "word length")->required();
  balance->add_option("--weights", weights_path, "vertex weight file")
      ->required();
  balance->add_option("--out", balance_out, "edge weight output path")
      ->required();
  add_common(balance);

  CLI::App* verify = app.add_subcommand(
      "verify", "check that every cycle mean equals the target");
  verify->add_option("--n", n_opt, "alphabet size");
  verify->add_option("--d", d_opt, "word length");
  verify->add_option("--graph", graph_opt, "edge-list file (alternative to --n/--d)");
  verify->add_option("--weights", weights_path, "vertex weight file")->required();
  verify->add_option("--edges", edges_required, "edge weight file")->required();
  add_common(verify);

  CLI::App* general = app.add_subcommand(
      "general", "value of the game on an arbitrary sink-free digraph");
  general->add_option("--graph", graph_required, "edge-list file")->required();
  general->add_option("--weights", weights_path, "vertex weight file")
      ->required();
  general->add_option("--T", horizon, "horizon")->required();
  general->add_option("--out", out, "output path (default stdout)");
  add_common(general);

  CLI::App* report = app.add_subcommand(
      "report", "balance and cycle reports for one instance");
  report->add_option("--n", n, "alphabet size")->required();
  report->add_option("--d", d, "word length")->required();
  report->add_option("--weights", weights_path, "vertex weight file")
      ->required();
  report->add_option("--edges", edges_opt,
                     "edge weight file (default: balance internally)");
  report->add_flag("--cycles", list_cycles, "list every simple cycle");
  report->add_option("--out", out, "output path (default stdout)");
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kUsage;
  }

  try {
    if (build->parsed()) return cmd_build(n, d, out);
    if (solve->parsed())
      return cmd_solve(n, d, horizon, weights_path, mixed, maxmin, out, common);
    if (balance->parsed())
      return cmd_balance(n, d, weights_path, balance_out, common);
    if (verify->parsed()) {
      if (graph_opt == std::nullopt && (!n_opt || !d_opt)) {
        std::cerr << "verify: need either --graph or both --n and --d\n";
        return kUsage;
      }
      if (graph_opt && (n_opt || d_opt)) {
        std::cerr << "verify: --graph excludes --n/--d\n";
        return kUsage;
      }
      return cmd_verify(n_opt, d_opt, graph_opt, weights_path, edges_required,
                        common);
    }
    if (general->parsed())
      return cmd_general(graph_required, weights_path, horizon, out, common);
    if (report->parsed())
      return cmd_report(n, d, weights_path, edges_opt, list_cycles, out,
                        common);
    return kUsage;
  } catch (const dbb::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kCapacity;
  } catch (const dbb::AssertionFailure& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const dbb::ArithmeticError& e) {
    std::cerr << "arithmetic error: " << e.what() << '\n';
    return kInternal;
  } catch (const dbb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
