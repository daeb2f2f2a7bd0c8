// coinfeed: simulator and verification workbench for the coin-game view of
// feedback error-correcting codes.
//
//   simulate  play one bob-vs-eve game, optionally writing a JSONL trace
//   attack    run the six-phase schedule against the rank-parity bob and
//             check the milestone table and its supporting claims
//   oracle    exact optima by exhaustive search (fixed bob or full minimax)
//   verify    re-check a JSONL trace against a monitor suite
//   codec     run one feedback-code session over an adversarial channel
//   sweep     grid of any of the above, resumable, CSV output
//
// Exit codes: 0 ok, 1 a monitored property was violated, 2 invalid config.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "coinfeed/analysis.hpp"
#include "coinfeed/codec.hpp"
#include "coinfeed/oracle.hpp"
#include "coinfeed/simulate.hpp"

using namespace coinfeed;
using nlohmann::json;

namespace {

int env_threads() {
  if (const char* raw = std::getenv("COINFEED_THREADS")) {
    const int n = std::atoi(raw);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// One line of the CSV summary.
struct SummaryRow {
  std::string mode;
  std::int64_t coins = 0;
  std::int64_t rounds = 0;
  std::string ell;
  std::string r;
  std::string epsilon;
  std::string seed;
  std::array<std::string, 6> posc_final;
  std::string survivors;
  bool pass = true;

  static std::string header() {
    return "mode,K,n,ell,r,epsilon,seed,posc1_final,posc2_final,posc3_final,posc4_final,"
           "posc5_final,posc6_final,survivors,pass";
  }
  std::string line() const {
    std::ostringstream out;
    out << mode << ',' << coins << ',' << rounds << ',' << ell << ',' << r << ',' << epsilon << ','
        << seed;
    for (const auto& p : posc_final) out << ',' << p;
    out << ',' << survivors << ',' << (pass ? 1 : 0);
    return out.str();
  }
};

void fill_final_posc(SummaryRow& row, const GameTrace& trace) {
  for (int i = 1; i <= 6 && i <= trace.config.coins; ++i)
    row.posc_final[static_cast<std::size_t>(i - 1)] = std::to_string(trace.posc(trace.round_count(), i));
}

void append_csv(const std::string& path, const SummaryRow& row) {
  const bool fresh = !std::ifstream(path).good();
  std::ofstream out(path, std::ios::app);
  if (!out) fail("io-error", "cannot open " + path);
  if (fresh) out << SummaryRow::header() << '\n';
  out << row.line() << '\n';
}

void emit_report(const json& report, const std::string& path) {
  if (path.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::ofstream out(path);
    if (!out) fail("io-error", "cannot open " + path);
    out << report.dump(2) << '\n';
  }
}

json violations_json(const std::vector<Violation>& violations) {
  json arr = json::array();
  for (const Violation& v : violations)
    arr.push_back({{"monitor", v.monitor},
                   {"round", v.round},
                   {"index", v.index},
                   {"lhs", v.lhs},
                   {"rhs", v.rhs},
                   {"pass", false}});
  return arr;
}

json monitor_json(const MonitorReport& report) {
  json j{{"monitor", report.monitor},
         {"checked", report.checked},
         {"violations", report.violation_count},
         {"pass", report.pass()},
         {"assertions", violations_json(report.violations)}};
  for (const auto& [key, value] : report.stats) j["stats"][key] = value;
  return j;
}

// Strategy names that take the --seed value when no explicit seed is given.
std::string resolve_seed(const std::string& name, std::uint64_t seed) {
  if (name == "random") return "random:" + std::to_string(seed);
  return name;
}

// --------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string bob = "sw";
  std::string eve = "greedy";
  int coins = 0;
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;
  int ell = 0;
  std::string r;
  std::string trace_path, report_path, csv_path;
};

int cmd_simulate(const SimulateArgs& args, json* report_out = nullptr, SummaryRow* row_out = nullptr) {
  const GameConfig cfg{args.coins, args.rounds};
  cfg.validate();
  auto bob = make_bob(resolve_seed(args.bob, args.seed));
  auto eve = make_eve(resolve_seed(args.eve, args.seed), cfg);
  const SimResult sim = run_game(cfg, *bob, *eve);

  SummaryRow row;
  row.mode = "simulate";
  row.coins = cfg.coins;
  row.rounds = cfg.rounds;
  row.seed = std::to_string(args.seed);
  fill_final_posc(row, sim.trace);

  json report{{"mode", "simulate"}, {"K", cfg.coins}, {"n", cfg.rounds},
              {"bob", bob->name()}, {"eve", eve->name()}};
  json posc = json::array();
  for (int i = 1; i <= std::min(6, cfg.coins); ++i) posc.push_back(sim.trace.posc(cfg.rounds, i));
  report["final_posc"] = posc;
  if (!args.r.empty()) {
    const Ratio radius = Ratio::parse(args.r);
    row.r = radius.str();
    const auto survivors = surviving_list(sim.final_state, radius);
    row.survivors = std::to_string(survivors.size());
    report["survivors"] = survivors.size();
    report["board_threshold"] = board_threshold(radius, cfg.rounds);
    if (args.ell > 0) {
      row.ell = std::to_string(args.ell);
      report["winner"] = evaluate(sim.final_state, args.ell, radius) == Winner::Eve ? "eve" : "bob";
    }
  }
  report["pass"] = true;

  if (!args.trace_path.empty()) write_trace_jsonl(sim.trace, args.trace_path);
  if (!args.csv_path.empty()) append_csv(args.csv_path, row);
  if (report_out)
    *report_out = std::move(report);
  else if (row_out == nullptr)
    emit_report(report, args.report_path);
  if (row_out) *row_out = std::move(row);
  return 0;
}

// --------------------------------------------------------------------------
// attack

struct AttackArgs {
  std::int64_t q = 0;
  std::string epsilon = "0.1";
  int k = 0;       // K = 2^k when given
  int coins = 0;   // direct K override
  std::string trace_path, report_path, csv_path;
};

int cmd_attack(const AttackArgs& args, json* report_out = nullptr, SummaryRow* row_out = nullptr) {
  const Ratio eps = Ratio::parse(args.epsilon);
  int coins = args.coins;
  if (coins == 0) {
    if (args.k < 1 || args.k > 24) fail("invalid-config", "attack needs --k in [1,24] or an explicit --K");
    coins = 1 << args.k;
  }
  const GameConfig cfg{coins, 67 * args.q};
  cfg.validate();
  SwBob bob;
  SwAttackSchedule eve(args.q);
  SimOptions options;
  options.record_partitions = !args.trace_path.empty();
  options.record_snapshots = !args.trace_path.empty();
  const SimResult sim = run_game(cfg, bob, eve, options);

  const MonitorReport table = attack_table_check(sim.trace, args.q, eps);
  const ClaimSuiteReport claims = monitor_claim_suite(sim.trace, args.q, eps);
  const Ratio radius(31, 67);
  const auto survivors = surviving_list(sim.final_state, radius);
  const bool pass = table.pass() && claims.pass();

  json report{{"mode", "attack"}, {"q", args.q}, {"epsilon", eps.str()},
              {"K", cfg.coins},   {"n", cfg.rounds}};
  const std::int64_t slack = milestone_slack(eps, args.q);
  report["slack"] = slack;
  report["eps_q_integral"] = (eps.num * args.q) % eps.den == 0;
  json rows = json::array();
  for (const MilestoneRow& row : milestone_table()) {
    const std::int64_t m = row.m_factor * args.q;
    json entry{{"m", m}, {"m_factor", row.m_factor}};
    json bounds = json::array(), actual = json::array();
    for (int i = 1; i <= 5; ++i) {
      bounds.push_back(row.bound2[static_cast<std::size_t>(i - 1)] * args.q / 2 + slack);
      actual.push_back(sim.trace.posc(m, i));
    }
    entry["bound"] = bounds;
    entry["posc"] = actual;
    rows.push_back(entry);
  }
  report["milestones"] = rows;
  report["table"] = monitor_json(table);
  report["claims"] = {{"posc6", monitor_json(claims.posc6)},
                      {"elapsed", monitor_json(claims.elapsed)},
                      {"no_catchup", monitor_json(claims.no_catchup)},
                      {"clubsuit", monitor_json(claims.clubsuit)}};
  report["survivors_at_31_67"] = survivors.size();
  report["pass"] = pass;

  SummaryRow row;
  row.mode = "attack";
  row.coins = cfg.coins;
  row.rounds = cfg.rounds;
  row.epsilon = eps.str();
  row.r = radius.str();
  row.survivors = std::to_string(survivors.size());
  fill_final_posc(row, sim.trace);
  row.pass = pass;

  if (!args.trace_path.empty()) write_trace_jsonl(sim.trace, args.trace_path);
  if (!args.csv_path.empty()) append_csv(args.csv_path, row);
  if (report_out)
    *report_out = std::move(report);
  else if (row_out == nullptr)
    emit_report(report, args.report_path);
  if (row_out) *row_out = std::move(row);
  return pass ? 0 : 1;
}

// --------------------------------------------------------------------------
// oracle

struct OracleArgs {
  std::string bob = "sw";
  int coins = 0;
  std::int64_t rounds = 0;
  int posc_index = 2;
  std::string direction = "min";
  bool memo = false;
  int threads = 0;
  std::uint64_t seed = 0;
  std::string trace_path, report_path, csv_path;
};

int cmd_oracle(const OracleArgs& args, json* report_out = nullptr, SummaryRow* row_out = nullptr) {
  const GameConfig cfg{args.coins, args.rounds};
  cfg.validate();
  OracleResult result;
  if (args.direction == "minimax") {
    result = full_minimax(cfg, args.posc_index);
  } else {
    const Direction dir = args.direction == "min" ? Direction::Min
                          : args.direction == "max"
                              ? Direction::Max
                              : throw GameError("invalid-config", "direction must be min, max or minimax");
    auto bob = make_bob(resolve_seed(args.bob, args.seed));
    OracleOptions options;
    options.memoize = args.memo;
    options.threads = args.threads > 0 ? args.threads : env_threads();
    result = enumerate_eve(*bob, cfg, args.posc_index, dir, options);
  }

  json report{{"mode", "oracle"},
              {"kind", result.kind},
              {"K", cfg.coins},
              {"n", cfg.rounds},
              {"posc_index", result.posc_index},
              {"value", result.value},
              {"nodes_expanded", result.nodes_expanded},
              {"witness_path", result.witness},
              {"pass", true}};

  if (!args.trace_path.empty()) write_trace_jsonl(result.witness_trace, args.trace_path);
  SummaryRow row;
  row.mode = "oracle";
  row.coins = cfg.coins;
  row.rounds = cfg.rounds;
  row.seed = std::to_string(args.seed);
  fill_final_posc(row, result.witness_trace);
  if (!args.csv_path.empty()) append_csv(args.csv_path, row);
  if (report_out)
    *report_out = std::move(report);
  else if (row_out == nullptr)
    emit_report(report, args.report_path);
  if (row_out) *row_out = std::move(row);
  return 0;
}

// --------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string trace_path;
  std::string suite = "universal";
  std::string epsilon = "0.25";
  std::int64_t q = 0;
  bool emit_passes = false;
  std::string report_path;
};

int cmd_verify(const VerifyArgs& args) {
  const GameTrace trace = read_trace_jsonl_file(args.trace_path);
  const double eps = Ratio::parse(args.epsilon).to_double();
  std::vector<json> monitors;
  bool pass = true;

  auto add = [&](const MonitorReport& report) {
    monitors.push_back(monitor_json(report));
    pass = pass && report.pass();
  };

  if (args.suite == "universal" || args.suite == "sw-lemmas") {
    add(monitor_posc_step(trace));
    add(monitor_elapsed(trace));
  }
  if (args.suite == "sw-lemmas") {
    add(monitor_gap(trace));
    const QuadrupleReport quadruple = check_quadruple_bound(trace, eps);
    json qj{{"monitor", "quadruple-bound"},
            {"checked", quadruple.checked},
            {"violations", quadruple.violation_count},
            {"pass", quadruple.pass()},
            {"min_slack", static_cast<double>(quadruple.min_slack2) / 2.0},
            {"argmin_round", quadruple.argmin_round},
            {"assertions", violations_json(quadruple.violations)}};
    monitors.push_back(std::move(qj));
    pass = pass && quadruple.pass();
    const PsiReport psi = check_psi_recurrence(trace, eps);
    json pj{{"monitor", "psi-recurrence"},
            {"checked", psi.checked},
            {"violations", psi.violation_count},
            {"pass", psi.pass()},
            {"window", psi.window},
            {"max_step_ratio", psi.max_step_ratio},
            {"assertions", violations_json(psi.violations)}};
    monitors.push_back(std::move(pj));
    pass = pass && psi.pass();
  } else if (args.suite == "attack") {
    if (args.q <= 0) fail("invalid-config", "attack suite needs --q");
    const Ratio eps_exact = Ratio::parse(args.epsilon);
    add(attack_table_check(trace, args.q, eps_exact));
    const ClaimSuiteReport claims = monitor_claim_suite(trace, args.q, eps_exact);
    add(claims.posc6);
    add(claims.elapsed);
    add(claims.no_catchup);
    add(claims.clubsuit);
  } else if (args.suite != "universal") {
    fail("invalid-config", "unknown suite: " + args.suite + " (universal, sw-lemmas, attack)");
  }

  if (args.emit_passes) {
    // per-assertion pass lines for the rank monitors, workable only on small
    // traces; violations are always emitted above
    constexpr std::int64_t kEmitCap = 100000;
    const std::int64_t total = (trace.round_count() + 1) * trace.config.coins;
    if (total <= kEmitCap) {
      json passes = json::array();
      for (std::int64_t t = 0; t < trace.round_count(); ++t)
        for (int i = 1; i <= trace.config.coins; ++i) {
          const std::int64_t step = trace.posc(t + 1, i) - trace.posc(t, i);
          passes.push_back({{"monitor", "posc-step"},
                            {"round", t + 1},
                            {"index", i},
                            {"lhs", step},
                            {"rhs", 1},
                            {"pass", step >= 0 && step <= 1}});
        }
      monitors.push_back({{"monitor", "posc-step-assertions"}, {"assertions", std::move(passes)}});
    }
  }

  json report{{"mode", "verify"},
              {"trace", args.trace_path},
              {"suite", args.suite},
              {"epsilon", args.epsilon},
              {"monitors", monitors},
              {"pass", pass}};
  emit_report(report, args.report_path);
  return pass ? 0 : 1;
}

// --------------------------------------------------------------------------
// codec

struct CodecArgs {
  int k = 0;
  std::int64_t rounds = 0;
  std::string r = "1/3";
  int ell = 1;
  std::string bob = "sw";
  std::string adversary = "randomflip:0.5";
  std::uint64_t seed = 0;
  std::int64_t x = 0;
  std::int64_t budget = -1;  // -1: adversary default
  std::string trace_path, report_path, csv_path;
};

int cmd_codec(const CodecArgs& args, json* report_out = nullptr, SummaryRow* row_out = nullptr) {
  const Ratio radius = Ratio::parse(args.r);
  const GameConfig cfg{1 << args.k, args.rounds};
  cfg.validate();
  auto bob = make_bob(resolve_seed(args.bob, args.seed));
  auto adversary = make_adversary(resolve_seed(args.adversary, args.seed), cfg, radius, args.seed);
  if (args.budget >= 0) {
    // explicit budget override wraps the flip decisions unchanged
    struct Capped final : ChannelAdversary {
      Capped(std::unique_ptr<ChannelAdversary> inner, std::int64_t budget)
          : ChannelAdversary(budget), inner_(std::move(inner)) {}
      bool flip(std::int64_t round, const Partition& p, int bit, const GameState& s,
                std::span<const std::uint8_t> received) override {
        return inner_->flip(round, p, bit, s, received);
      }
      std::string name() const override { return inner_->name(); }
      std::unique_ptr<ChannelAdversary> inner_;
    };
    adversary = std::make_unique<Capped>(std::move(adversary), args.budget);
  }
  const SessionResult session =
      run_session(args.k, args.rounds, *bob, *adversary, args.x, args.ell, radius);

  auto bits = [](const std::vector<std::uint8_t>& v) {
    std::string s;
    for (std::uint8_t b : v) s.push_back(b ? '1' : '0');
    return s;
  };
  json report{{"mode", "codec"},
              {"k", args.k},
              {"K", cfg.coins},
              {"n", cfg.rounds},
              {"r", radius.str()},
              {"ell", args.ell},
              {"x", args.x},
              {"adversary", adversary->name()},
              {"budget", adversary->budget()},
              {"flips_used", session.flips_used},
              {"sent", bits(session.sent)},
              {"received", bits(session.received)},
              {"board_threshold", board_threshold(radius, cfg.rounds)},
              {"decoded", session.decode.survivors},
              {"decode_ok", session.decode.ok}};
  json posc = json::array();
  const RankView view = rank_view(session.final_state);
  for (int i = 0; i < std::min(6, cfg.coins); ++i) posc.push_back(view.posc[static_cast<std::size_t>(i)]);
  report["final_posc"] = posc;
  report["pass"] = session.decode.ok;

  if (!args.trace_path.empty()) {
    // the receiver-side coin game induced by the session: round t moved the
    // side opposite the received bit
    std::vector<std::uint8_t> moved;
    for (std::uint8_t bit : session.received) moved.push_back(1 - bit);
    write_trace_jsonl(run_choice_sequence(cfg, *bob, moved).trace, args.trace_path);
  }
  SummaryRow row;
  row.mode = "codec";
  row.coins = cfg.coins;
  row.rounds = cfg.rounds;
  row.ell = std::to_string(args.ell);
  row.r = radius.str();
  row.seed = std::to_string(args.seed);
  for (int i = 0; i < std::min(6, cfg.coins); ++i)
    row.posc_final[static_cast<std::size_t>(i)] = std::to_string(view.posc[static_cast<std::size_t>(i)]);
  row.survivors = std::to_string(session.decode.survivors.size());
  row.pass = session.decode.ok;
  if (!args.csv_path.empty()) append_csv(args.csv_path, row);
  if (report_out)
    *report_out = std::move(report);
  else if (row_out == nullptr)
    emit_report(report, args.report_path);
  if (row_out) *row_out = std::move(row);
  return 0;
}

// --------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string config_path;
  std::string out_path;
  int threads = 0;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("invalid-config", "cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail("invalid-config", std::string("config parse error: ") + e.what());
  }
}

SummaryRow run_sweep_point(const json& point) {
  const std::string mode = point.at("mode").get<std::string>();
  auto get_str = [&](const char* key, const std::string& dflt) {
    if (!point.contains(key)) return dflt;
    const json& v = point.at(key);
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  auto get_int = [&](const char* key, std::int64_t dflt) {
    return point.contains(key) ? point.at(key).get<std::int64_t>() : dflt;
  };
  SummaryRow row;
  if (mode == "simulate") {
    SimulateArgs args;
    args.bob = get_str("bob", "sw");
    args.eve = get_str("eve", "greedy");
    args.coins = static_cast<int>(get_int("K", 0));
    args.rounds = get_int("n", 0);
    args.seed = static_cast<std::uint64_t>(get_int("seed", 0));
    args.ell = static_cast<int>(get_int("ell", 0));
    args.r = get_str("r", "");
    cmd_simulate(args, nullptr, &row);
  } else if (mode == "oracle") {
    OracleArgs args;
    args.bob = get_str("bob", "sw");
    args.coins = static_cast<int>(get_int("K", 0));
    args.rounds = get_int("n", 0);
    args.posc_index = static_cast<int>(get_int("posc_index", 2));
    args.direction = get_str("direction", "min");
    args.memo = get_int("memo", 0) != 0;
    args.threads = 1;  // sweep parallelism lives at the point level
    cmd_oracle(args, nullptr, &row);
  } else if (mode == "codec") {
    CodecArgs args;
    args.k = static_cast<int>(get_int("k", 0));
    args.rounds = get_int("n", 0);
    args.r = get_str("r", "1/3");
    args.ell = static_cast<int>(get_int("ell", 1));
    args.bob = get_str("bob", "sw");
    args.adversary = get_str("adversary", "randomflip:0.5");
    args.seed = static_cast<std::uint64_t>(get_int("seed", 0));
    args.x = get_int("x", 0);
    cmd_codec(args, nullptr, &row);
  } else if (mode == "attack") {
    AttackArgs args;
    args.q = get_int("q", 0);
    args.epsilon = get_str("epsilon", "0.1");
    args.k = static_cast<int>(get_int("k", 0));
    args.coins = static_cast<int>(get_int("K", 0));
    cmd_attack(args, nullptr, &row);
  } else {
    fail("invalid-config", "sweep mode must be simulate, oracle, codec or attack");
  }
  return row;
}

int cmd_sweep(const SweepArgs& args) {
  const json config = load_json_file(args.config_path);
  if (!config.is_object() || !config.contains("mode")) fail("invalid-config", "sweep config needs a mode");

  // Cartesian expansion: every array-valued key is swept, arrays expand in
  // order, keys alphabetically.
  std::vector<std::string> swept_keys;
  for (const auto& [key, value] : config.items())
    if (value.is_array()) swept_keys.push_back(key);
  std::sort(swept_keys.begin(), swept_keys.end());

  std::vector<json> points{config};
  for (const std::string& key : swept_keys) {
    std::vector<json> expanded;
    for (const json& base : points)
      for (const json& value : config.at(key)) {
        json point = base;
        point[key] = value;
        expanded.push_back(std::move(point));
      }
    points = std::move(expanded);
    if (points.size() > 100000) fail("invalid-config", "sweep exceeds 10^5 points");
  }

  // completed-point ledger for resumability
  const std::string ledger_path = args.out_path + ".done";
  std::vector<bool> done(points.size(), false);
  {
    std::ifstream ledger(ledger_path);
    std::string line;
    std::vector<std::string> completed;
    while (std::getline(ledger, line))
      if (!line.empty()) completed.push_back(line);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::string key = points[i].dump();
      done[i] = std::find(completed.begin(), completed.end(), key) != completed.end();
    }
  }

  std::vector<SummaryRow> rows(points.size());
  std::vector<std::string> errors(points.size());
  std::atomic<std::size_t> cursor{0};
  const int threads = std::max(1, args.threads > 0 ? args.threads : env_threads());
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= points.size()) return;
        if (done[i]) continue;
        try {
          rows[i] = run_sweep_point(points[i]);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();

  for (std::size_t i = 0; i < points.size(); ++i)
    if (!errors[i].empty()) fail("invalid-config", "point " + points[i].dump() + ": " + errors[i]);

  // rows land in config order regardless of which worker finished first
  const bool fresh = !std::ifstream(args.out_path).good();
  std::ofstream out(args.out_path, std::ios::app);
  std::ofstream ledger(ledger_path, std::ios::app);
  if (!out || !ledger) fail("io-error", "cannot open sweep outputs");
  if (fresh) out << SummaryRow::header() << '\n';
  bool all_pass = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (done[i]) continue;
    out << rows[i].line() << '\n';
    ledger << points[i].dump() << '\n';
    all_pass = all_pass && rows[i].pass;
  }
  return all_pass ? 0 : 1;
}

// --------------------------------------------------------------------------

// JSON config file for single-run subcommands: same keys as the long flags,
// command line wins.
std::vector<std::string> inject_config_defaults(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  if (config_path.empty() || (!args.empty() && args[0] == "sweep")) return args;
  const json config = load_json_file(config_path);
  for (const auto& [key, value] : config.items()) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    args.push_back(flag);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coin-game simulator and verification workbench for feedback codes"};
  app.require_subcommand(1);
  std::string config_path;

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "play one game");
  simulate->add_option("--config", config_path, "JSON config; CLI flags override its keys");
  simulate->add_option("--bob", sim.bob, "sw | random[:seed] | script:<path>");
  simulate->add_option("--eve", sim.eve, "greedy | random[:seed] | base:<n> | recursive:<ell> | upperbound:<ell> | swattack:<q>");
  simulate->add_option("--K", sim.coins, "coin count")->required();
  simulate->add_option("--n", sim.rounds, "rounds")->required();
  simulate->add_option("--seed", sim.seed, "seed for 'random' strategy names");
  simulate->add_option("--ell", sim.ell, "list size for the winner report");
  simulate->add_option("--r", sim.r, "radius as exact fraction p/q");
  simulate->add_option("--trace", sim.trace_path, "write JSONL trace");
  simulate->add_option("--report", sim.report_path, "write JSON report (default stdout)");
  simulate->add_option("--csv", sim.csv_path, "append summary row");

  AttackArgs attack;
  CLI::App* attack_cmd = app.add_subcommand("attack", "six-phase schedule vs the rank-parity bob");
  attack_cmd->add_option("--config", config_path, "JSON config; CLI flags override its keys");
  attack_cmd->add_option("--q", attack.q, "n = 67q, q even")->required();
  attack_cmd->add_option("--epsilon", attack.epsilon, "slack parameter (exact decimal or p/q)");
  attack_cmd->add_option("--k", attack.k, "message bits, K = 2^k");
  attack_cmd->add_option("--K", attack.coins, "coin count override");
  attack_cmd->add_option("--trace", attack.trace_path, "write JSONL trace");
  attack_cmd->add_option("--report", attack.report_path, "write JSON report (default stdout)");
  attack_cmd->add_option("--csv", attack.csv_path, "append summary row");

  OracleArgs oracle;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "exact optima by exhaustive search");
  oracle_cmd->add_option("--config", config_path, "JSON config; CLI flags override its keys");
  oracle_cmd->add_option("--bob", oracle.bob, "bob strategy (ignored for minimax)");
  oracle_cmd->add_option("--K", oracle.coins, "coin count")->required();
  oracle_cmd->add_option("--n", oracle.rounds, "rounds")->required();
  oracle_cmd->add_option("--posc-index", oracle.posc_index, "objective rank i (1-based)");
  oracle_cmd->add_option("--direction", oracle.direction, "min | max | minimax");
  oracle_cmd->add_flag("--memo", oracle.memo, "memoize on the position multiset");
  oracle_cmd->add_option("--threads", oracle.threads, "worker threads (default COINFEED_THREADS)");
  oracle_cmd->add_option("--seed", oracle.seed, "seed for 'random' bob");
  oracle_cmd->add_option("--trace", oracle.trace_path, "write the witness game as a JSONL trace");
  oracle_cmd->add_option("--report", oracle.report_path, "write JSON report (default stdout)");
  oracle_cmd->add_option("--csv", oracle.csv_path, "append summary row");

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "re-check a JSONL trace");
  verify_cmd->add_option("--config", config_path, "JSON config; CLI flags override its keys");
  verify_cmd->add_option("--trace", verify.trace_path, "JSONL trace path")->required();
  verify_cmd->add_option("--suite", verify.suite, "universal | sw-lemmas | attack");
  verify_cmd->add_option("--epsilon", verify.epsilon, "epsilon for the sw-lemmas/attack suites");
  verify_cmd->add_option("--q", verify.q, "q for the attack suite");
  verify_cmd->add_flag("--emit-passes", verify.emit_passes, "also emit passing assertions (small traces)");
  verify_cmd->add_option("--report", verify.report_path, "write JSON report (default stdout)");

  CodecArgs codec;
  CLI::App* codec_cmd = app.add_subcommand("codec", "one feedback-code session");
  codec_cmd->add_option("--config", config_path, "JSON config; CLI flags override its keys");
  codec_cmd->add_option("--k", codec.k, "message bits, K = 2^k")->required();
  codec_cmd->add_option("--n", codec.rounds, "rounds")->required();
  codec_cmd->add_option("--r", codec.r, "decoding radius p/q");
  codec_cmd->add_option("--ell", codec.ell, "list size");
  codec_cmd->add_option("--bob", codec.bob, "bob strategy");
  codec_cmd->add_option("--adversary", codec.adversary, "randomflip:<p> or any eve name");
  codec_cmd->add_option("--seed", codec.seed, "adversary seed");
  codec_cmd->add_option("--x", codec.x, "message value");
  codec_cmd->add_option("--budget", codec.budget, "flip budget override");
  codec_cmd->add_option("--trace", codec.trace_path, "write the induced coin game as a JSONL trace");
  codec_cmd->add_option("--report", codec.report_path, "write JSON report (default stdout)");
  codec_cmd->add_option("--csv", codec.csv_path, "append summary row");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid of runs, resumable");
  sweep_cmd->add_option("--config", sweep.config_path, "JSON config with array-valued swept keys")
      ->required();
  sweep_cmd->add_option("--out", sweep.out_path, "CSV output path")->required();
  sweep_cmd->add_option("--threads", sweep.threads, "worker threads (default COINFEED_THREADS)");

  try {
    const std::vector<std::string> raw = inject_config_defaults(argc, argv);
    std::vector<const char*> cargs{argv[0]};
    for (const std::string& a : raw) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());

    if (simulate->parsed()) return cmd_simulate(sim);
    if (attack_cmd->parsed()) return cmd_attack(attack);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle);
    if (verify_cmd->parsed()) return cmd_verify(verify);
    if (codec_cmd->parsed()) return cmd_codec(codec);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const GameError& e) {
    std::cerr << "error: " << e.what() << '\n';
    // budget-exceeded is a monitored property failing at runtime; everything
    // else reachable from the CLI is a configuration or input problem
    return e.code() == "budget-exceeded" ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
