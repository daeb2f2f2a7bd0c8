// Acceptance gate: ten criteria, one pass/fail line each. Run all criteria
// with no arguments or a single one with --only <i>. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "coinfeed/analysis.hpp"
#include "coinfeed/codec.hpp"
#include "coinfeed/oracle.hpp"
#include "coinfeed/simulate.hpp"

using namespace coinfeed;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  Outcome* outcome;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      outcome->pass = false;
      if (!outcome->detail.empty()) outcome->detail += "; ";
      outcome->detail += "FAILED: " + what;
    }
  }
};

const SimOptions kPoscOnly{false, false};

// --- shared suites ----------------------------------------------------------

// Every Eve choice sequence against SW at (K, n); the visitor sees each trace.
void for_each_exhaustive(int coins, int rounds, const std::function<void(const GameTrace&)>& visit) {
  SwBob bob;
  std::vector<std::uint8_t> choices(static_cast<std::size_t>(rounds));
  for (std::uint32_t bits = 0; bits < (1u << rounds); ++bits) {
    for (int t = 0; t < rounds; ++t) choices[static_cast<std::size_t>(t)] = (bits >> t) & 1;
    visit(run_choice_sequence({coins, rounds}, bob, choices, kPoscOnly).trace);
  }
}

// 100 seeded SW-vs-random games at K = 2^10, n = 10^4.
void for_each_big_seeded(const std::function<void(const GameTrace&)>& visit) {
  const GameConfig cfg{1024, 10000};
  SwBob bob;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RandomEve eve(seed);
    visit(run_game(cfg, bob, eve, kPoscOnly).trace);
  }
}

// The psi-regime traces: K=10, eps=0.25, 20 seeds x {greedy, random,
// swattack}. The schedule leg runs at its native length n = 67q with q=2.
void for_each_psi_suite(const std::function<void(const GameTrace&)>& visit) {
  SwBob bob;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    {
      GreedyEve eve;
      visit(run_game({10, 200}, bob, eve, kPoscOnly).trace);
    }
    {
      RandomEve eve(seed);
      visit(run_game({10, 200}, bob, eve, kPoscOnly).trace);
    }
    {
      SwAttackSchedule eve(2);
      visit(run_game({10, 134}, bob, eve, kPoscOnly).trace);
    }
  }
}

GameTrace attack_trace(std::int64_t q, int coins) {
  SwBob bob;
  SwAttackSchedule eve(q);
  return run_game({coins, 67 * q}, bob, eve, kPoscOnly).trace;
}

struct UpperBoundCase {
  int ell;
  int coins;
  std::int64_t rounds;
  int guaranteed_rank;  // ell + 1
  std::int64_t bound;
};
const UpperBoundCase kUpperBoundCases[] = {
    {1, 24, 120, 2, 40}, {2, 56, 700, 3, 300}, {3, 128, 1500, 4, 700}};

// Every trace the universal monitors must cover, SW-bob only.
void for_each_suite_trace(const std::function<void(const GameTrace&)>& visit) {
  for_each_exhaustive(4, 14, visit);
  for_each_exhaustive(8, 12, visit);
  for_each_big_seeded(visit);
  for_each_psi_suite(visit);
  visit(attack_trace(20, 1 << 14));
  SwBob sw;
  for (const UpperBoundCase& c : kUpperBoundCases) {
    FullUpperBoundAdversary eve(c.ell, c.rounds, c.coins);
    visit(run_game({c.coins, c.rounds}, sw, eve, kPoscOnly).trace);
  }
}

// --- criteria ---------------------------------------------------------------

Outcome c1_corruption_identity() {
  Outcome outcome;
  Check check{&outcome};
  std::mt19937_64 rng(20260810);
  std::int64_t max_flips = 0;
  for (int session = 0; session < 1000; ++session) {
    const int k = 1 + static_cast<int>(rng() % 10);
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 200);
    const std::int64_t x = static_cast<std::int64_t>(rng() % (1ull << k));
    const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 8);
    const Ratio r(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(den + 1)), den);
    const double p = static_cast<double>(rng() % 101) / 100.0;
    std::unique_ptr<BobStrategy> bob;
    if (rng() & 1)
      bob = std::make_unique<SwBob>();
    else
      bob = std::make_unique<RandomBob>(rng());
    RandomFlipAdversary adversary(rng(), board_threshold(r, n), p);
    const SessionResult s = run_session(k, n, *bob, adversary, x, 1, r);
    check.require(s.final_state.positions[static_cast<std::size_t>(x)] == s.flips_used,
                  "pos_n(x) != flips");
    check.require(std::count(s.decode.survivors.begin(), s.decode.survivors.end(),
                             static_cast<int>(x)) == 1,
                  "x missing from survivor set");
    max_flips = std::max(max_flips, s.flips_used);
    if (!outcome.pass) break;
  }
  if (outcome.pass)
    outcome.detail = "1000 sessions, pos_n(x) = flips exactly (max flips " + std::to_string(max_flips) + ")";
  return outcome;
}

Outcome c2_universal_claims() {
  Outcome outcome;
  Check check{&outcome};
  std::uint64_t traces = 0, checked = 0;
  for_each_suite_trace([&](const GameTrace& trace) {
    const MonitorReport step = monitor_posc_step(trace);
    const MonitorReport elapsed = monitor_elapsed(trace);
    ++traces;
    checked += step.checked + elapsed.checked;
    if (!step.pass() || !elapsed.pass())
      check.require(false, "violation in trace #" + std::to_string(traces));
  });
  if (outcome.pass)
    outcome.detail =
        std::to_string(traces) + " traces, " + std::to_string(checked) + " assertions, 0 violations";
  return outcome;
}

Outcome c3_gap_lemma() {
  Outcome outcome;
  Check check{&outcome};
  std::uint64_t traces = 0;
  const auto run = [&](const GameTrace& trace) {
    ++traces;
    if (!monitor_gap(trace).pass()) check.require(false, "gap violated in trace #" + std::to_string(traces));
  };
  for_each_exhaustive(4, 14, run);
  for_each_exhaustive(8, 12, run);
  for_each_big_seeded(run);
  if (outcome.pass)
    outcome.detail = std::to_string(traces) + " traces (exhaustive 4/14 and 8/12 + 100 big seeded), 0 violations";
  return outcome;
}

Outcome c4_phi_claim() {
  Outcome outcome;
  Check check{&outcome};
  std::uint64_t tuples = 0;
  for (int coins = 8; coins <= 14; ++coins) {
    for (Parity parity : {Parity::Even, Parity::Odd}) {
      const PhiReport report = check_phi_claim(coins, parity);
      tuples += report.tuple_count;
      check.require(report.pass(), "phi claim sub-check failed at K=" + std::to_string(coins));
    }
  }
  if (outcome.pass)
    outcome.detail = "K=8..14 both parities, " + std::to_string(tuples) +
                     " tuples: injective, involution, pair sums, poset, inverse all hold";
  return outcome;
}

Outcome c5_psi_recurrence() {
  Outcome outcome;
  Check check{&outcome};
  std::uint64_t traces = 0;
  double worst_ratio = 0;
  for_each_psi_suite([&](const GameTrace& trace) {
    ++traces;
    const PsiReport report = check_psi_recurrence(trace, 0.25);
    worst_ratio = std::max(worst_ratio, report.max_step_ratio);
    if (!report.pass()) check.require(false, "psi violation in trace #" + std::to_string(traces));
  });
  if (outcome.pass) {
    std::ostringstream detail;
    detail << traces << " traces, per-round and solved-form bounds hold (max step ratio "
           << worst_ratio << ")";
    outcome.detail = detail.str();
  }
  return outcome;
}

Outcome c6_quadruple_bound() {
  Outcome outcome;
  Check check{&outcome};
  std::uint64_t traces = 0;
  for_each_suite_trace([&](const GameTrace& trace) {
    ++traces;
    if (!check_quadruple_bound(trace, 0.25).pass())
      check.require(false, "pace bound violated in trace #" + std::to_string(traces));
  });
  // exhaustive minima, pinned after first computation: 0 at (4,14), -5 at (8,12)
  std::int64_t min_k4 = std::numeric_limits<std::int64_t>::max();
  for_each_exhaustive(4, 14, [&](const GameTrace& trace) {
    min_k4 = std::min(min_k4, check_quadruple_bound(trace, 0.25).min_slack2);
  });
  std::int64_t min_k8 = std::numeric_limits<std::int64_t>::max();
  for_each_exhaustive(8, 12, [&](const GameTrace& trace) {
    min_k8 = std::min(min_k8, check_quadruple_bound(trace, 0.25).min_slack2);
  });
  check.require(min_k4 == 0, "exhaustive (K=4,n=14) min slack2 " + std::to_string(min_k4) + " != 0");
  check.require(min_k8 == -5, "exhaustive (K=8,n=12) min slack2 " + std::to_string(min_k8) + " != -5");
  if (outcome.pass)
    outcome.detail = std::to_string(traces) + " traces >= -5*eps*n; exhaustive minima slack2 = {0, -5} (" +
                     "i.e. 0 and -2.5 positions)";
  return outcome;
}

Outcome c7_attack_31_67() {
  Outcome outcome;
  Check check{&outcome};
  const std::int64_t q = 20;
  const Ratio eps(1, 10);
  const GameTrace trace = attack_trace(q, 1 << 14);

  const MonitorReport table = attack_table_check(trace, q, eps);
  check.require(table.pass(), "milestone table row failed");
  check.require(milestone_slack(eps, q) == 2, "slack should be ceil(eps q) = 2");
  const ClaimSuiteReport claims = monitor_claim_suite(trace, q, eps);
  check.require(claims.pass(), "supporting claim failed");

  const std::int64_t final_posc4 = trace.posc(trace.round_count(), 4);
  check.require(final_posc4 <= 622, "posc_n(4) > 31q + eps q");
  // (31/67 + 1/10) * 1340 = 754
  check.require(622 < 754, "bound arithmetic");

  GameState final_state;
  final_state.config = trace.config;
  final_state.completed = trace.config.rounds;
  final_state.positions = trace.posc_rows.back();  // ids irrelevant for counting
  const auto survivors = surviving_list(final_state, Ratio(31, 67));
  check.require(survivors.size() >= 4, "fewer than 4 survivors at r = 31/67");
  const DecodeResult decode = decode_list(final_state, 3, Ratio(31, 67));
  check.require(!decode.ok, "3-list decoding unexpectedly succeeded");

  if (outcome.pass)
    outcome.detail = "all 7 milestone rows with slack 2; final posc(4) = " + std::to_string(final_posc4) +
                     " <= 622 < 754; " + std::to_string(survivors.size()) +
                     " survivors at 31/67, 3-list decoding fails";
  return outcome;
}

Outcome c8_upper_bound_adversary() {
  Outcome outcome;
  Check check{&outcome};
  std::ostringstream detail;
  for (const UpperBoundCase& c : kUpperBoundCases) {
    std::int64_t worst = 0;
    for (const char* bob_name : {"sw", "random:1", "random:2", "random:3"}) {
      auto bob = make_bob(bob_name);
      FullUpperBoundAdversary eve(c.ell, c.rounds, c.coins);
      const SimResult sim = run_game({c.coins, c.rounds}, *bob, eve, kPoscOnly);
      const std::int64_t got = sim.trace.posc(c.rounds, c.guaranteed_rank);
      worst = std::max(worst, got);
      check.require(got <= c.bound, "ell=" + std::to_string(c.ell) + " vs " + bob_name + ": posc(" +
                                        std::to_string(c.guaranteed_rank) + ") = " + std::to_string(got) +
                                        " > " + std::to_string(c.bound));
      check.require(!eve.opener_failed(), "opener lost too many zero coins");
      for (const RecursionEvent& ev : eve.events()) {
        check.require(ev.precondition_ok, "attach precondition violated");
        check.require(ev.nesting_ok, "theta nesting violated");
        check.require(ev.exit_identity_ok, "phase-1 exit identity violated");
      }
    }
    detail << "ell=" << c.ell << " worst posc(" << c.guaranteed_rank << ")=" << worst << "<=" << c.bound
           << "  ";
  }
  if (outcome.pass) outcome.detail = detail.str() + "theta nesting clean";
  return outcome;
}

std::string oracle_fingerprint(const OracleResult& r) {
  nlohmann::json j{{"value", r.value}, {"nodes", r.nodes_expanded}, {"witness", r.witness}};
  return j.dump();
}

Outcome c9_oracle_exactness() {
  Outcome outcome;
  Check check{&outcome};
  SwBob sw;
  OracleOptions memo;
  memo.memoize = true;
  std::uint64_t instances = 0;
  for (std::int64_t n = 1; n <= 10; ++n) {
    for (int index : {2, 3}) {
      if (index > 4) continue;
      const OracleResult naive = enumerate_eve(sw, {4, n}, index, Direction::Min);
      const OracleResult fast = enumerate_eve(sw, {4, n}, index, Direction::Min, memo);
      ++instances;
      check.require(naive.value == fast.value && naive.witness == fast.witness,
                    "K=4 n=" + std::to_string(n) + " memo != naive");
    }
  }
  for (std::int64_t n = 1; n <= 14; ++n) {
    const OracleResult naive = enumerate_eve(sw, {8, n}, 3, Direction::Min);
    const OracleResult fast = enumerate_eve(sw, {8, n}, 3, Direction::Min, memo);
    ++instances;
    check.require(naive.value == fast.value && naive.witness == fast.witness,
                  "K=8 n=" + std::to_string(n) + " memo != naive");
  }

  const std::int64_t pinned_minimax[] = {1, 2, 3, 4};  // n = 3, 6, 9, 12
  int at = 0;
  for (std::int64_t n : {3, 6, 9, 12}) {
    const OracleResult r = full_minimax({3, n}, 2);
    check.require(r.value <= (n + 2) / 3, "minimax exceeds ceil(n/3) at n=" + std::to_string(n));
    check.require(r.value == pinned_minimax[at++], "minimax regression moved at n=" + std::to_string(n));
    check.require(r.witness_trace.posc(n, 2) == r.value, "minimax witness does not attain the value");
  }

  OracleOptions threaded = memo;
  std::vector<std::string> prints;
  for (int threads : {1, 2, 4}) {
    threaded.threads = threads;
    prints.push_back(oracle_fingerprint(enumerate_eve(sw, {8, 14}, 3, Direction::Min, threaded)));
  }
  check.require(prints[0] == prints[1] && prints[1] == prints[2],
                "thread counts produced different serialized results");

  if (outcome.pass)
    outcome.detail = std::to_string(instances) + " memo/naive agreements; minimax pinned {1,2,3,4} <= ceil(n/3); " +
                     "1/2/4-thread outputs byte-identical";
  return outcome;
}

Outcome c10_two_list_trend() {
  Outcome outcome;
  Check check{&outcome};
  SwBob sw;
  OracleOptions memo;
  memo.memoize = true;
  const std::pair<std::int64_t, std::int64_t> pinned[] = {{7, 3}, {14, 5}, {21, 8}};
  std::ostringstream detail;
  for (const auto& [n, expected] : pinned) {
    const OracleResult r = enumerate_eve(sw, {8, n}, 3, Direction::Min, memo);
    check.require(r.value == expected,
                  "n=" + std::to_string(n) + " value " + std::to_string(r.value) + " != pinned");
    if (n <= 14) {
      const OracleResult naive = enumerate_eve(sw, {8, n}, 3, Direction::Min);
      check.require(naive.value == r.value, "naive cross-check failed at n=" + std::to_string(n));
    }
    detail << "n=" << n << ":" << r.value << " ";
  }
  // the desk-scale surrogate for the 3/7 radius: strictly above n/3 at n=21
  const OracleResult final = enumerate_eve(sw, {8, 21}, 3, Direction::Min, memo);
  check.require(final.value > 21 / 3, "min posc(3) at n=21 not strictly above floor(n/3)");
  if (outcome.pass)
    outcome.detail = "min posc_n(3) pinned " + detail.str() + "(floor(21/3) = 7 strictly exceeded)";
  return outcome;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "corruption identity", 10, c1_corruption_identity},
    {2, "universal claims (posc step + elapsed)", 60, c2_universal_claims},
    {3, "gap lemma", 60, c3_gap_lemma},
    {4, "phi bijection claim", 5, c4_phi_claim},
    {5, "psi recurrence", 60, c5_psi_recurrence},
    {6, "quadruple lower bound", 60, c6_quadruple_bound},
    {7, "31/67 attack milestones", 30, c7_attack_31_67},
    {8, "upper-bound adversary", 30, c8_upper_bound_adversary},
    {9, "oracle exactness", 300, c9_oracle_exactness},
    {10, "2-list trend", 300, c10_two_list_trend},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc + 1; ++i) {
    if (i + 1 < argc && std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);
  }
  int failures = 0;
  for (const Criterion& criterion : kCriteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_seconds) {
      outcome.pass = false;
      outcome.detail += " [over budget " + std::to_string(criterion.budget_seconds) + "s]";
    }
    std::printf("[%s] C%d %s: %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", criterion.id,
                criterion.name, outcome.detail.c_str(), elapsed);
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  return failures;
}
