#include "coinfeed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace coinfeed {

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kAbsTol = 1e-12;

bool leq_with_tol(double lhs, double rhs) { return lhs <= rhs * (1 + kRelTol) + kAbsTol; }

bool is_moved(int index, Parity moved) {
  const bool even = index % 2 == 0;
  return moved == Parity::Even ? even : !even;
}

}  // namespace

void MonitorReport::flag(std::int64_t round, std::int64_t index, double lhs, double rhs) {
  ++violation_count;
  if (violations.size() < kMaxStoredViolations) violations.push_back({monitor, round, index, lhs, rhs});
}

std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t out = 1;
  for (std::int64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

MonitorReport monitor_posc_step(const GameTrace& trace) {
  MonitorReport report;
  report.monitor = "posc-step";
  const int coins = trace.config.coins;
  for (std::int64_t t = 0; t < trace.round_count(); ++t) {
    const auto& before = trace.posc_rows[static_cast<std::size_t>(t)];
    const auto& after = trace.posc_rows[static_cast<std::size_t>(t) + 1];
    for (int i = 0; i < coins; ++i) {
      const std::int64_t d = after[static_cast<std::size_t>(i)] - before[static_cast<std::size_t>(i)];
      ++report.checked;
      if (d < 0 || d > 1)
        report.flag(t + 1, i + 1, static_cast<double>(d), 1.0);
    }
  }
  return report;
}

MonitorReport monitor_elapsed(const GameTrace& trace) {
  MonitorReport report;
  report.monitor = "elapsed-rounds";
  const int coins = trace.config.coins;
  const std::int64_t n = trace.round_count();
  auto check_pair = [&](std::int64_t t, std::int64_t u) {
    const auto& early = trace.posc_rows[static_cast<std::size_t>(t)];
    const auto& late = trace.posc_rows[static_cast<std::size_t>(u)];
    for (int i = 0; i < coins; ++i) {
      const std::int64_t d = late[static_cast<std::size_t>(i)] - early[static_cast<std::size_t>(i)];
      ++report.checked;
      if (d > u - t) report.flag(u, i + 1, static_cast<double>(d), static_cast<double>(u - t));
    }
  };
  if (n <= 64) {
    for (std::int64_t t = 0; t <= n; ++t)
      for (std::int64_t u = t + 1; u <= n; ++u) check_pair(t, u);
    return report;
  }
  for (std::int64_t t = 0; t < n; ++t) check_pair(t, t + 1);
  // long-range spread: every pair of decile boundaries
  std::vector<std::int64_t> marks;
  for (int d = 0; d <= 10; ++d) marks.push_back(n * d / 10);
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  for (std::size_t a = 0; a < marks.size(); ++a)
    for (std::size_t b = a + 1; b < marks.size(); ++b) check_pair(marks[a], marks[b]);
  return report;
}

MonitorReport monitor_gap(const GameTrace& trace) {
  if (trace.config.coins < 4) fail("wrong-K", "gap monitor needs at least 4 coins");
  MonitorReport report;
  report.monitor = "gap";
  for (std::int64_t t = 0; t <= trace.round_count(); ++t) {
    const std::int64_t lhs = trace.posc(t, 2) - trace.posc(t, 1) + 1;
    const std::int64_t rhs = trace.posc(t, 4) - trace.posc(t, 3);
    ++report.checked;
    if (lhs < rhs) report.flag(t, 0, static_cast<double>(lhs), static_cast<double>(rhs));
  }
  return report;
}

RoundDelta round_delta(const GameTrace& trace, std::int64_t t) {
  if (!trace.has_partitions() || !trace.has_snapshots())
    fail("trace-not-recorded", "round deltas need id-level trace data");
  const auto& positions = trace.snapshots[static_cast<std::size_t>(t)];
  std::vector<int> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (positions[static_cast<std::size_t>(a)] != positions[static_cast<std::size_t>(b)])
      return positions[static_cast<std::size_t>(a)] < positions[static_cast<std::size_t>(b)];
    return a < b;
  });
  const auto& side = trace.partitions[static_cast<std::size_t>(t)].side;
  const int choice = trace.choices[static_cast<std::size_t>(t)];
  RoundDelta delta;
  delta.moved.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    delta.moved[i] = side[static_cast<std::size_t>(order[i])] == choice;
  return delta;
}

int quad_move(const RoundDelta& delta, const Tuple4& ranks) {
  int total = 0;
  for (int r : ranks) total += delta.moved[static_cast<std::size_t>(r - 1)];
  return total;
}

double quad_move_weighted(const RoundDelta& delta, const Tuple4& ranks) {
  double total = 0.5 * delta.moved[static_cast<std::size_t>(ranks[0] - 1)];
  for (int j = 1; j < 4; ++j) total += delta.moved[static_cast<std::size_t>(ranks[j] - 1)];
  return total;
}

Tuple4 phi_bijection(const Tuple4& ranks, Parity moved) {
  int moved_count = 0;
  int moved_at = -1;
  for (int j = 0; j < 4; ++j) {
    if (is_moved(ranks[static_cast<std::size_t>(j)], moved)) {
      ++moved_count;
      moved_at = j;
    }
  }
  if (moved_count > 1) fail("not-slow-tuple", "tuple has more than one index of the moved parity");
  Tuple4 out = ranks;
  switch (moved_at) {
    case -1:  // no member moves: shift the top three down
      out[1] -= 1;
      out[2] -= 1;
      out[3] -= 1;
      break;
    case 3:
      out[2] -= 1;
      break;
    case 2:
      out[1] -= 1;
      break;
    case 1:
    case 0:
      out[3] -= 1;
      break;
  }
  return out;
}

Tuple4 phi_inverse(const Tuple4& ranks, Parity moved) {
  bool m[4];
  for (int j = 0; j < 4; ++j) m[j] = is_moved(ranks[static_cast<std::size_t>(j)], moved);
  Tuple4 out = ranks;
  if (!m[0] && m[1] && m[2] && m[3]) {
    out[1] += 1;
    out[2] += 1;
    out[3] += 1;
  } else if (!m[0] && !m[1] && m[2] && m[3]) {
    out[2] += 1;
  } else if (!m[0] && m[1] && m[2] && !m[3]) {
    out[1] += 1;
  } else if (!m[0] && m[1] && !m[2] && m[3]) {
    out[3] += 1;
  } else if (m[0] && !m[1] && !m[2] && m[3]) {
    out[3] += 1;
  } else {
    fail("not-in-image", "tuple parities do not match any image pattern");
  }
  return out;
}

namespace {

std::vector<Tuple4> all_tuples(int coins) {
  std::vector<Tuple4> tuples;
  for (int a = 1; a <= coins; ++a)
    for (int b = a + 1; b <= coins; ++b)
      for (int c = b + 1; c <= coins; ++c)
        for (int d = c + 1; d <= coins; ++d) tuples.push_back({a, b, c, d});
  return tuples;
}

std::int64_t tuple_code(const Tuple4& t, int coins) {
  std::int64_t code = 0;
  for (int v : t) code = code * (coins + 1) + v;
  return code;
}

}  // namespace

PhiReport check_phi_claim(int coins, Parity moved) {
  if (coins < 8 || coins > 14) fail("invalid-config", "phi claim check covers 8 <= K <= 14");
  PhiReport report;
  report.coins = coins;
  report.moved = moved;

  const auto tuples = all_tuples(coins);
  report.tuple_count = tuples.size();
  auto moved_count = [&](const Tuple4& t) {
    int n = 0;
    for (int v : t) n += is_moved(v, moved);
    return n;
  };

  std::unordered_map<std::int64_t, Tuple4> partner;
  std::unordered_map<std::int64_t, std::int64_t> image_of;  // image code -> preimage code
  for (const Tuple4& t : tuples) {
    if (moved_count(t) > 1) continue;
    ++report.slow_count;
    const Tuple4 img = phi_bijection(t, moved);
    for (int j = 0; j < 4; ++j) {
      if (img[static_cast<std::size_t>(j)] < 1 || img[static_cast<std::size_t>(j)] > coins) report.injective = false;
      if (j > 0 && img[static_cast<std::size_t>(j)] <= img[static_cast<std::size_t>(j - 1)]) report.injective = false;
    }
    if (moved_count(img) <= 1) report.image_disjoint_from_slow = false;
    const std::int64_t icode = tuple_code(img, coins);
    if (!image_of.emplace(icode, tuple_code(t, coins)).second) report.injective = false;
    partner[tuple_code(t, coins)] = img;
    partner[icode] = t;
    if (phi_inverse(img, moved) != t) report.inverse_ok = false;
  }
  for (const Tuple4& t : tuples) {
    const std::int64_t code = tuple_code(t, coins);
    if (partner.find(code) == partner.end()) {
      partner[code] = t;  // self-pair
      ++report.self_paired;
    }
  }
  for (const Tuple4& t : tuples) {
    const Tuple4 mate = partner.at(tuple_code(t, coins));
    if (partner.at(tuple_code(mate, coins)) != t) report.involution = false;
    const int u_sum = moved_count(t) + moved_count(mate);
    if (u_sum < 3) report.pair_sum_ok = false;
    if (moved_count(t) <= 1) {  // u^q < 3/2
      bool dominated = true;
      for (int j = 0; j < 4; ++j)
        if (mate[static_cast<std::size_t>(j)] > t[static_cast<std::size_t>(j)]) dominated = false;
      if (!dominated || mate == t) report.poset_ok = false;
    }
  }
  return report;
}

PotentialState potential_state(const GameTrace& trace, std::int64_t t, double epsilon, int window) {
  if (epsilon <= 0 || epsilon >= 1) fail("invalid-config", "epsilon must lie in (0,1)");
  PotentialState state;
  state.t = t;
  state.window = std::min(window, trace.config.coins);
  const double exponent_scale = std::log1p(epsilon) / 6.0;
  const auto& row = trace.posc_rows[static_cast<std::size_t>(t)];
  double psi = 0;
  for (int a = 1; a <= state.window; ++a)
    for (int b = a + 1; b <= state.window; ++b)
      for (int c = b + 1; c <= state.window; ++c)
        for (int d = c + 1; d <= state.window; ++d) {
          PotentialEntry entry;
          entry.ranks = {a, b, c, d};
          entry.posq2 = row[static_cast<std::size_t>(a - 1)] +
                        2 * (row[static_cast<std::size_t>(b - 1)] + row[static_cast<std::size_t>(c - 1)] +
                             row[static_cast<std::size_t>(d - 1)]);
          entry.d2 = std::max<std::int64_t>(0, 3 * t - entry.posq2);
          entry.w = std::exp(static_cast<double>(entry.d2) * exponent_scale);
          psi += entry.w;
          state.entries.push_back(entry);
        }
  state.psi = psi;
  return state;
}

namespace {

double psi_only(const std::vector<std::int64_t>& row, std::int64_t t, double exponent_scale, int window) {
  double psi = 0;
  for (int a = 1; a <= window; ++a)
    for (int b = a + 1; b <= window; ++b)
      for (int c = b + 1; c <= window; ++c)
        for (int d = c + 1; d <= window; ++d) {
          const std::int64_t posq2 = row[static_cast<std::size_t>(a - 1)] +
                                     2 * (row[static_cast<std::size_t>(b - 1)] +
                                          row[static_cast<std::size_t>(c - 1)] +
                                          row[static_cast<std::size_t>(d - 1)]);
          const std::int64_t d2 = std::max<std::int64_t>(0, 3 * t - posq2);
          psi += std::exp(static_cast<double>(d2) * exponent_scale);
        }
  return psi;
}

}  // namespace

PsiReport check_psi_recurrence(const GameTrace& trace, double epsilon, int window) {
  if (epsilon <= 0 || epsilon >= 1) fail("invalid-config", "epsilon must lie in (0,1)");
  PsiReport report;
  report.window = std::min(window, trace.config.coins);
  report.epsilon = epsilon;
  if (report.window < 4) fail("wrong-K", "psi needs at least 4 coins");

  const double exponent_scale = std::log1p(epsilon) / 6.0;
  const double step_factor = std::exp(epsilon * epsilon / 2.0);
  const double subsets = static_cast<double>(binom(report.window, 4));
  const double additive = epsilon * subsets / 2.0;
  const std::int64_t n = trace.round_count();

  std::vector<double> psi(static_cast<std::size_t>(n) + 1);
  for (std::int64_t t = 0; t <= n; ++t)
    psi[static_cast<std::size_t>(t)] =
        psi_only(trace.posc_rows[static_cast<std::size_t>(t)], t, exponent_scale, report.window);

  if (psi[0] != subsets) {
    ++report.violation_count;
    report.violations.push_back({"psi-initial", 0, 0, psi[0], subsets});
  }
  for (std::int64_t t = 0; t < n; ++t) {
    const double lhs = psi[static_cast<std::size_t>(t) + 1];
    const double rhs = step_factor * psi[static_cast<std::size_t>(t)] + additive;
    ++report.checked;
    report.step_slack.push_back(rhs - lhs);
    report.max_step_ratio = std::max(report.max_step_ratio, lhs / psi[static_cast<std::size_t>(t)]);
    if (!leq_with_tol(lhs, rhs)) {
      ++report.violation_count;
      if (report.violations.size() < MonitorReport::kMaxStoredViolations)
        report.violations.push_back({"psi-recurrence", t + 1, 0, lhs, rhs});
    }
  }
  const double solved_scale = subsets * (1.0 + 1.0 / epsilon);
  for (std::int64_t t = 0; t <= n; ++t) {
    const double bound = std::exp(static_cast<double>(t) * epsilon * epsilon / 2.0) * solved_scale;
    ++report.checked;
    if (!leq_with_tol(psi[static_cast<std::size_t>(t)], bound)) {
      ++report.violation_count;
      if (report.violations.size() < MonitorReport::kMaxStoredViolations)
        report.violations.push_back({"psi-solved-form", t, 0, psi[static_cast<std::size_t>(t)], bound});
    }
  }
  return report;
}

QuadrupleReport check_quadruple_bound(const GameTrace& trace, double epsilon) {
  if (trace.config.coins < 4) fail("wrong-K", "quadruple bound needs at least 4 coins");
  QuadrupleReport report;
  const std::int64_t n = trace.round_count();
  const double floor_allowed = -10.0 * epsilon * static_cast<double>(n);
  report.min_slack2 = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t t = 0; t <= n; ++t) {
    const std::int64_t slack2 =
        trace.posc(t, 1) + 2 * (trace.posc(t, 2) + trace.posc(t, 3) + trace.posc(t, 4)) - 3 * t;
    report.slack2_series.push_back(slack2);
    ++report.checked;
    if (slack2 < report.min_slack2) {
      report.min_slack2 = slack2;
      report.argmin_round = t;
    }
    if (static_cast<double>(slack2) < floor_allowed - kAbsTol) {
      ++report.violation_count;
      if (report.violations.size() < MonitorReport::kMaxStoredViolations)
        report.violations.push_back({"quadruple-bound", t, 0, static_cast<double>(slack2), floor_allowed});
    }
  }
  return report;
}

const std::array<MilestoneRow, 7>& milestone_table() {
  // Doubled per-q bounds on posc(1..5) at the seven checkpoints; the final
  // fifth entry is 33.5q, hence the doubling.
  static const std::array<MilestoneRow, 7> rows = {{
      {32, {0, 32, 32, 32, 32}},
      {48, {32, 32, 48, 48, 48}},
      {56, {32, 48, 48, 56, 56}},
      {60, {40, 48, 56, 56, 60}},
      {62, {40, 52, 56, 60, 60}},
      {64, {40, 56, 56, 62, 62}},
      {67, {46, 56, 62, 62, 67}},
  }};
  return rows;
}

std::int64_t milestone_slack(const Ratio& epsilon, std::int64_t q) {
  // ceil(eps * q), exactly
  const __int128 num = static_cast<__int128>(epsilon.num) * q;
  return static_cast<std::int64_t>((num + epsilon.den - 1) / epsilon.den);
}

MonitorReport attack_table_check(const GameTrace& trace, std::int64_t q, const Ratio& epsilon) {
  MonitorReport report;
  report.monitor = "attack-table";
  if (trace.config.rounds != 67 * q) fail("bad-q", "trace length is not 67q");
  if (trace.config.coins < 5) fail("wrong-K", "milestone table needs at least 5 coins");
  const std::int64_t slack = milestone_slack(epsilon, q);
  report.stats["slack"] = static_cast<double>(slack);
  // The analysis needs K large relative to 1/eps; record when it is not.
  report.stats["k_sufficient"] =
      static_cast<__int128>(trace.config.coins) * epsilon.num >= 1000 * static_cast<__int128>(epsilon.den)
          ? 1.0
          : 0.0;
  for (const MilestoneRow& row : milestone_table()) {
    const std::int64_t m = row.m_factor * q;
    for (int i = 1; i <= 5; ++i) {
      const std::int64_t bound = row.bound2[static_cast<std::size_t>(i - 1)] * q / 2 + slack;
      ++report.checked;
      if (trace.posc(m, i) > bound)
        report.flag(m, i, static_cast<double>(trace.posc(m, i)), static_cast<double>(bound));
    }
  }
  return report;
}

ClaimSuiteReport monitor_claim_suite(const GameTrace& trace, std::int64_t q, const Ratio& epsilon) {
  if (trace.config.rounds != 67 * q) fail("bad-q", "trace length is not 67q");
  if (trace.config.coins < 6) fail("wrong-K", "claim suite needs at least 6 coins");
  ClaimSuiteReport suite;
  const std::int64_t slack = milestone_slack(epsilon, q);
  const std::int64_t n = trace.round_count();

  suite.posc6.monitor = "posc6-half-pace";
  for (std::int64_t m = 0; m <= n; ++m) {
    ++suite.posc6.checked;
    // posc_m(6) < m/2 + eps q, doubled to stay integral
    if (2 * trace.posc(m, 6) >= m + 2 * slack)
      suite.posc6.flag(m, 6, static_cast<double>(trace.posc(m, 6)),
                       static_cast<double>(m) / 2.0 + static_cast<double>(slack));
  }

  suite.elapsed = monitor_elapsed(trace);

  suite.no_catchup.monitor = "no-catchup";
  const int coins = trace.config.coins;
  std::int64_t run_start = 0;
  auto check_interval = [&](std::int64_t a, std::int64_t b, ParityChoice chosen) {
    // the parity class never chosen over [a, b): claims apply to ranks of the
    // other parity
    const bool unchosen_even = chosen == ParityChoice::Odd;
    for (std::int64_t u = a + 1; u <= b; ++u) {
      for (int rank = 2; rank <= coins; ++rank) {
        const bool rank_even = rank % 2 == 0;
        if (rank_even != unchosen_even) continue;
        const std::int64_t allowed =
            std::max(trace.posc(a, rank), trace.posc(a, rank - 1) + (u - a));
        ++suite.no_catchup.checked;
        if (trace.posc(u, rank) > allowed)
          suite.no_catchup.flag(u, rank, static_cast<double>(trace.posc(u, rank)),
                                static_cast<double>(allowed));
      }
    }
  };
  for (std::int64_t t = 1; t <= n; ++t) {
    if (t == n || trace.parity[static_cast<std::size_t>(t)] != trace.parity[static_cast<std::size_t>(run_start)]) {
      if (trace.parity[static_cast<std::size_t>(run_start)] != ParityChoice::Other)
        check_interval(run_start, t, trace.parity[static_cast<std::size_t>(run_start)]);
      run_start = t;
    }
  }

  suite.clubsuit.monitor = "clubsuit-two-step";
  for (std::int64_t d = 0; d <= 2 * q; d += 2) {
    const std::int64_t m = 62 * q + d;
    ++suite.clubsuit.checked;
    // posc_{62q+d}(5) <= 30q + d/2 + eps q, doubled
    if (2 * trace.posc(m, 5) > 60 * q + d + 2 * slack)
      suite.clubsuit.flag(m, 5, static_cast<double>(trace.posc(m, 5)),
                          static_cast<double>(30 * q) + static_cast<double>(d) / 2.0 +
                              static_cast<double>(slack));
  }
  return suite;
}

}  // namespace coinfeed
