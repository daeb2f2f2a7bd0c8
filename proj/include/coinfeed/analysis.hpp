#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coinfeed/ratio.hpp"
#include "coinfeed/trace.hpp"

namespace coinfeed {

// One failed assertion: which monitor, at which round, for which (1-based)
// rank or tuple index, with the two sides of the inequality that broke.
struct Violation {
  std::string monitor;
  std::int64_t round = 0;
  std::int64_t index = 0;
  double lhs = 0;
  double rhs = 0;
};

struct MonitorReport {
  std::string monitor;
  std::uint64_t checked = 0;
  std::uint64_t violation_count = 0;
  std::vector<Violation> violations;  // first kMaxStoredViolations only
  std::map<std::string, double> stats;

  static constexpr std::size_t kMaxStoredViolations = 256;
  bool pass() const { return violation_count == 0; }
  void flag(std::int64_t round, std::int64_t index, double lhs, double rhs);
};

// Per-round rank movement is 0 or 1 for every rank.
MonitorReport monitor_posc_step(const GameTrace& trace);

// posc_{t'}(i) - posc_t(i) <= t' - t. Checks all consecutive pairs, plus all
// pairs on short traces and a deterministic spread of long-range pairs
// otherwise.
MonitorReport monitor_elapsed(const GameTrace& trace);

// posc(2) - posc(1) + 1 >= posc(4) - posc(3) at every round boundary.
// Only meaningful for rank-parity (SW) Bobs.
MonitorReport monitor_gap(const GameTrace& trace);

// ---------------------------------------------------------------------------
// Quadruple-game machinery.

enum class Parity { Odd, Even };
using Tuple4 = std::array<int, 4>;  // strictly ascending 1-based rank indices

// Movement of each rank's coin in round t+1 (needs id-level trace data).
struct RoundDelta {
  std::vector<std::uint8_t> moved;  // moved[i]: the rank-(i+1) coin moved
};
RoundDelta round_delta(const GameTrace& trace, std::int64_t t);

// Quadruple movement: plain count of moved members, and the variant that
// halves the tuple's first member to match the quadruple position weights.
int quad_move(const RoundDelta& delta, const Tuple4& ranks);
double quad_move_weighted(const RoundDelta& delta, const Tuple4& ranks);

// The pairing map on "slow" tuples (at most one index of the moved parity).
Tuple4 phi_bijection(const Tuple4& ranks, Parity moved);
Tuple4 phi_inverse(const Tuple4& ranks, Parity moved);

struct PhiReport {
  int coins = 0;
  Parity moved = Parity::Even;
  std::uint64_t tuple_count = 0;
  std::uint64_t slow_count = 0;
  std::uint64_t self_paired = 0;
  bool injective = true;
  bool image_disjoint_from_slow = true;
  bool involution = true;
  bool pair_sum_ok = true;   // u(i) + u(partner) >= 3 on every pair
  bool poset_ok = true;      // slow tuples dominate their partners coordinatewise
  bool inverse_ok = true;    // published inverse table undoes phi
  bool pass() const {
    return injective && image_disjoint_from_slow && involution && pair_sum_ok && poset_ok && inverse_ok;
  }
};
PhiReport check_phi_claim(int coins, Parity moved);

// Potential over 4-subsets of the lowest window ranks. posq and the deficit d
// are exact half-integers (stored doubled); only w and psi are floating.
struct PotentialEntry {
  Tuple4 ranks;
  std::int64_t posq2 = 0;  // 2 * (posc(i1)/2 + posc(i2) + posc(i3) + posc(i4))
  std::int64_t d2 = 0;     // 2 * max{0, 3t/2 - posq}
  double w = 1.0;
};
struct PotentialState {
  std::int64_t t = 0;
  int window = 0;
  double psi = 0;
  std::vector<PotentialEntry> entries;  // lexicographic tuple order
};
PotentialState potential_state(const GameTrace& trace, std::int64_t t, double epsilon, int window = 16);

// psi(t+1) <= e^{eps^2/2} psi(t) + eps*C(W,4)/2 every round, and the solved
// form psi(t) <= e^{t eps^2/2} C(W,4) (1 + 1/eps) at every boundary.
// Comparisons use relative tolerance 1e-9, absolute 1e-12.
struct PsiReport {
  int window = 0;
  double epsilon = 0;
  std::uint64_t checked = 0;
  std::uint64_t violation_count = 0;
  std::vector<Violation> violations;
  std::vector<double> step_slack;  // rhs - lhs per round
  double max_step_ratio = 0;       // max psi(t+1)/psi(t)
  bool pass() const { return violation_count == 0; }
};
PsiReport check_psi_recurrence(const GameTrace& trace, double epsilon, int window = 16);

// Slack of the first-four-coins pace bound, in half-units:
// slack2(tau) = posc(1) + 2(posc(2)+posc(3)+posc(4)) - 3 tau.
// Passes when min slack >= -5 eps n (i.e. min slack2 >= -10 eps n).
struct QuadrupleReport {
  std::uint64_t checked = 0;
  std::uint64_t violation_count = 0;
  std::vector<Violation> violations;
  std::vector<std::int64_t> slack2_series;
  std::int64_t min_slack2 = 0;
  std::int64_t argmin_round = 0;
  bool pass() const { return violation_count == 0; }
};
QuadrupleReport check_quadruple_bound(const GameTrace& trace, double epsilon);

// ---------------------------------------------------------------------------
// The six-phase attack milestones.

struct MilestoneRow {
  std::int64_t m_factor;                   // checkpoint round = m_factor * q
  std::array<std::int64_t, 5> bound2;      // doubled per-q bound factors for posc(1..5)
};
const std::array<MilestoneRow, 7>& milestone_table();

// Integer slack ceil(eps*q), computed exactly from the rational eps.
std::int64_t milestone_slack(const Ratio& epsilon, std::int64_t q);

// posc_m(i) <= bound*q + ceil(eps q) for the seven checkpoint rows, i = 1..5.
MonitorReport attack_table_check(const GameTrace& trace, std::int64_t q, const Ratio& epsilon);

// The four claim families behind the table: the posc(6) half-pace bound, the
// elapsed-rounds bound, no-catchup over constant-parity intervals, and the
// two-step bound on posc(5) between rounds 62q and 64q.
struct ClaimSuiteReport {
  MonitorReport posc6;
  MonitorReport elapsed;
  MonitorReport no_catchup;
  MonitorReport clubsuit;
  bool pass() const {
    return posc6.pass() && elapsed.pass() && no_catchup.pass() && clubsuit.pass();
  }
};
ClaimSuiteReport monitor_claim_suite(const GameTrace& trace, std::int64_t q, const Ratio& epsilon);

std::int64_t binom(std::int64_t n, std::int64_t k);

}  // namespace coinfeed
