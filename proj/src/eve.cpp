#include "coinfeed/eve.hpp"

#include <algorithm>
#include <cstdlib>

namespace coinfeed {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  // num >= 0, den > 0 throughout.
  return (num + den - 1) / den;
}

}  // namespace

int greedy_min_set(const GameState&, const Partition& p) {
  int ones = 0;
  for (std::uint8_t s : p.side) ones += s;
  const int zeros = static_cast<int>(p.side.size()) - ones;
  return ones < zeros ? 1 : 0;
}

int halving_opener(const GameState& state, const Partition& p) {
  int zeros_on[2] = {0, 0};
  for (std::size_t x = 0; x < p.side.size(); ++x)
    if (state.positions[x] == 0) ++zeros_on[p.side[x]];
  return zeros_on[1] < zeros_on[0] ? 1 : 0;
}

ThetaBound compute_theta(int ell, std::int64_t n, std::int64_t m,
                         const std::vector<std::int64_t>& positions) {
  if (ell < 1 || ell > 20) fail("invalid-config", "list size must be in [1, 20]");
  const std::int64_t expected = (std::int64_t{1} << (ell + 1)) - 1;
  if (static_cast<std::int64_t>(positions.size()) != expected)
    fail("wrong-K", "theta for ell=" + std::to_string(ell) + " needs " + std::to_string(expected) +
                        " coins, got " + std::to_string(positions.size()));
  if (m > n) fail("invalid-config", "m > n");
  ThetaBound b;
  b.ell = ell;
  b.n = n;
  b.m = m;
  for (std::int64_t p : positions) b.sigma_m += p;
  const std::int64_t half = (std::int64_t{1} << ell) - 1;
  b.theta = ceil_div(half * (n - m) + b.sigma_m, expected);
  return b;
}

int RandomEve::choose(const GameState& state, const Partition&) {
  return static_cast<int>(splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(state.completed) + 0x51ED)) & 1);
}

namespace detail {

ThresholdEngine::SubRank ThresholdEngine::sub_rank(const GameState& state) const {
  SubRank view;
  view.order = active_;
  std::sort(view.order.begin(), view.order.end(), [&](int a, int b) {
    const std::int64_t pa = state.positions[static_cast<std::size_t>(a)];
    const std::int64_t pb = state.positions[static_cast<std::size_t>(b)];
    if (pa != pb) return pa < pb;
    return a < b;
  });
  view.posc.resize(view.order.size());
  for (std::size_t i = 0; i < view.order.size(); ++i)
    view.posc[i] = state.positions[static_cast<std::size_t>(view.order[i])];
  return view;
}

int ThresholdEngine::masked_greedy(const Partition& p) const {
  int on[2] = {0, 0};
  for (int x : active_) ++on[p.side[static_cast<std::size_t>(x)]];
  return on[1] < on[0] ? 1 : 0;
}

void ThresholdEngine::attach(const GameState& state, std::vector<int> active_ids) {
  active_ = std::move(active_ids);
  attached_ = true;
  const SubRank view = sub_rank(state);
  const std::int64_t m = state.completed;

  RecursionEvent ev;
  ev.level = level_;
  ev.attach_round = m;
  if (level_ == 1) {
    // Three-coin threshold: the ceiling term, but never below where the
    // second coin already sits.
    std::int64_t sigma = 0;
    for (std::int64_t p : view.posc) sigma += p;
    theta_ = std::max(ceil_div(total_rounds_ - m + sigma, 3), view.posc[1]);
    mode_ = Mode::BaseGreedy;
  } else {
    theta_ = compute_theta(level_, total_rounds_, m, view.posc).theta;
    mode_ = Mode::IndGreedy;
    if (view.posc[0] < theta_ + m - total_rounds_) {
      ev.precondition_ok = false;
      mode_ = Mode::Fallback;
    }
  }
  ev.theta = theta_;
  if (!events_.empty()) ev.nesting_ok = theta_ <= events_.back().theta;
  events_.push_back(ev);
}

void ThresholdEngine::descend(const GameState& state, const SubRank& view) {
  events_.back().switch_round = state.completed;
  events_.back().exit_identity_ok = (view.posc[0] == theta_ + state.completed - total_rounds_);
  // Freeze the lowest coin, discard the top half, keep ranks 2..2^level
  // (2^level - 1 coins, the sub-game size for level-1).
  const std::size_t keep_end = (std::size_t{1} << level_);
  std::vector<int> kept(view.order.begin() + 1, view.order.begin() + static_cast<std::ptrdiff_t>(keep_end));
  --level_;
  attach(state, std::move(kept));
}

int ThresholdEngine::choose(const GameState& state, const Partition& p) {
  if (!attached_) fail("invalid-config", "threshold engine consulted before attach");
  for (;;) {
    switch (mode_) {
      case Mode::Fallback:
        return masked_greedy(p);
      case Mode::IndGreedy: {
        const SubRank view = sub_rank(state);
        if (view.posc[0] > theta_ + state.completed - total_rounds_) return masked_greedy(p);
        descend(state, view);
        continue;
      }
      case Mode::BaseGreedy: {
        const SubRank view = sub_rank(state);
        if (view.posc[1] < theta_) return masked_greedy(p);
        mode_ = Mode::BaseAvoid;
        continue;
      }
      case Mode::BaseAvoid: {
        const SubRank view = sub_rank(state);
        const int second = view.order[1];
        return 1 - p.side[static_cast<std::size_t>(second)];
      }
    }
  }
}

}  // namespace detail

int BaseCaseAdversary::choose(const GameState& state, const Partition& p) {
  if (state.config.coins != 3) fail("wrong-K", "base-case adversary requires exactly 3 coins");
  if (!engine_.attached()) {
    std::vector<int> all = {0, 1, 2};
    engine_.attach(state, std::move(all));
  }
  return engine_.choose(state, p);
}

int RecursiveAdversary::choose(const GameState& state, const Partition& p) {
  const int needed = (1 << (ell_ + 1)) - 1;
  if (state.config.coins != needed)
    fail("wrong-K", "recursive adversary for ell=" + std::to_string(ell_) + " requires K=" +
                        std::to_string(needed));
  if (!engine_.attached()) {
    std::vector<int> all(static_cast<std::size_t>(state.config.coins));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    engine_.attach(state, std::move(all));
  }
  return engine_.choose(state, p);
}

FullUpperBoundAdversary::FullUpperBoundAdversary(int ell, std::int64_t total_rounds, int coins)
    : ell_(ell), opener_rounds_(0), engine_(ell, total_rounds) {
  if (ell < 1 || ell > 20) fail("invalid-config", "list size must be in [1, 20]");
  const int needed = (1 << (ell + 1)) - 1;
  if (coins < needed)
    fail("too-few-coins", "need at least " + std::to_string(needed) + " coins for ell=" + std::to_string(ell));
  // Largest s with K / 2^s >= 2^{ell+1} - 1: halving keeps at least half the
  // zero coins each round, so s opener rounds still leave enough at 0.
  while ((static_cast<std::int64_t>(coins) >> (opener_rounds_ + 1)) >= needed) ++opener_rounds_;
}

int FullUpperBoundAdversary::choose(const GameState& state, const Partition& p) {
  if (state.completed < opener_rounds_) return halving_opener(state, p);
  if (!engine_.attached() && !opener_failed_) {
    const int needed = (1 << (ell_ + 1)) - 1;
    std::vector<int> zeros;
    for (int x = 0; x < state.config.coins && static_cast<int>(zeros.size()) < needed; ++x)
      if (state.positions[static_cast<std::size_t>(x)] == 0) zeros.push_back(x);
    if (static_cast<int>(zeros.size()) < needed) {
      opener_failed_ = true;  // cannot happen under the halving guarantee
    } else {
      engine_.attach(state, std::move(zeros));
    }
  }
  if (opener_failed_) return greedy_min_set(state, p);
  return engine_.choose(state, p);
}

SwAttackSchedule::SwAttackSchedule(std::int64_t q) : q_(q) {
  if (q <= 0 || q % 2 != 0 || q > (kMaxRounds / 67)) fail("bad-q", "q must be a positive even integer");
}

bool SwAttackSchedule::even_phase(std::int64_t t, std::int64_t q) {
  if (t < 32 * q) return true;
  if (t < 48 * q) return false;
  if (t < 56 * q) return true;
  if (t < 60 * q) return false;
  if (t < 64 * q) return true;
  return false;
}

int SwAttackSchedule::choose(const GameState& state, const Partition& p) {
  if (state.config.rounds != 67 * q_)
    fail("bad-q", "attack schedule for q=" + std::to_string(q_) + " needs n=" + std::to_string(67 * q_));
  const RankView view = rank_view(state);
  int odd_label = -1, even_label = -1;
  for (std::size_t i = 0; i < view.order.size(); ++i) {
    const int label = p.side[static_cast<std::size_t>(view.order[i])];
    int& slot = (i % 2 == 0) ? odd_label : even_label;
    if (slot == -1)
      slot = label;
    else if (slot != label)
      fail("not-sw-partition", "partition is not the rank-parity split at t=" + std::to_string(state.completed));
  }
  if (odd_label == even_label)
    fail("not-sw-partition", "partition is not the rank-parity split at t=" + std::to_string(state.completed));
  return even_phase(state.completed, q_) ? even_label : odd_label;
}

std::unique_ptr<EveStrategy> make_eve(const std::string& name, const GameConfig& cfg) {
  auto arg = [&](std::size_t prefix) { return std::strtoll(name.c_str() + prefix, nullptr, 10); };
  if (name == "greedy") return std::make_unique<GreedyEve>();
  if (name.rfind("random:", 0) == 0) return std::make_unique<RandomEve>(static_cast<std::uint64_t>(arg(7)));
  if (name.rfind("base:", 0) == 0) {
    const std::int64_t n = arg(5);
    if (n != cfg.rounds) fail("invalid-config", "base:<n> must match the game's round count");
    return std::make_unique<BaseCaseAdversary>(n);
  }
  if (name.rfind("recursive:", 0) == 0)
    return std::make_unique<RecursiveAdversary>(static_cast<int>(arg(10)), cfg.rounds);
  if (name.rfind("upperbound:", 0) == 0)
    return std::make_unique<FullUpperBoundAdversary>(static_cast<int>(arg(11)), cfg.rounds, cfg.coins);
  if (name.rfind("swattack:", 0) == 0) return std::make_unique<SwAttackSchedule>(arg(9));
  fail("invalid-config", "unknown eve strategy: " + name);
}

}  // namespace coinfeed
