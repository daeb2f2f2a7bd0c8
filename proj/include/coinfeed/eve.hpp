#pragma once

#include <memory>
#include <string>
#include <vector>

#include "coinfeed/game.hpp"

namespace coinfeed {

// Eve picks one side of Bob's partition each round. Instances carry per-game
// phase state (switch rounds, recursion stack): construct one per game, never
// share a live instance between games.
class EveStrategy {
 public:
  virtual ~EveStrategy() = default;
  virtual int choose(const GameState& state, const Partition& p) = 0;
  virtual std::string name() const = 0;
};

// Side with fewer coins; equal sizes resolve to side 0.
int greedy_min_set(const GameState& state, const Partition& p);

// Side whose complement keeps more coins at position 0; tie resolves to 0.
// Only meaningful while some coins are still at 0.
int halving_opener(const GameState& state, const Partition& p);

// Threshold for the list-(ell+1) adversary on K = 2^{ell+1}-1 coins:
// theta = ceil(((2^ell - 1)(n - m) + sigma_m) / (2^{ell+1} - 1)).
struct ThetaBound {
  int ell = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t sigma_m = 0;
  std::int64_t theta = 0;
};

ThetaBound compute_theta(int ell, std::int64_t n, std::int64_t m,
                         const std::vector<std::int64_t>& positions);

// One recursion boundary of the threshold adversary, with its runtime
// self-checks: theta never grows down the recursion, and phase 1 exits
// exactly on the boundary identity.
struct RecursionEvent {
  int level = 0;                 // ell of the sub-game
  std::int64_t attach_round = 0; // m
  std::int64_t theta = 0;
  std::int64_t switch_round = -1;
  bool precondition_ok = true;
  bool nesting_ok = true;       // theta <= enclosing theta
  bool exit_identity_ok = true; // posc_T(1) == theta + T - n at the switch
};

namespace detail {

// Shared engine for the threshold adversaries. Plays on a masked subset of
// the coins; everything outside the mask is ignored when counting sides.
// Level >= 2 runs the inductive strategy and recurses; level 1 is the
// three-coin strategy (greedy until the second coin hits theta, then always
// avoid it).
class ThresholdEngine {
 public:
  ThresholdEngine(int level, std::int64_t total_rounds) : level_(level), total_rounds_(total_rounds) {}

  void attach(const GameState& state, std::vector<int> active_ids);
  int choose(const GameState& state, const Partition& p);

  bool attached() const { return attached_; }
  const std::vector<RecursionEvent>& events() const { return events_; }

 private:
  enum class Mode { IndGreedy, BaseGreedy, BaseAvoid, Fallback };

  struct SubRank {
    std::vector<int> order;
    std::vector<std::int64_t> posc;
  };
  SubRank sub_rank(const GameState& state) const;
  int masked_greedy(const Partition& p) const;
  void descend(const GameState& state, const SubRank& view);

  int level_;
  std::int64_t total_rounds_;
  std::vector<int> active_;
  std::int64_t theta_ = 0;
  Mode mode_ = Mode::Fallback;
  bool attached_ = false;
  std::vector<RecursionEvent> events_;
};

}  // namespace detail

class GreedyEve final : public EveStrategy {
 public:
  int choose(const GameState& state, const Partition& p) override { return greedy_min_set(state, p); }
  std::string name() const override { return "greedy"; }
};

// Replays a fixed choice sequence; round t plays the t-th entry. Used to
// re-run oracle witnesses and exhaustive suites through the same code path.
class ScriptedEve final : public EveStrategy {
 public:
  explicit ScriptedEve(std::vector<std::uint8_t> choices) : choices_(std::move(choices)) {}
  int choose(const GameState& state, const Partition&) override {
    const auto t = static_cast<std::size_t>(state.completed);
    if (t >= choices_.size()) fail("script-exhausted", "choice script shorter than the game");
    return choices_[t];
  }
  std::string name() const override { return "scripted-eve"; }

 private:
  std::vector<std::uint8_t> choices_;
};

// Seeded coin-flip side choice, a pure function of (seed, round).
class RandomEve final : public EveStrategy {
 public:
  explicit RandomEve(std::uint64_t seed) : seed_(seed) {}
  int choose(const GameState& state, const Partition& p) override;
  std::string name() const override { return "random:" + std::to_string(seed_); }

 private:
  std::uint64_t seed_;
};

// Three-coin adversary: keeps two coins at or below
// max{ceil((n - m + sum posc_m)/3), posc_m(2)}, attaching at the first round
// it is consulted.
class BaseCaseAdversary final : public EveStrategy {
 public:
  explicit BaseCaseAdversary(std::int64_t total_rounds) : engine_(1, total_rounds) {}
  int choose(const GameState& state, const Partition& p) override;
  std::string name() const override { return "base"; }
  const std::vector<RecursionEvent>& events() const { return engine_.events(); }

 private:
  detail::ThresholdEngine engine_;
};

// Inductive adversary on K = 2^{ell+1}-1 coins: greedy until the lowest coin
// is pinned under the threshold line, then recurses on the middle coins.
class RecursiveAdversary final : public EveStrategy {
 public:
  RecursiveAdversary(int ell, std::int64_t total_rounds) : ell_(ell), engine_(ell, total_rounds) {
    if (ell < 1 || ell > 20) fail("invalid-config", "list size must be in [1, 20]");
  }
  int choose(const GameState& state, const Partition& p) override;
  std::string name() const override { return "recursive:" + std::to_string(ell_); }
  const std::vector<RecursionEvent>& events() const { return engine_.events(); }

 private:
  int ell_;
  detail::ThresholdEngine engine_;
};

// Halving opener followed by the inductive adversary on 2^{ell+1}-1 coins
// that are still at position 0 after the opener rounds.
class FullUpperBoundAdversary final : public EveStrategy {
 public:
  FullUpperBoundAdversary(int ell, std::int64_t total_rounds, int coins);
  int choose(const GameState& state, const Partition& p) override;
  std::string name() const override { return "upperbound:" + std::to_string(ell_); }
  const std::vector<RecursionEvent>& events() const { return engine_.events(); }
  std::int64_t opener_rounds() const { return opener_rounds_; }
  bool opener_failed() const { return opener_failed_; }

 private:
  int ell_;
  std::int64_t opener_rounds_;
  detail::ThresholdEngine engine_;
  bool opener_failed_ = false;
};

// Six-phase schedule against the rank-parity Bob: 32q even, 16q odd, 8q even,
// 4q odd, 4q even, 3q odd. Checks every round that the offered partition
// really is the rank-parity split.
class SwAttackSchedule final : public EveStrategy {
 public:
  explicit SwAttackSchedule(std::int64_t q);
  int choose(const GameState& state, const Partition& p) override;
  std::string name() const override { return "swattack:" + std::to_string(q_); }

  // Parity scheduled for the round starting at t completed rounds.
  static bool even_phase(std::int64_t t, std::int64_t q);

 private:
  std::int64_t q_;
};

// Parses "greedy", "random:<seed>", "base:<n>", "recursive:<ell>",
// "upperbound:<ell>", "swattack:<q>".
std::unique_ptr<EveStrategy> make_eve(const std::string& name, const GameConfig& cfg);

}  // namespace coinfeed
