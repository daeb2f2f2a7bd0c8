#pragma once

#include <memory>
#include <string>
#include <vector>

#include "coinfeed/game.hpp"
#include "coinfeed/trace.hpp"

namespace coinfeed {

// Bob proposes the partition each round. The state encodes the full public
// history (every position so far), so adapting to Eve's past choices is the
// default. Implementations are pure functions of the game state (plus
// construction parameters), so they are safe to share across games and
// usable inside tree search.
class BobStrategy {
 public:
  virtual ~BobStrategy() = default;
  virtual Partition next_partition(const GameState& state) const = 0;
  virtual std::string name() const = 0;

  // True iff the partition depends on the state only through the rank
  // structure (never raw coin ids). Gates multiset memoization in the oracle.
  virtual bool relabeling_equivariant() const { return false; }

  // Fast path for callers that already maintain the rank order; must agree
  // with next_partition. The simulator uses it every round.
  virtual Partition next_partition_ranked(const GameState& state, const RankView&) const {
    return next_partition(state);
  }
};

// Rank-parity split: coins with odd rank (1-based, ties by ascending id) form
// side 0, even ranks side 1.
Partition sw_partition(const GameState& state);
Partition sw_partition_from_view(const RankView& view);

class SwBob final : public BobStrategy {
 public:
  Partition next_partition(const GameState& state) const override { return sw_partition(state); }
  Partition next_partition_ranked(const GameState&, const RankView& view) const override {
    return sw_partition_from_view(view);
  }
  std::string name() const override { return "sw"; }
  bool relabeling_equivariant() const override { return true; }
};

// Replays a fixed partition sequence; round t gets the t-th entry.
class ScriptedBob final : public BobStrategy {
 public:
  explicit ScriptedBob(std::vector<Partition> script) : script_(std::move(script)) {}
  static ScriptedBob from_trace(const GameTrace& trace);

  Partition next_partition(const GameState& state) const override;
  std::string name() const override { return "script"; }

 private:
  std::vector<Partition> script_;
};

// Seeded coin-by-coin random split. The round-t partition is a pure function
// of (seed, t), so replay and backtracking enumeration both see the same
// partitions.
class RandomBob final : public BobStrategy {
 public:
  explicit RandomBob(std::uint64_t seed) : seed_(seed) {}

  Partition next_partition(const GameState& state) const override;
  std::string name() const override { return "random:" + std::to_string(seed_); }

 private:
  std::uint64_t seed_;
};

// Parses "sw", "random:<seed>", "script:<path>".
std::unique_ptr<BobStrategy> make_bob(const std::string& name);

}  // namespace coinfeed
