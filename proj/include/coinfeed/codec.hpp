#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coinfeed/bob.hpp"
#include "coinfeed/eve.hpp"
#include "coinfeed/ratio.hpp"

namespace coinfeed {

// Alice's input: a k-bit value identifying one of K = 2^k coins.
struct Message {
  int bits = 0;          // k
  std::int64_t value = 0; // x, 0 <= x < 2^k

  void validate() const {
    if (bits < 1 || bits > 24) fail("invalid-config", "message length k must be in [1, 24]");
    if (value < 0 || value >= (std::int64_t{1} << bits)) fail("invalid-config", "message value out of range");
  }
};

// Decides per round whether to flip the transmitted bit. Sees the full
// public view: the round index, the partition, the bit on the wire, the
// receiver-side game state, and the received transcript so far. A flip
// returned with no budget left is an error, not a silent drop.
class ChannelAdversary {
 public:
  explicit ChannelAdversary(std::int64_t budget) : budget_(budget) {}
  virtual ~ChannelAdversary() = default;

  virtual bool flip(std::int64_t round, const Partition& p, int transmitted_bit,
                    const GameState& receiver_state, std::span<const std::uint8_t> received) = 0;
  std::int64_t budget() const { return budget_; }
  virtual std::string name() const = 0;

 private:
  std::int64_t budget_;
};

// Seeded: flips with the given probability while budget remains.
class RandomFlipAdversary final : public ChannelAdversary {
 public:
  RandomFlipAdversary(std::uint64_t seed, std::int64_t budget, double flip_probability);
  bool flip(std::int64_t round, const Partition& p, int transmitted_bit,
            const GameState& receiver_state, std::span<const std::uint8_t> received) override;
  std::string name() const override { return "randomflip"; }

 private:
  std::uint64_t seed_;
  double probability_;
  std::int64_t used_ = 0;
};

// Replays a coin-game Eve as channel noise: flip exactly when Eve's chosen
// set contains Alice's coin, i.e. when the chosen set moves in the receiver's
// game. Defaults to an unlimited budget (n) since a game strategy does not
// promise a flip budget for every message.
class EveChannelAdversary final : public ChannelAdversary {
 public:
  EveChannelAdversary(std::unique_ptr<EveStrategy> eve, std::int64_t budget);
  bool flip(std::int64_t round, const Partition& p, int transmitted_bit,
            const GameState& receiver_state, std::span<const std::uint8_t> received) override;
  std::string name() const override { return eve_->name(); }

 private:
  std::unique_ptr<EveStrategy> eve_;
};

// Flips the scripted rounds.
class ScriptedFlipAdversary final : public ChannelAdversary {
 public:
  explicit ScriptedFlipAdversary(std::vector<std::uint8_t> flips);
  bool flip(std::int64_t round, const Partition& p, int transmitted_bit,
            const GameState& receiver_state, std::span<const std::uint8_t> received) override;
  std::string name() const override { return "scriptedflip"; }

 private:
  std::vector<std::uint8_t> flips_;
};

struct DecodeResult {
  bool ok = false;                // false: list-decoding failure, survivors > ell
  std::vector<int> survivors;     // ascending by (position, id)
};

struct SessionResult {
  std::vector<std::uint8_t> sent;
  std::vector<std::uint8_t> received;
  std::int64_t flips_used = 0;
  GameState final_state;
  DecodeResult decode;
};

// The bit Alice sends: the label of the partition side holding her coin.
int alice_bit(const GameState& state, const Partition& p, std::int64_t x);

// The receiver moves the set that would NOT have sent the received bit; a
// coin's position stays equal to the corruption count of its hypothesis.
GameState bob_update(const GameState& state, const Partition& p, int received_bit);

// Survivors at radius r; failure (ok = false) when more than ell remain.
DecodeResult decode_list(const GameState& state, int ell, const Ratio& r);

// Runs all n rounds of the feedback session and decodes. Asserts the
// corruption identity pos_n(x) == flips used.
SessionResult run_session(int k, std::int64_t n, const BobStrategy& bob, ChannelAdversary& adversary,
                          std::int64_t x, int ell, const Ratio& r);

// Parses "randomflip:<p>" (p in [0,1]), "swattack:<q>", "greedy",
// "random:<seed>", ... — any Eve name becomes a replayed-game adversary.
std::unique_ptr<ChannelAdversary> make_adversary(const std::string& name, const GameConfig& cfg,
                                                 const Ratio& r, std::uint64_t seed);

}  // namespace coinfeed
