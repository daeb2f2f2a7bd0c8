#include "coinfeed/codec.hpp"

#include <random>

namespace coinfeed {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomFlipAdversary::RandomFlipAdversary(std::uint64_t seed, std::int64_t budget, double flip_probability)
    : ChannelAdversary(budget), seed_(seed), probability_(flip_probability) {
  if (flip_probability < 0 || flip_probability > 1) fail("invalid-config", "flip probability outside [0,1]");
}

bool RandomFlipAdversary::flip(std::int64_t round, const Partition&, int, const GameState&,
                               std::span<const std::uint8_t>) {
  if (used_ >= budget()) return false;
  std::mt19937_64 gen(splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(round) + 0xF11Bu)));
  const double draw = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
  if (draw >= probability_) return false;
  ++used_;
  return true;
}

EveChannelAdversary::EveChannelAdversary(std::unique_ptr<EveStrategy> eve, std::int64_t budget)
    : ChannelAdversary(budget), eve_(std::move(eve)) {}

bool EveChannelAdversary::flip(std::int64_t, const Partition& p, int transmitted_bit,
                               const GameState& receiver_state, std::span<const std::uint8_t>) {
  // Eve's chosen set is the one that moves; the receiver moves side
  // 1 - received, so delivering received = 1 - chosen realizes her choice.
  const int chosen = eve_->choose(receiver_state, p);
  return transmitted_bit != 1 - chosen;
}

ScriptedFlipAdversary::ScriptedFlipAdversary(std::vector<std::uint8_t> flips)
    : ChannelAdversary(static_cast<std::int64_t>(flips.size())), flips_(std::move(flips)) {}

bool ScriptedFlipAdversary::flip(std::int64_t round, const Partition&, int, const GameState&,
                                 std::span<const std::uint8_t>) {
  if (round >= static_cast<std::int64_t>(flips_.size())) return false;
  return flips_[static_cast<std::size_t>(round)] != 0;
}

int alice_bit(const GameState&, const Partition& p, std::int64_t x) {
  if (x < 0 || x >= static_cast<std::int64_t>(p.side.size())) fail("invalid-config", "message coin out of range");
  return p.side[static_cast<std::size_t>(x)];
}

GameState bob_update(const GameState& state, const Partition& p, int received_bit) {
  return apply_round(state, p, 1 - received_bit);
}

DecodeResult decode_list(const GameState& state, int ell, const Ratio& r) {
  if (!state.finished()) fail("game-not-finished", "decoding requires t = n");
  DecodeResult result;
  result.survivors = surviving_list(state, r);
  result.ok = static_cast<int>(result.survivors.size()) <= ell;
  return result;
}

SessionResult run_session(int k, std::int64_t n, const BobStrategy& bob, ChannelAdversary& adversary,
                          std::int64_t x, int ell, const Ratio& r) {
  Message msg{k, x};
  msg.validate();
  if (r.num > r.den) fail("invalid-config", "radius must lie in [0, 1]");
  GameConfig cfg{1 << k, n};
  cfg.validate();

  SessionResult session;
  GameState state = GameState::initial(cfg);
  std::int64_t flips = 0;
  for (std::int64_t t = 0; t < n; ++t) {
    const Partition p = bob.next_partition(state);
    const int sent = alice_bit(state, p, x);
    int received = sent;
    if (adversary.flip(t, p, sent, state, session.received)) {
      ++flips;
      if (flips > adversary.budget())
        fail("budget-exceeded", "adversary attempted flip " + std::to_string(flips) + " with budget " +
                                    std::to_string(adversary.budget()));
      received = 1 - sent;
    }
    session.sent.push_back(static_cast<std::uint8_t>(sent));
    session.received.push_back(static_cast<std::uint8_t>(received));
    state = bob_update(state, p, received);
  }
  session.flips_used = flips;
  if (state.positions[static_cast<std::size_t>(x)] != flips)
    fail("internal-error", "corruption identity violated: pos_n(x) != flips");
  session.decode = decode_list(state, ell, r);
  session.final_state = std::move(state);
  return session;
}

std::unique_ptr<ChannelAdversary> make_adversary(const std::string& name, const GameConfig& cfg,
                                                 const Ratio& r, std::uint64_t seed) {
  if (name.rfind("randomflip:", 0) == 0) {
    const double p = std::strtod(name.c_str() + 11, nullptr);
    return std::make_unique<RandomFlipAdversary>(seed, board_threshold(r, cfg.rounds), p);
  }
  return std::make_unique<EveChannelAdversary>(make_eve(name, cfg), cfg.rounds);
}

}  // namespace coinfeed
