#pragma once

#include <cstdint>
#include <vector>

#include "coinfeed/errors.hpp"
#include "coinfeed/ratio.hpp"

namespace coinfeed {

// Rounds are capped so that a full position sum always fits in 64 bits.
inline constexpr std::int64_t kMaxRounds = std::int64_t{1} << 40;

struct GameConfig {
  int coins = 0;           // K
  std::int64_t rounds = 0; // n

  void validate() const {
    if (coins < 2) fail("invalid-config", "need at least 2 coins");
    if (rounds < 1) fail("invalid-config", "need at least 1 round");
    if (rounds > kMaxRounds) fail("invalid-config", "round count exceeds 2^40");
  }
};

// A two-set split of the coins: side[x] is the side label of coin x.
// Empty sides are legal (a wasted round).
struct Partition {
  std::vector<std::uint8_t> side;

  int size_of(int label) const {
    int count = 0;
    for (std::uint8_t s : side) count += (s == label);
    return count;
  }
};

// Positions of all coins after `completed` of `config.rounds` rounds.
// Plain value type: round application copies, never mutates.
struct GameState {
  GameConfig config;
  std::int64_t completed = 0;          // t
  std::vector<std::int64_t> positions; // positions[x] = pos_t(x)

  static GameState initial(GameConfig cfg) {
    cfg.validate();
    GameState s;
    s.config = cfg;
    s.positions.assign(static_cast<std::size_t>(cfg.coins), 0);
    return s;
  }

  bool finished() const { return completed == config.rounds; }
};

// Coins sorted ascending by (position, id). order[i] is the coin of rank i+1,
// posc[i] its position. All public reporting of ranks is 1-based.
struct RankView {
  std::vector<int> order;
  std::vector<std::int64_t> posc;
};

enum class Winner { Eve, Bob };

GameState apply_round(const GameState& state, const Partition& p, int choice);
RankView rank_view(const GameState& state);

// floor(r*n): the highest position that still counts as "on the board".
inline std::int64_t board_threshold(const Ratio& r, std::int64_t n) { return r.floor_mul(n); }

// Eve wins iff at least ell+1 coins sit at or below floor(r*n) after round n.
Winner evaluate(const GameState& state, int ell, const Ratio& r);

// Coin ids with position <= floor(r*n), ordered ascending by (position, id).
// Usable mid-game.
std::vector<int> surviving_list(const GameState& state, const Ratio& r);

}  // namespace coinfeed
