#pragma once

#include "coinfeed/bob.hpp"
#include "coinfeed/eve.hpp"
#include "coinfeed/trace.hpp"

namespace coinfeed {

struct SimOptions {
  bool record_partitions = true;
  bool record_snapshots = true;
};

struct SimResult {
  GameTrace trace;
  GameState final_state;
};

// Plays all n rounds of bob vs eve. The sorted rank order is maintained
// incrementally (split into moved/unmoved runs, bump, merge), so a round
// costs O(K) instead of a fresh sort.
SimResult run_game(const GameConfig& cfg, const BobStrategy& bob, EveStrategy& eve,
                   const SimOptions& options = {});

// Replays an explicit Eve choice sequence (bit i = choice of round i) against
// bob; used by the exhaustive suites and oracle witness replay.
SimResult run_choice_sequence(const GameConfig& cfg, const BobStrategy& bob,
                              const std::vector<std::uint8_t>& choices, const SimOptions& options = {});

}  // namespace coinfeed
