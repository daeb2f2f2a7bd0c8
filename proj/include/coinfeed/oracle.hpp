#pragma once

#include <cstdint>
#include <string>

#include "coinfeed/bob.hpp"
#include "coinfeed/trace.hpp"

namespace coinfeed {

enum class Direction { Min, Max };

struct OracleOptions {
  bool memoize = false;
  // Skips the relabeling-equivariance gate; only verify_memo_soundness and
  // tests probing memo validity should set this.
  bool force_memo_unchecked = false;
  int threads = 1;
};

struct OracleResult {
  std::string kind;       // "min", "max", or "minimax"
  int posc_index = 0;     // 1-based objective rank
  std::int64_t value = 0;
  std::uint64_t nodes_expanded = 0;
  std::string witness;    // Eve's choices, one '0'/'1' per round
  GameTrace witness_trace;
};

// Exact optimum of posc_n(i) over all 2^n Eve choice sequences against a
// fixed Bob. Without memoization the instance is capped at 2^n <= 2^26 nodes;
// with memoization states are collapsed on the (t, position-multiset) key,
// which is only sound for relabeling-equivariant Bobs.
OracleResult enumerate_eve(const BobStrategy& bob, const GameConfig& cfg, int posc_index,
                           Direction direction, const OracleOptions& options = {});

// Exact value with Bob maximizing posc_n(i) (choosing partitions) and Eve
// minimizing (choosing sides). Partition branching is canonicalized over the
// position multiset. Guarded to K <= 5, n <= 12.
OracleResult full_minimax(const GameConfig& cfg, int posc_index);

// True iff memoized and naive enumerate_eve agree on this instance. Runs the
// memoized pass without the equivariance gate.
bool verify_memo_soundness(const BobStrategy& bob, const GameConfig& cfg, int posc_index,
                           Direction direction = Direction::Min);

}  // namespace coinfeed
