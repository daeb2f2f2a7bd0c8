#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coinfeed/game.hpp"

namespace coinfeed {

// Eve's choice classified against the rank-parity split of the round it was
// made in: did the chosen set equal the odd-rank coins, the even-rank coins,
// or neither? Monitors for the rank-parity claims key off this.
enum class ParityChoice : std::int8_t { Odd = 0, Even = 1, Other = -1 };

// Full round-by-round record of one game. posc_rows (sorted positions, one row
// per round boundary) is always present; the id-level data (partitions and
// by-id snapshots) can be skipped for very large games where only rank
// statistics are needed. Serialization requires the id-level data.
struct GameTrace {
  GameConfig config;
  std::vector<std::uint8_t> choices;                    // per round
  std::vector<ParityChoice> parity;                     // per round
  std::vector<Partition> partitions;                    // per round, may be empty
  std::vector<std::vector<std::int64_t>> snapshots;     // by coin id, rounds+1, may be empty
  std::vector<std::vector<std::int64_t>> posc_rows;     // sorted, rounds+1

  std::int64_t round_count() const { return static_cast<std::int64_t>(choices.size()); }
  bool has_partitions() const { return !partitions.empty(); }
  bool has_snapshots() const { return !snapshots.empty(); }

  // posc_t(i), 1-based rank.
  std::int64_t posc(std::int64_t t, int rank) const {
    return posc_rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(rank - 1)];
  }
};

// JSON-lines: header {"K":..,"n":..} then one record per round
// {"t":..,"choice":0|1,"side":[..],"posc":[..]} with posc sorted ascending.
void write_trace_jsonl(const GameTrace& trace, std::ostream& out);
void write_trace_jsonl(const GameTrace& trace, const std::string& path);
GameTrace read_trace_jsonl(std::istream& in);
GameTrace read_trace_jsonl_file(const std::string& path);

// Recomputes parity labels and posc rows from id-level data; used by the
// loader and by tests that hand-forge traces.
void rebuild_derived_rows(GameTrace& trace);

}  // namespace coinfeed
