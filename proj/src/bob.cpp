#include "coinfeed/bob.hpp"

#include <random>

namespace coinfeed {

Partition sw_partition_from_view(const RankView& view) {
  Partition p;
  p.side.assign(view.order.size(), 0);
  for (std::size_t i = 0; i < view.order.size(); ++i) {
    // rank i+1: odd ranks stay on side 0.
    p.side[static_cast<std::size_t>(view.order[i])] = static_cast<std::uint8_t>(i % 2 == 0 ? 0 : 1);
  }
  return p;
}

Partition sw_partition(const GameState& state) { return sw_partition_from_view(rank_view(state)); }

ScriptedBob ScriptedBob::from_trace(const GameTrace& trace) {
  if (!trace.has_partitions()) fail("trace-not-recorded", "trace has no partitions to script from");
  return ScriptedBob(trace.partitions);
}

Partition ScriptedBob::next_partition(const GameState& state) const {
  const auto t = static_cast<std::size_t>(state.completed);
  if (t >= script_.size())
    fail("script-exhausted", "round " + std::to_string(state.completed) + " beyond scripted " +
                                 std::to_string(script_.size()) + " partitions");
  return script_[t];
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Partition RandomBob::next_partition(const GameState& state) const {
  std::mt19937_64 gen(splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(state.completed))));
  Partition p;
  p.side.resize(state.positions.size());
  std::uint64_t word = 0;
  int bits_left = 0;
  for (auto& s : p.side) {
    if (bits_left == 0) {
      word = gen();
      bits_left = 64;
    }
    s = static_cast<std::uint8_t>(word & 1);
    word >>= 1;
    --bits_left;
  }
  return p;
}

std::unique_ptr<BobStrategy> make_bob(const std::string& name) {
  if (name == "sw") return std::make_unique<SwBob>();
  if (name.rfind("random:", 0) == 0)
    return std::make_unique<RandomBob>(std::strtoull(name.c_str() + 7, nullptr, 10));
  if (name.rfind("script:", 0) == 0)
    return std::make_unique<ScriptedBob>(ScriptedBob::from_trace(read_trace_jsonl_file(name.substr(7))));
  fail("invalid-config", "unknown bob strategy: " + name);
}

}  // namespace coinfeed
