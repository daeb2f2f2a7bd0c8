#include "coinfeed/trace.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace coinfeed {

using nlohmann::json;

namespace {

ParityChoice classify_parity(const GameState& before, const Partition& p, int choice) {
  const RankView view = rank_view(before);
  // side label of every odd rank must agree, same for even ranks, and the
  // two classes must sit on opposite sides for this to be a parity round.
  int odd_side = -1, even_side = -1;
  for (std::size_t i = 0; i < view.order.size(); ++i) {
    const int label = p.side[static_cast<std::size_t>(view.order[i])];
    const bool odd_rank = (i % 2 == 0);  // rank i+1
    int& slot = odd_rank ? odd_side : even_side;
    if (slot == -1) {
      slot = label;
    } else if (slot != label) {
      return ParityChoice::Other;
    }
  }
  if (odd_side == even_side) return ParityChoice::Other;
  return choice == odd_side ? ParityChoice::Odd : ParityChoice::Even;
}

}  // namespace

void rebuild_derived_rows(GameTrace& trace) {
  if (!trace.has_partitions() || !trace.has_snapshots())
    fail("trace-not-recorded", "id-level data required to rebuild derived rows");
  trace.posc_rows.clear();
  trace.parity.clear();
  GameState state = GameState::initial(trace.config);
  auto push_posc = [&](const GameState& s) {
    std::vector<std::int64_t> row = s.positions;
    std::sort(row.begin(), row.end());
    trace.posc_rows.push_back(std::move(row));
  };
  push_posc(state);
  for (std::size_t t = 0; t < trace.choices.size(); ++t) {
    trace.parity.push_back(classify_parity(state, trace.partitions[t], trace.choices[t]));
    state = apply_round(state, trace.partitions[t], trace.choices[t]);
    if (state.positions != trace.snapshots[t + 1])
      fail("trace-inconsistent", "snapshot " + std::to_string(t + 1) + " does not follow from partition/choice");
    push_posc(state);
  }
}

void write_trace_jsonl(const GameTrace& trace, std::ostream& out) {
  if (!trace.has_partitions())
    fail("trace-not-recorded", "trace was recorded without partitions; cannot serialize");
  json header;
  header["K"] = trace.config.coins;
  header["n"] = trace.config.rounds;
  out << header.dump() << '\n';
  for (std::size_t t = 0; t < trace.choices.size(); ++t) {
    json rec;
    rec["t"] = static_cast<std::int64_t>(t + 1);
    rec["choice"] = static_cast<int>(trace.choices[t]);
    rec["side"] = trace.partitions[t].side;
    rec["posc"] = trace.posc_rows[t + 1];
    out << rec.dump() << '\n';
  }
}

void write_trace_jsonl(const GameTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("io-error", "cannot open " + path + " for writing");
  write_trace_jsonl(trace, out);
}

GameTrace read_trace_jsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail("trace-parse", "empty trace file");
  json header = json::parse(line);
  GameTrace trace;
  trace.config.coins = header.at("K").get<int>();
  trace.config.rounds = header.at("n").get<std::int64_t>();
  trace.config.validate();

  GameState state = GameState::initial(trace.config);
  trace.snapshots.push_back(state.positions);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line);
    Partition p;
    p.side = rec.at("side").get<std::vector<std::uint8_t>>();
    const int choice = rec.at("choice").get<int>();
    state = apply_round(state, p, choice);
    trace.partitions.push_back(std::move(p));
    trace.choices.push_back(static_cast<std::uint8_t>(choice));
    trace.snapshots.push_back(state.positions);
    if (rec.contains("posc")) {
      auto claimed = rec.at("posc").get<std::vector<std::int64_t>>();
      std::vector<std::int64_t> actual = state.positions;
      std::sort(actual.begin(), actual.end());
      if (claimed != actual) fail("trace-inconsistent", "posc mismatch at t=" + std::to_string(state.completed));
    }
  }
  if (trace.round_count() != trace.config.rounds)
    fail("trace-parse", "trace has " + std::to_string(trace.round_count()) + " rounds, header says " +
                            std::to_string(trace.config.rounds));
  rebuild_derived_rows(trace);
  return trace;
}

GameTrace read_trace_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("io-error", "cannot open " + path);
  return read_trace_jsonl(in);
}

}  // namespace coinfeed
