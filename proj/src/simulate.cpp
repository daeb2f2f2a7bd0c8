#include "coinfeed/simulate.hpp"

#include <algorithm>

namespace coinfeed {

namespace {

// Incrementally sorted game: order/posc always reflect the current positions.
// Moving a subset preserves the relative (position, id) order inside both the
// moved and unmoved subsequences, so one merge restores global order.
class SortedGame {
 public:
  explicit SortedGame(const GameConfig& cfg) : state_(GameState::initial(cfg)) {
    view_.order.resize(static_cast<std::size_t>(cfg.coins));
    for (int i = 0; i < cfg.coins; ++i) view_.order[static_cast<std::size_t>(i)] = i;
    view_.posc.assign(static_cast<std::size_t>(cfg.coins), 0);
  }

  const GameState& state() const { return state_; }
  const RankView& view() const { return view_; }

  ParityChoice parity_of(const Partition& p, int choice) const {
    int odd_label = -1, even_label = -1;
    for (std::size_t i = 0; i < view_.order.size(); ++i) {
      const int label = p.side[static_cast<std::size_t>(view_.order[i])];
      int& slot = (i % 2 == 0) ? odd_label : even_label;
      if (slot == -1)
        slot = label;
      else if (slot != label)
        return ParityChoice::Other;
    }
    if (odd_label == even_label) return ParityChoice::Other;
    return choice == odd_label ? ParityChoice::Odd : ParityChoice::Even;
  }

  void play(const Partition& p, int choice) {
    if (state_.finished()) fail("game-already-finished", "all rounds already played");
    if (p.side.size() != state_.positions.size())
      fail("partition-length-mismatch", "partition size mismatch");
    const std::size_t k = view_.order.size();
    moved_ids_.clear();
    moved_pos_.clear();
    kept_ids_.clear();
    kept_pos_.clear();
    for (std::size_t i = 0; i < k; ++i) {
      const int id = view_.order[i];
      const std::int64_t pos = view_.posc[i];
      if (p.side[static_cast<std::size_t>(id)] == choice) {
        moved_ids_.push_back(id);
        moved_pos_.push_back(pos + 1);
        state_.positions[static_cast<std::size_t>(id)] = pos + 1;
      } else {
        kept_ids_.push_back(id);
        kept_pos_.push_back(pos);
      }
    }
    std::size_t a = 0, b = 0, w = 0;
    while (a < kept_ids_.size() && b < moved_ids_.size()) {
      const bool kept_first = kept_pos_[a] < moved_pos_[b] ||
                              (kept_pos_[a] == moved_pos_[b] && kept_ids_[a] < moved_ids_[b]);
      if (kept_first) {
        view_.order[w] = kept_ids_[a];
        view_.posc[w] = kept_pos_[a];
        ++a;
      } else {
        view_.order[w] = moved_ids_[b];
        view_.posc[w] = moved_pos_[b];
        ++b;
      }
      ++w;
    }
    for (; a < kept_ids_.size(); ++a, ++w) {
      view_.order[w] = kept_ids_[a];
      view_.posc[w] = kept_pos_[a];
    }
    for (; b < moved_ids_.size(); ++b, ++w) {
      view_.order[w] = moved_ids_[b];
      view_.posc[w] = moved_pos_[b];
    }
    state_.completed += 1;
  }

 private:
  GameState state_;
  RankView view_;
  std::vector<int> moved_ids_, kept_ids_;
  std::vector<std::int64_t> moved_pos_, kept_pos_;
};

SimResult run_loop(const GameConfig& cfg, const BobStrategy* bob,
                   const std::vector<Partition>* scripted, EveStrategy* eve,
                   const std::vector<std::uint8_t>* choices, const SimOptions& options) {
  cfg.validate();
  SortedGame game(cfg);
  SimResult result;
  result.trace.config = cfg;
  result.trace.posc_rows.reserve(static_cast<std::size_t>(cfg.rounds) + 1);
  result.trace.posc_rows.push_back(game.view().posc);
  if (options.record_snapshots) result.trace.snapshots.push_back(game.state().positions);
  for (std::int64_t t = 0; t < cfg.rounds; ++t) {
    Partition p = scripted ? (*scripted)[static_cast<std::size_t>(t)]
                           : bob->next_partition_ranked(game.state(), game.view());
    const int choice = choices ? (*choices)[static_cast<std::size_t>(t)] : eve->choose(game.state(), p);
    result.trace.parity.push_back(game.parity_of(p, choice));
    game.play(p, choice);
    result.trace.choices.push_back(static_cast<std::uint8_t>(choice));
    result.trace.posc_rows.push_back(game.view().posc);
    if (options.record_snapshots) result.trace.snapshots.push_back(game.state().positions);
    if (options.record_partitions) result.trace.partitions.push_back(std::move(p));
  }
  result.final_state = game.state();
  return result;
}

}  // namespace

SimResult run_game(const GameConfig& cfg, const BobStrategy& bob, EveStrategy& eve,
                   const SimOptions& options) {
  return run_loop(cfg, &bob, nullptr, &eve, nullptr, options);
}

SimResult run_choice_sequence(const GameConfig& cfg, const BobStrategy& bob,
                              const std::vector<std::uint8_t>& choices, const SimOptions& options) {
  if (static_cast<std::int64_t>(choices.size()) != cfg.rounds)
    fail("invalid-config", "choice sequence length must equal the round count");
  return run_loop(cfg, &bob, nullptr, nullptr, &choices, options);
}

}  // namespace coinfeed
