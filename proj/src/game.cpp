#include "coinfeed/game.hpp"

#include <algorithm>
#include <numeric>

namespace coinfeed {

GameState apply_round(const GameState& state, const Partition& p, int choice) {
  if (state.finished()) fail("game-already-finished", "all rounds already played");
  if (static_cast<int>(p.side.size()) != state.config.coins)
    fail("partition-length-mismatch", "partition covers " + std::to_string(p.side.size()) +
                                          " coins, game has " + std::to_string(state.config.coins));
  if (choice != 0 && choice != 1) fail("invalid-config", "choice must be 0 or 1");

  GameState next = state;
  next.completed += 1;
  for (int x = 0; x < state.config.coins; ++x) {
    if (p.side[static_cast<std::size_t>(x)] == choice) next.positions[static_cast<std::size_t>(x)] += 1;
  }
  return next;
}

RankView rank_view(const GameState& state) {
  RankView view;
  view.order.resize(static_cast<std::size_t>(state.config.coins));
  std::iota(view.order.begin(), view.order.end(), 0);
  std::sort(view.order.begin(), view.order.end(), [&](int a, int b) {
    const std::int64_t pa = state.positions[static_cast<std::size_t>(a)];
    const std::int64_t pb = state.positions[static_cast<std::size_t>(b)];
    if (pa != pb) return pa < pb;
    return a < b;
  });
  view.posc.resize(view.order.size());
  for (std::size_t i = 0; i < view.order.size(); ++i)
    view.posc[i] = state.positions[static_cast<std::size_t>(view.order[i])];
  return view;
}

Winner evaluate(const GameState& state, int ell, const Ratio& r) {
  if (!state.finished()) fail("game-not-finished", "evaluate requires t = n");
  const std::int64_t threshold = board_threshold(r, state.config.rounds);
  int on_board = 0;
  for (std::int64_t p : state.positions) on_board += (p <= threshold);
  return on_board >= ell + 1 ? Winner::Eve : Winner::Bob;
}

std::vector<int> surviving_list(const GameState& state, const Ratio& r) {
  const std::int64_t threshold = board_threshold(r, state.config.rounds);
  std::vector<int> out;
  for (int x = 0; x < state.config.coins; ++x)
    if (state.positions[static_cast<std::size_t>(x)] <= threshold) out.push_back(x);
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    const std::int64_t pa = state.positions[static_cast<std::size_t>(a)];
    const std::int64_t pb = state.positions[static_cast<std::size_t>(b)];
    if (pa != pb) return pa < pb;
    return a < b;
  });
  return out;
}

}  // namespace coinfeed
