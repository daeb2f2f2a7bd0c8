#include "coinfeed/codec.hpp"

#include <random>

#include "coinfeed/oracle.hpp"
#include "coinfeed/simulate.hpp"
#include "doctest.h"

using namespace coinfeed;

TEST_CASE("alice sends her coin's side label") {
  const GameState zeros = GameState::initial({4, 8});
  const Partition p = sw_partition(zeros);
  CHECK(alice_bit(zeros, p, 0) == 0);  // odd rank by tie-break
  CHECK(alice_bit(zeros, p, 1) == 1);
}

TEST_CASE("receiver update tracks corruption counts") {
  GameState state = GameState::initial({4, 8});
  const Partition p = sw_partition(state);
  const std::int64_t x = 2;
  const int sent = alice_bit(state, p, x);

  SUBCASE("clean round leaves x in place") {
    state = bob_update(state, p, sent);
    CHECK(state.positions[2] == 0);
  }
  SUBCASE("flipped round moves x by one") {
    state = bob_update(state, p, 1 - sent);
    CHECK(state.positions[2] == 1);
  }
}

TEST_CASE("sessions with scripted noise") {
  SwBob bob;
  SUBCASE("no flips: x decodes at any radius") {
    ScriptedFlipAdversary quiet(std::vector<std::uint8_t>(3, 0));
    const SessionResult s = run_session(2, 3, bob, quiet, 1, 2, Ratio(0, 1));
    CHECK(s.flips_used == 0);
    CHECK(s.final_state.positions[1] == 0);
    REQUIRE(s.decode.ok);
    CHECK(std::count(s.decode.survivors.begin(), s.decode.survivors.end(), 1) == 1);
  }
  SUBCASE("every round flipped") {
    ScriptedFlipAdversary loud(std::vector<std::uint8_t>(3, 1));
    const SessionResult s = run_session(2, 3, bob, loud, 1, 2, Ratio(1, 1));
    CHECK(s.flips_used == 3);
    CHECK(s.final_state.positions[1] == 3);
  }
}

TEST_CASE("budget is enforced, not silently clamped") {
  SwBob bob;
  // greedy Eve flips whenever Alice's coin sits on the chosen side; budget 0
  // makes the first such flip an error
  EveChannelAdversary adversary(std::make_unique<GreedyEve>(), 0);
  bool threw = false;
  for (std::int64_t x = 0; x < 4 && !threw; ++x) {
    try {
      static_cast<void>(run_session(2, 6, bob, adversary, x, 1, Ratio(1, 3)));
    } catch (const GameError& e) {
      threw = std::string(e.code()) == "budget-exceeded";
    }
  }
  CHECK(threw);
}

TEST_CASE("decode failure carries the whole survivor set") {
  GameState state = GameState::initial({8, 4});
  SwBob bob;
  GreedyEve eve;
  while (!state.finished()) {
    const Partition p = bob.next_partition(state);
    state = apply_round(state, p, eve.choose(state, p));
  }
  const DecodeResult r = decode_list(state, 2, Ratio(1, 2));
  CHECK_FALSE(r.ok);
  CHECK(r.survivors.size() > 2);
  CHECK_THROWS_WITH_AS(static_cast<void>(decode_list(GameState::initial({4, 4}), 2, Ratio(1, 2))),
                       doctest::Contains("game-not-finished"), GameError);
}

TEST_CASE("corruption identity on random sessions") {
  std::mt19937_64 gen(99);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 1 + static_cast<int>(gen() % 6);
    const std::int64_t n = 1 + static_cast<std::int64_t>(gen() % 60);
    const std::int64_t x = static_cast<std::int64_t>(gen() % (1ull << k));
    const Ratio r(static_cast<std::int64_t>(gen() % 5), 4);  // up to 1
    std::unique_ptr<BobStrategy> bob;
    if (gen() & 1)
      bob = std::make_unique<SwBob>();
    else
      bob = std::make_unique<RandomBob>(gen());
    RandomFlipAdversary adversary(gen(), board_threshold(r, n), 0.4);
    const SessionResult s = run_session(k, n, *bob, adversary, x, 1, r);
    REQUIRE(s.final_state.positions[static_cast<std::size_t>(x)] == s.flips_used);
    // completeness: within budget, x always survives
    REQUIRE(std::count(s.decode.survivors.begin(), s.decode.survivors.end(), static_cast<int>(x)) == 1);
  }
}

TEST_CASE("channel replay equals the bare coin game") {
  const std::int64_t q = 2;
  const GameConfig cfg{16, 67 * q};
  SwBob bob;
  SwAttackSchedule bare_eve(q);
  const SimResult bare = run_game(cfg, bob, bare_eve);

  EveChannelAdversary adversary(std::make_unique<SwAttackSchedule>(q), cfg.rounds);
  const SessionResult session = run_session(4, cfg.rounds, bob, adversary, 0, 3, Ratio(31, 67));
  CHECK(session.final_state.positions == bare.final_state.positions);
}

TEST_CASE("oracle witness replayed as channel noise") {
  SwBob bob;
  OracleOptions memo;
  memo.memoize = true;
  const OracleResult oracle = enumerate_eve(bob, {8, 21}, 3, Direction::Min, memo);
  const auto bare_survivors = surviving_list(oracle.witness_trace.snapshots.empty()
                                                 ? GameState{}
                                                 : GameState{{8, 21}, 21, oracle.witness_trace.snapshots.back()},
                                             Ratio(3, 7));

  std::vector<std::uint8_t> choices;
  for (char c : oracle.witness) choices.push_back(c == '1');
  EveChannelAdversary adversary(std::make_unique<ScriptedEve>(choices), 21);
  const SessionResult session = run_session(3, 21, bob, adversary, bare_survivors.front(), 2, Ratio(3, 7));
  CHECK(session.final_state.positions == oracle.witness_trace.snapshots.back());
  CHECK(session.decode.survivors.size() == bare_survivors.size());
}

TEST_CASE("adversary factory") {
  const GameConfig cfg{16, 134};
  CHECK(make_adversary("randomflip:0.3", cfg, Ratio(1, 3), 7)->budget() == 44);
  CHECK(make_adversary("swattack:2", cfg, Ratio(31, 67), 7)->budget() == cfg.rounds);
  CHECK_THROWS_AS(static_cast<void>(make_adversary("bogus", cfg, Ratio(1, 3), 7)), GameError);
}
