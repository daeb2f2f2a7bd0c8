#include "coinfeed/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <limits>
#include <mutex>
#include <unordered_map>

#include "coinfeed/simulate.hpp"

namespace coinfeed {

namespace {

constexpr int kNaiveGuardLog2 = 26;

std::int64_t objective(const std::vector<std::int64_t>& positions, int posc_index) {
  std::vector<std::int64_t> sorted = positions;
  std::sort(sorted.begin(), sorted.end());
  return sorted[static_cast<std::size_t>(posc_index - 1)];
}

bool better(std::int64_t candidate, std::int64_t best, Direction dir) {
  return dir == Direction::Min ? candidate < best : candidate > best;
}

std::int64_t worst_value(Direction dir) {
  return dir == Direction::Min ? std::numeric_limits<std::int64_t>::max()
                               : std::numeric_limits<std::int64_t>::min();
}

// --- naive enumeration ------------------------------------------------------

struct NaiveSearch {
  const BobStrategy& bob;
  int posc_index;
  Direction dir;
  std::uint64_t nodes = 0;
  std::int64_t best;
  std::vector<std::uint8_t> prefix;
  std::vector<std::uint8_t> best_seq;

  void dfs(const GameState& state) {
    ++nodes;
    if (state.finished()) {
      const std::int64_t v = objective(state.positions, posc_index);
      // strict improvement keeps the lexicographically first optimum
      if (better(v, best, dir)) {
        best = v;
        best_seq = prefix;
      }
      return;
    }
    const Partition p = bob.next_partition(state);
    for (int c = 0; c < 2; ++c) {
      prefix.push_back(static_cast<std::uint8_t>(c));
      dfs(apply_round(state, p, c));
      prefix.pop_back();
    }
  }
};

// --- memoized enumeration ---------------------------------------------------

// Key: rounds played followed by the sorted position multiset. Sound only
// when Bob's partition commutes with order-preserving relabeling, in which
// case the canonical state (i-th lowest position on coin i) is a faithful
// representative of every state sharing the multiset.
struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& key) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::int64_t v : key) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

class MemoTable {
 public:
  bool lookup(const std::vector<std::int64_t>& key, std::int64_t& value) const {
    const Shard& shard = shards_[KeyHash{}(key) % kShards];
    std::lock_guard<std::mutex> lock(shard.mutex);
    auto it = shard.map.find(key);
    if (it == shard.map.end()) return false;
    value = it->second;
    return true;
  }

  void store(const std::vector<std::int64_t>& key, std::int64_t value) {
    Shard& shard = shards_[KeyHash{}(key) % kShards];
    std::lock_guard<std::mutex> lock(shard.mutex);
    shard.map.emplace(key, value);
  }

  std::uint64_t size() const {
    std::uint64_t total = 0;
    for (const Shard& shard : shards_) {
      std::lock_guard<std::mutex> lock(shard.mutex);
      total += shard.map.size();
    }
    return total;
  }

 private:
  static constexpr std::size_t kShards = 64;
  struct Shard {
    mutable std::mutex mutex;
    std::unordered_map<std::vector<std::int64_t>, std::int64_t, KeyHash> map;
  };
  Shard shards_[kShards];
};

GameState canonical_state(const GameConfig& cfg, std::int64_t t, const std::vector<std::int64_t>& multiset) {
  GameState s;
  s.config = cfg;
  s.completed = t;
  s.positions = multiset;  // sorted: coin i carries the i-th lowest position
  return s;
}

std::vector<std::int64_t> make_key(std::int64_t t, const std::vector<std::int64_t>& multiset) {
  std::vector<std::int64_t> key;
  key.reserve(multiset.size() + 1);
  key.push_back(t);
  key.insert(key.end(), multiset.begin(), multiset.end());
  return key;
}

struct MemoSearch {
  const BobStrategy& bob;
  const GameConfig& cfg;
  int posc_index;
  Direction dir;
  MemoTable memo;

  std::vector<std::int64_t> child_multiset(const std::vector<std::int64_t>& multiset, const Partition& p,
                                           int choice) const {
    std::vector<std::int64_t> next = multiset;
    for (std::size_t i = 0; i < next.size(); ++i)
      if (p.side[i] == choice) next[i] += 1;
    std::sort(next.begin(), next.end());
    return next;
  }

  std::int64_t solve(std::int64_t t, const std::vector<std::int64_t>& multiset) {
    if (t == cfg.rounds) return multiset[static_cast<std::size_t>(posc_index - 1)];
    const auto key = make_key(t, multiset);
    std::int64_t cached;
    if (memo.lookup(key, cached)) return cached;
    const Partition p = bob.next_partition(canonical_state(cfg, t, multiset));
    const std::int64_t v0 = solve(t + 1, child_multiset(multiset, p, 0));
    const std::int64_t v1 = solve(t + 1, child_multiset(multiset, p, 1));
    const std::int64_t v = dir == Direction::Min ? std::min(v0, v1) : std::max(v0, v1);
    memo.store(key, v);
    return v;
  }

  // Re-derives the lexicographically first optimal choice sequence from the
  // populated table.
  std::vector<std::uint8_t> walk() {
    std::vector<std::uint8_t> seq;
    std::vector<std::int64_t> multiset(static_cast<std::size_t>(cfg.coins), 0);
    for (std::int64_t t = 0; t < cfg.rounds; ++t) {
      const std::int64_t here = solve(t, multiset);
      const Partition p = bob.next_partition(canonical_state(cfg, t, multiset));
      const auto child0 = child_multiset(multiset, p, 0);
      if (solve(t + 1, child0) == here) {
        seq.push_back(0);
        multiset = child0;
      } else {
        seq.push_back(1);
        multiset = child_multiset(multiset, p, 1);
      }
    }
    return seq;
  }
};

void parallel_warm(MemoSearch& search, int threads) {
  // Expand a shallow frontier and solve each node in its own task; the main
  // solve then runs over a warm table. Values are exact optima, so the result
  // does not depend on how the work interleaves.
  struct Node {
    std::int64_t t;
    std::vector<std::int64_t> multiset;
  };
  std::vector<Node> frontier{{0, std::vector<std::int64_t>(static_cast<std::size_t>(search.cfg.coins), 0)}};
  int depth = 0;
  while (static_cast<int>(frontier.size()) < 2 * threads && depth < search.cfg.rounds && depth < 10) {
    std::vector<Node> next;
    for (const Node& node : frontier) {
      const Partition p = search.bob.next_partition(canonical_state(search.cfg, node.t, node.multiset));
      next.push_back({node.t + 1, search.child_multiset(node.multiset, p, 0)});
      next.push_back({node.t + 1, search.child_multiset(node.multiset, p, 1)});
    }
    frontier = std::move(next);
    ++depth;
  }
  std::vector<std::future<void>> tasks;
  std::atomic<std::size_t> cursor{0};
  for (int i = 0; i < threads; ++i) {
    tasks.push_back(std::async(std::launch::async, [&]() {
      for (;;) {
        const std::size_t j = cursor.fetch_add(1);
        if (j >= frontier.size()) return;
        search.solve(frontier[j].t, frontier[j].multiset);
      }
    }));
  }
  for (auto& task : tasks) task.get();
}

OracleResult finish_result(const BobStrategy& bob, const GameConfig& cfg, int posc_index,
                           const std::string& kind, std::int64_t value, std::uint64_t nodes,
                           const std::vector<std::uint8_t>& seq) {
  OracleResult result;
  result.kind = kind;
  result.posc_index = posc_index;
  result.value = value;
  result.nodes_expanded = nodes;
  for (std::uint8_t c : seq) result.witness.push_back(c ? '1' : '0');
  result.witness_trace = run_choice_sequence(cfg, bob, seq).trace;
  return result;
}

}  // namespace

OracleResult enumerate_eve(const BobStrategy& bob, const GameConfig& cfg, int posc_index,
                           Direction direction, const OracleOptions& options) {
  cfg.validate();
  if (posc_index < 1 || posc_index > cfg.coins) fail("invalid-config", "posc index out of range");
  const std::string kind = direction == Direction::Min ? "min" : "max";

  if (options.memoize) {
    if (!options.force_memo_unchecked && !bob.relabeling_equivariant())
      fail("memo-unsound", "bob strategy '" + bob.name() + "' is not declared relabeling-equivariant");
    MemoSearch search{bob, cfg, posc_index, direction, {}};
    const int threads = std::max(1, options.threads);
    if (threads > 1) parallel_warm(search, threads);
    const std::vector<std::int64_t> root(static_cast<std::size_t>(cfg.coins), 0);
    const std::int64_t value = search.solve(0, root);
    const auto seq = search.walk();
    return finish_result(bob, cfg, posc_index, kind, value, search.memo.size(), seq);
  }

  if (cfg.rounds > kNaiveGuardLog2)
    fail("too-large", "naive enumeration capped at 2^" + std::to_string(kNaiveGuardLog2) +
                          " sequences; use memoization");
  NaiveSearch search{bob, posc_index, direction, 0, worst_value(direction), {}, {}};
  search.dfs(GameState::initial(cfg));
  return finish_result(bob, cfg, posc_index, kind, search.best, search.nodes, search.best_seq);
}

namespace {

// --- full minimax -----------------------------------------------------------

struct MinimaxSearch {
  GameConfig cfg;
  int posc_index;
  MemoTable memo;
  std::uint64_t states = 0;

  // Distinct partitions up to permuting equal-position coins: per run of
  // equal positions choose how many of its coins go to side 0. Complementary
  // assignments describe the same unordered pair; keep one of each.
  struct Group {
    std::size_t begin;
    std::size_t count;
  };

  static std::vector<Group> groups_of(const std::vector<std::int64_t>& multiset) {
    std::vector<Group> groups;
    std::size_t i = 0;
    while (i < multiset.size()) {
      std::size_t j = i;
      while (j < multiset.size() && multiset[j] == multiset[i]) ++j;
      groups.push_back({i, j - i});
      i = j;
    }
    return groups;
  }

  static bool complement_canonical(const std::vector<std::size_t>& take, const std::vector<Group>& groups) {
    // lexicographic compare against the complementary assignment
    for (std::size_t g = 0; g < take.size(); ++g) {
      const std::size_t other = groups[g].count - take[g];
      if (take[g] != other) return take[g] < other;
    }
    return true;  // self-complementary: visit once
  }

  template <typename Visit>
  static void for_each_canonical(const std::vector<Group>& groups, Visit&& visit) {
    std::vector<std::size_t> take(groups.size(), 0);
    for (;;) {
      if (complement_canonical(take, groups)) visit(take);
      std::size_t g = 0;
      while (g < groups.size()) {
        if (++take[g] <= groups[g].count) break;
        take[g] = 0;
        ++g;
      }
      if (g == groups.size()) return;
    }
  }

  static std::vector<std::int64_t> bump(const std::vector<std::int64_t>& multiset,
                                        const std::vector<Group>& groups,
                                        const std::vector<std::size_t>& take, bool side0) {
    std::vector<std::int64_t> next = multiset;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      // side 0 holds the first take[g] coins of the run
      const std::size_t from = side0 ? groups[g].begin : groups[g].begin + take[g];
      const std::size_t upto = side0 ? groups[g].begin + take[g] : groups[g].begin + groups[g].count;
      for (std::size_t i = from; i < upto; ++i) next[i] += 1;
    }
    std::sort(next.begin(), next.end());
    return next;
  }

  std::int64_t solve(std::int64_t t, const std::vector<std::int64_t>& multiset) {
    if (t == cfg.rounds) return multiset[static_cast<std::size_t>(posc_index - 1)];
    const auto key = make_key(t, multiset);
    std::int64_t cached;
    if (memo.lookup(key, cached)) return cached;
    ++states;
    const auto groups = groups_of(multiset);
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for_each_canonical(groups, [&](const std::vector<std::size_t>& take) {
      const std::int64_t v0 = solve(t + 1, bump(multiset, groups, take, true));
      const std::int64_t v1 = solve(t + 1, bump(multiset, groups, take, false));
      best = std::max(best, std::min(v0, v1));
    });
    memo.store(key, best);
    return best;
  }
};

}  // namespace

OracleResult full_minimax(const GameConfig& cfg, int posc_index) {
  cfg.validate();
  if (cfg.coins > 5 || cfg.rounds > 12) fail("too-large", "full minimax guarded to K <= 5, n <= 12");
  if (posc_index < 1 || posc_index > cfg.coins) fail("invalid-config", "posc index out of range");

  MinimaxSearch search{cfg, posc_index, {}, 0};
  std::vector<std::int64_t> multiset(static_cast<std::size_t>(cfg.coins), 0);
  const std::int64_t value = search.solve(0, multiset);

  // Witness: replay max-first partition / min-first side decisions on a real
  // id-level game so the trace is an ordinary game record.
  OracleResult result;
  result.kind = "minimax";
  result.posc_index = posc_index;
  result.value = value;
  result.nodes_expanded = search.states;
  GameState state = GameState::initial(cfg);
  GameTrace trace;
  trace.config = cfg;
  trace.snapshots.push_back(state.positions);
  for (std::int64_t t = 0; t < cfg.rounds; ++t) {
    const RankView view = rank_view(state);
    std::vector<std::int64_t> multiset_now = view.posc;
    const std::int64_t here = search.solve(t, multiset_now);
    const auto groups = MinimaxSearch::groups_of(multiset_now);
    bool placed = false;
    MinimaxSearch::for_each_canonical(groups, [&](const std::vector<std::size_t>& take) {
      if (placed) return;
      const std::int64_t v0 = search.solve(t + 1, MinimaxSearch::bump(multiset_now, groups, take, true));
      const std::int64_t v1 = search.solve(t + 1, MinimaxSearch::bump(multiset_now, groups, take, false));
      if (std::min(v0, v1) != here) return;
      placed = true;
      Partition p;
      p.side.assign(static_cast<std::size_t>(cfg.coins), 1);
      for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t i = 0; i < take[g]; ++i)
          p.side[static_cast<std::size_t>(view.order[groups[g].begin + i])] = 0;
      const int choice = v0 <= v1 ? 0 : 1;
      state = apply_round(state, p, choice);
      trace.partitions.push_back(std::move(p));
      trace.choices.push_back(static_cast<std::uint8_t>(choice));
      trace.snapshots.push_back(state.positions);
      result.witness.push_back(choice ? '1' : '0');
    });
    if (!placed) fail("internal-error", "minimax witness reconstruction lost the optimum");
  }
  rebuild_derived_rows(trace);
  result.witness_trace = std::move(trace);
  return result;
}

bool verify_memo_soundness(const BobStrategy& bob, const GameConfig& cfg, int posc_index,
                           Direction direction) {
  OracleOptions naive;
  OracleOptions memo;
  memo.memoize = true;
  memo.force_memo_unchecked = true;
  const OracleResult a = enumerate_eve(bob, cfg, posc_index, direction, naive);
  const OracleResult b = enumerate_eve(bob, cfg, posc_index, direction, memo);
  return a.value == b.value;
}

}  // namespace coinfeed
