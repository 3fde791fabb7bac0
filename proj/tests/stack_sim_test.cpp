#include "tsv/stack_sim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "tsv/core_sort.hpp"
#include "tsv/prng.hpp"

namespace tsv {
namespace {

// Lengths of the maximal strictly ascending stretches of `a`.
std::vector<RunLength> ascending_runs(const std::vector<Element>& a) {
  std::vector<RunLength> out;
  std::size_t i = 0;
  while (i < a.size()) {
    std::size_t j = i + 1;
    while (j < a.size() && a[j - 1].key < a[j].key) ++j;
    out.push_back(j - i);
    i = j;
  }
  return out;
}

RunLenSequence random_sequence(SplitMix64& rng, std::size_t runs, RunLength u,
                               RunLength spread) {
  RunLenSequence seq{{}, u};
  for (std::size_t i = 0; i < runs; ++i) {
    seq.lengths.push_back(u + rng.below(spread));
  }
  return seq;
}

TEST(Replay, SingleRun) {
  for (CollapsePolicy p : {CollapsePolicy::fixed, CollapsePolicy::legacy}) {
    const SimTrace t = replay({{16}, 16}, {p, 0, false});
    EXPECT_EQ(t.max_depth, 1u);
    EXPECT_TRUE(t.violations.empty());
    EXPECT_EQ(t.final_stack, (std::vector<RunLength>{16}));
  }
}

TEST(Replay, ExtremalPushSequenceNeverMerges) {
  const RunLenSequence seq = extremal_push_sequence(4, 16);
  EXPECT_EQ(seq.lengths, (std::vector<RunLength>{52, 34, 17, 16}));
  const SimTrace t = replay(seq, {CollapsePolicy::fixed, 0, false});
  EXPECT_EQ(t.max_depth, 4u);
  EXPECT_TRUE(t.violations.empty());
  EXPECT_EQ(t.final_stack, worst_case_run_lengths(4, 16));

  for (std::uint64_t l = 2; l <= 39; ++l) {
    const SimTrace deep =
        replay(extremal_push_sequence(l, 16), {CollapsePolicy::fixed, 0, false});
    EXPECT_EQ(deep.max_depth, l);
    EXPECT_EQ(deep.final_stack.size(), l);
    EXPECT_TRUE(deep.violations.empty()) << l;
  }
}

TEST(Replay, ReversedExtremalOrderCollapses) {
  const SimTrace t =
      replay({{16, 17, 34, 52}, 16}, {CollapsePolicy::fixed, 0, false});
  EXPECT_LE(t.max_depth, 4u);
  EXPECT_LT(t.final_stack.size(), 4u);
}

TEST(Replay, FixedPolicyHasNoViolations) {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 3000; ++trial) {
    const RunLength u = rng.below(2) ? 16 : 1 + rng.below(4);
    const RunLenSequence seq =
        random_sequence(rng, 1 + rng.below(60), u, 1 + rng.below(200));
    const SimTrace t = replay(seq, {CollapsePolicy::fixed, 0, false});
    ASSERT_TRUE(t.violations.empty())
        << format_sequence(seq.lengths) << ": " << t.violations[0].detail;
  }
}

TEST(Replay, FixedDepthStaysWithinSafeBound) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::uint64_t l = 2 + rng.below(8);
    const RunLength u = 1 + rng.below(16);
    const std::uint64_t bound = safe_bound(l, u);
    RunLenSequence seq{{}, u};
    RunLength sum = 0;
    while (true) {
      const RunLength len = u + rng.below(3 * u + 5);
      if (sum + len > bound) break;
      seq.lengths.push_back(len);
      sum += len;
    }
    if (seq.lengths.empty()) continue;
    const SimTrace t = replay(seq, {CollapsePolicy::fixed, l, false});
    EXPECT_LE(t.max_depth, l) << format_sequence(seq.lengths);
    EXPECT_TRUE(t.violations.empty());
  }
}

TEST(Replay, ConservesTotalLength) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    for (CollapsePolicy p : {CollapsePolicy::fixed, CollapsePolicy::legacy}) {
      const RunLenSequence seq = random_sequence(rng, 1 + rng.below(30), 1, 50);
      const SimTrace t = replay(seq, {p, 0, true});
      const RunLength expect =
          std::accumulate(seq.lengths.begin(), seq.lengths.end(), RunLength{0});
      EXPECT_EQ(std::accumulate(t.final_stack.begin(), t.final_stack.end(),
                                RunLength{0}),
                expect);
      EXPECT_EQ(t.states.size(), 2 * seq.lengths.size());
    }
  }
}

TEST(Replay, PoliciesAgreeOnShortSequences) {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const RunLenSequence seq = random_sequence(rng, 1 + rng.below(3), 1, 100);
    const SimTrace f = replay(seq, {CollapsePolicy::fixed, 0, true});
    const SimTrace l = replay(seq, {CollapsePolicy::legacy, 0, true});
    EXPECT_EQ(f.states, l.states);
  }
}

TEST(Replay, OverflowIsRecordedAndReplayContinues) {
  const SimTrace t = replay({{52, 34, 17, 16}, 16}, {CollapsePolicy::fixed, 3, false});
  ASSERT_EQ(t.violations.size(), 1u);
  EXPECT_EQ(t.violations[0].clause, Clause::overflow);
  EXPECT_EQ(t.violations[0].step, 3u);
  EXPECT_EQ(t.max_depth, 4u);
}

TEST(Replay, RejectsZeroLength) {
  EXPECT_THROW(replay({{16, 0}, 1}, {}), std::invalid_argument);
}

TEST(Replay, AgreesWithConcreteSort) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    RunLenSequence seq = random_sequence(rng, 2 + rng.below(40), 16,
                                         rng.below(2) ? 20 : 400);
    auto a = sequence_to_array(seq, trial);
    std::vector<std::vector<RunLength>> observed;
    SortOptions opts;
    opts.check_invariants = trial % 10 == 0;
    opts.observer = [&](StackEvent e, const RunStack& s) {
      if (e == StackEvent::force_collapse) return;
      const auto live = s.live_lengths();
      observed.emplace_back(live.begin(), live.end());
    };
    timsort(a, opts);
    const SimTrace t = replay(seq, {CollapsePolicy::fixed, 0, true});
    EXPECT_EQ(observed, t.states) << format_sequence(seq.lengths);
  }
}

TEST(Replay, LegacyAbstractAgreesWithLegacySort) {
  const RunLenSequence seq{{32, 64, 128, 160, 48, 32, 64}, 16};
  auto a = sequence_to_array(seq, 0);
  std::vector<std::vector<RunLength>> observed;
  SortOptions opts;
  opts.policy = CollapsePolicy::legacy;
  opts.observer = [&](StackEvent e, const RunStack& s) {
    if (e == StackEvent::force_collapse) return;
    const auto live = s.live_lengths();
    observed.emplace_back(live.begin(), live.end());
  };
  timsort(a, opts);
  const SimTrace t = replay(seq, {CollapsePolicy::legacy, 0, true});
  EXPECT_EQ(observed, t.states);
  EXPECT_FALSE(t.violations.empty());
}

TEST(Search, LegacyFindsElemInvViolation) {
  SearchOptions o;
  o.policy = CollapsePolicy::legacy;
  o.max_runs = 20;
  o.min_run = 1;
  const SearchResult r = search_breaking_sequence(o);
  ASSERT_TRUE(r.found.has_value());
  const SimTrace legacy = replay(*r.found, {CollapsePolicy::legacy, 0, false});
  const auto it = std::find_if(
      legacy.violations.begin(), legacy.violations.end(),
      [](const SimViolation& v) { return v.clause == Clause::elem_inv; });
  ASSERT_NE(it, legacy.violations.end());
  // The broken triple sits at least three runs below the top.
  ASSERT_TRUE(it->position.has_value());
  EXPECT_TRUE(replay(*r.found, {CollapsePolicy::fixed, 0, false}).violations.empty());
}

TEST(Search, LegacyHitScalesToMinRunSixteen) {
  SearchOptions o;
  o.policy = CollapsePolicy::legacy;
  o.max_runs = 20;
  const SearchResult r = search_breaking_sequence(o);
  ASSERT_TRUE(r.found.has_value());
  RunLenSequence scaled{{}, 16};
  for (RunLength x : r.found->lengths) scaled.lengths.push_back(16 * x);
  EXPECT_FALSE(replay(scaled, {CollapsePolicy::legacy, 0, false}).violations.empty());
  EXPECT_TRUE(replay(scaled, {CollapsePolicy::fixed, 0, false}).violations.empty());
}

TEST(Search, FixedFindsNothingInExhaustedSpace) {
  SearchOptions o;
  o.policy = CollapsePolicy::fixed;
  o.max_runs = 6;
  o.min_run = 1;
  o.budget = 50'000'000;
  const SearchResult r = search_breaking_sequence(o);
  EXPECT_FALSE(r.found.has_value());
  EXPECT_TRUE(r.exhausted);
}

TEST(Search, FixedMaxRunsTwelveFindsNothing) {
  SearchOptions o;
  o.policy = CollapsePolicy::fixed;
  o.max_runs = 12;
  o.min_run = 1;
  const SearchResult r = search_breaking_sequence(o);
  EXPECT_FALSE(r.found.has_value());
  EXPECT_EQ(r.nodes, o.budget);
}

TEST(Search, ZeroBudgetFindsNothing) {
  SearchOptions o;
  o.budget = 0;
  const SearchResult r = search_breaking_sequence(o);
  EXPECT_FALSE(r.found.has_value());
  EXPECT_FALSE(r.exhausted);
  EXPECT_EQ(r.nodes, 0u);
}

TEST(Search, IsDeterministic) {
  SearchOptions o;
  o.max_runs = 20;
  const SearchResult a = search_breaking_sequence(o);
  const SearchResult b = search_breaking_sequence(o);
  EXPECT_EQ(a.found, b.found);
  EXPECT_EQ(a.nodes, b.nodes);
}

TEST(SequenceToArray, Examples) {
  const auto three = sequence_to_array({{3}, 1}, 0);
  ASSERT_EQ(three.size(), 3u);
  EXPECT_LT(three[0].key, three[1].key);
  EXPECT_LT(three[1].key, three[2].key);

  const auto two_two = sequence_to_array({{2, 2}, 1}, 0);
  std::vector<std::int64_t> keys;
  for (const auto& e : two_two) keys.push_back(e.key);
  EXPECT_EQ(keys, (std::vector<std::int64_t>{0, 1, 0, 1}));
}

TEST(SequenceToArray, RunDetectionRoundTrip) {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const RunLenSequence seq = random_sequence(rng, 1 + rng.below(30), 16, 300);
    const auto a = sequence_to_array(seq, rng.next());
    EXPECT_EQ(ascending_runs(a), seq.lengths);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].tag, i);

    // The sort's own run detection sees the same boundaries.
    auto b = a;
    std::size_t lo = 0;
    for (RunLength len : seq.lengths) {
      EXPECT_EQ(count_run_and_make_ascending(b, lo, b.size()), len);
      lo += len;
    }
  }
}

TEST(SequenceToArray, SeedOnlyShiftsKeys) {
  const RunLenSequence seq{{20, 17, 40}, 16};
  const auto a = sequence_to_array(seq, 0);
  const auto b = sequence_to_array(seq, 12345);
  ASSERT_EQ(a.size(), b.size());
  const std::int64_t shift = b[0].key - a[0].key;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(b[i].key - a[i].key, shift);
  EXPECT_EQ(sequence_to_array(seq, 12345), b);
}

TEST(SequenceFormat, RoundTrip) {
  const std::vector<RunLength> v{52, 34, 17, 16};
  EXPECT_EQ(format_sequence(v), "52,34,17,16");
  EXPECT_EQ(parse_sequence("52,34,17,16"), v);
  EXPECT_EQ(parse_sequence("  52,34,17,16\n"), v);
  EXPECT_TRUE(parse_sequence("").empty());
}

TEST(SequenceFormat, RejectsMalformed) {
  for (const char* bad : {"0", "1,,2", "1,a", "-3", "1, 2", "18446744073709551616",
                          ","}) {
    EXPECT_THROW(parse_sequence(bad), std::invalid_argument) << bad;
  }
}

TEST(ModelCapacity, MatchesTableForSixteen) {
  for (RunLength n : {1ull, 119ull, 120ull, 1541ull, 1542ull, 119150ull}) {
    EXPECT_EQ(model_capacity(n, 16), required_stack_capacity(n));
  }
  EXPECT_EQ(model_capacity(14, 1), 4u);
  EXPECT_EQ(model_capacity(15, 1), 5u);
}

}  // namespace
}  // namespace tsv
