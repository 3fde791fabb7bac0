#include "tsv/core_sort.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <vector>

#include "test_util.hpp"
#include "tsv/harness.hpp"
#include "tsv/prng.hpp"

namespace tsv {
namespace {

using test::elems;
using test::for_each_array;
using test::keys_of;
using test::tags_of;

// ---- oracles -------------------------------------------------------------

std::size_t linear_left(std::int64_t key, const std::vector<Element>& a,
                        std::size_t base, std::size_t len) {
  std::size_t k = 0;
  while (k < len && a[base + k].key < key) ++k;
  return k;
}

std::size_t linear_right(std::int64_t key, const std::vector<Element>& a,
                         std::size_t base, std::size_t len) {
  std::size_t k = 0;
  while (k < len && a[base + k].key <= key) ++k;
  return k;
}

// take n dst ++ take l (drop m src) ++ drop (n + l) dst, spelled out.
std::vector<Element> list_copy(const std::vector<Element>& dst, std::size_t n,
                               const std::vector<Element>& src, std::size_t m,
                               std::size_t l) {
  std::vector<Element> out(dst.begin(), dst.begin() + n);
  out.insert(out.end(), src.begin() + m, src.begin() + m + l);
  out.insert(out.end(), dst.begin() + n + l, dst.end());
  return out;
}

std::vector<Element> stable_merge(const std::vector<Element>& r1,
                                  const std::vector<Element>& r2) {
  std::vector<Element> out;
  std::merge(r1.begin(), r1.end(), r2.begin(), r2.end(), std::back_inserter(out),
             [](const Element& x, const Element& y) { return x.key < y.key; });
  return out;
}

std::vector<Element> random_sorted(SplitMix64& rng, std::size_t len,
                                   std::uint64_t alphabet, std::uint64_t tag0) {
  std::vector<Element> out(len);
  for (auto& e : out) e.key = static_cast<std::int64_t>(rng.below(alphabet));
  std::sort(out.begin(), out.end(),
            [](const Element& x, const Element& y) { return x.key < y.key; });
  for (std::size_t i = 0; i < len; ++i) out[i].tag = tag0 + i;
  return out;
}

// ---- timsort -------------------------------------------------------------

TEST(Timsort, Empty) {
  std::vector<Element> a;
  const SortStats s = timsort(a);
  EXPECT_TRUE(a.empty());
  EXPECT_EQ(s.max_stack_depth, 0u);
}

TEST(Timsort, StableOnFourElements) {
  std::vector<Element> a{{5, 0}, {3, 1}, {3, 2}, {1, 3}};
  timsort(a);
  EXPECT_EQ(keys_of(a), (std::vector<std::int64_t>{1, 3, 3, 5}));
  EXPECT_EQ(tags_of(a), (std::vector<std::uint64_t>{3, 1, 2, 0}));
}

TEST(Timsort, MatchesReferenceOnRandomArrays) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (std::uint64_t alphabet : {0ull, 4ull, 1000ull}) {
      GenSpec spec;
      spec.n = 10000;
      spec.seed = seed;
      spec.alphabet = alphabet;
      const auto input = generate(spec);
      auto out = input;
      const SortStats s = timsort(out);
      EXPECT_EQ(out, reference_sort(input));
      EXPECT_LE(s.max_stack_depth, s.stack_capacity);
    }
  }
}

TEST(Timsort, CheckedSortMatchesUncheckedSort) {
  for (GenKind kind : kAllGenKinds) {
    GenSpec spec;
    spec.kind = kind;
    spec.n = 3000;
    spec.seed = 11;
    auto plain = generate(spec);
    auto checked = plain;
    const SortStats a = timsort(plain);
    SortOptions opts;
    opts.check_invariants = true;
    const SortStats b = timsort(checked, opts);
    EXPECT_EQ(plain, checked);
    EXPECT_EQ(a.comparisons, b.comparisons);
    EXPECT_EQ(a.max_stack_depth, b.max_stack_depth);
    EXPECT_GT(b.contract_checks, 0u);
  }
}

TEST(Timsort, EveryLengthUpToTwoHundred) {
  SplitMix64 rng(3);
  for (std::size_t n = 0; n <= 200; ++n) {
    std::vector<Element> a(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = {static_cast<std::int64_t>(rng.below(7)), i};
    }
    const auto expected = reference_sort(a);
    SortOptions opts;
    opts.check_invariants = true;
    timsort(a, opts);
    EXPECT_EQ(a, expected) << n;
  }
}

TEST(Timsort, ExtremalInputReachesFullDepth) {
  GenSpec spec;
  spec.kind = GenKind::worst_case;
  spec.depth = 9;
  auto a = generate(spec);
  ASSERT_EQ(a.size(), safe_bound(9, 16));
  SortOptions opts;
  opts.check_invariants = true;
  const SortStats s = timsort(a, opts);
  EXPECT_EQ(s.stack_capacity, 9u);
  EXPECT_EQ(s.max_stack_depth, 9u);
}

// ---- count_run_and_make_ascending -----------------------------------------

TEST(CountRun, Examples) {
  auto one = elems({7});
  EXPECT_EQ(count_run_and_make_ascending(one, 0, 1), 1u);

  auto desc = elems({5, 4, 3, 9});
  EXPECT_EQ(count_run_and_make_ascending(desc, 0, 4), 3u);
  EXPECT_EQ(keys_of(desc), (std::vector<std::int64_t>{3, 4, 5, 9}));

  auto flat = elems({2, 2, 1});
  EXPECT_EQ(count_run_and_make_ascending(flat, 0, 3), 2u);
  EXPECT_EQ(flat, elems({2, 2, 1}));
}

TEST(CountRun, MaximalRunExhaustive) {
  for (std::size_t len = 1; len <= 8; ++len) {
    for_each_array(len, 3, [&](const std::vector<std::int64_t>& keys) {
      auto a = elems(keys);
      const std::size_t r = count_run_and_make_ascending(a, 0, len);
      ASSERT_GE(r, 1u);
      // Oracle: longest strictly descending or nondescending prefix.
      std::size_t expect = 1;
      const bool descending = len > 1 && keys[1] < keys[0];
      while (expect < len && (descending ? keys[expect] < keys[expect - 1]
                                         : keys[expect] >= keys[expect - 1])) {
        ++expect;
      }
      EXPECT_EQ(r, expect);
      for (std::size_t i = 1; i < r; ++i) EXPECT_LE(a[i - 1].key, a[i].key);
      auto rest = elems(keys);
      if (descending) std::reverse(rest.begin(), rest.begin() + r);
      EXPECT_EQ(a, rest);
    });
  }
}

TEST(CountRun, RejectsEmptyRange) {
  auto a = elems({1, 2});
  EXPECT_THROW(count_run_and_make_ascending(a, 1, 1), std::out_of_range);
  EXPECT_THROW(count_run_and_make_ascending(a, 0, 3), std::out_of_range);
}

// ---- reverse_range --------------------------------------------------------

TEST(ReverseRange, Examples) {
  auto a = elems({1, 2, 3});
  reverse_range(a, 0, 0);
  EXPECT_EQ(keys_of(a), (std::vector<std::int64_t>{1, 2, 3}));
  reverse_range(a, 0, 3);
  EXPECT_EQ(keys_of(a), (std::vector<std::int64_t>{3, 2, 1}));
  auto b = elems({9, 5, 4, 9});
  reverse_range(b, 1, 3);
  EXPECT_EQ(keys_of(b), (std::vector<std::int64_t>{9, 4, 5, 9}));
}

// ---- binary_sort ----------------------------------------------------------

TEST(BinarySort, Examples) {
  auto a = elems({3, 1, 2});
  binary_sort(a, 0, 3, 3);
  EXPECT_EQ(a, elems({3, 1, 2}));
  binary_sort(a, 0, 3, 1);
  EXPECT_EQ(keys_of(a), (std::vector<std::int64_t>{1, 2, 3}));

  auto b = elems({2, 2, 1});
  binary_sort(b, 0, 3, 2);
  EXPECT_EQ(keys_of(b), (std::vector<std::int64_t>{1, 2, 2}));
  EXPECT_EQ(tags_of(b), (std::vector<std::uint64_t>{2, 0, 1}));
}

TEST(BinarySort, ExhaustiveSmallWindows) {
  for (std::size_t len = 0; len <= 9; ++len) {
    for_each_array(len, 3, [&](const std::vector<std::int64_t>& keys) {
      auto a = elems(keys);
      std::size_t start = 0;
      while (start + 1 < len && a[start].key <= a[start + 1].key) ++start;
      start = len == 0 ? 0 : start + 1;
      binary_sort(a, 0, len, start);
      EXPECT_EQ(a, reference_sort(elems(keys)));
    });
  }
}

TEST(BinarySort, SampledWindowsUpToThirtyTwo) {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t len = 1 + rng.below(32);
    std::vector<std::int64_t> keys(len + 4);
    for (auto& k : keys) k = static_cast<std::int64_t>(rng.below(3));
    const std::size_t lo = 2;
    const std::size_t hi = lo + len;
    auto a = elems(keys);
    const std::size_t start = lo + 1;
    const auto before = a;
    binary_sort(a, lo, hi, start);
    std::vector<Element> window(before.begin() + lo, before.begin() + hi);
    const auto expected = reference_sort(window);
    EXPECT_TRUE(std::equal(expected.begin(), expected.end(), a.begin() + lo));
    EXPECT_TRUE(std::equal(a.begin(), a.begin() + lo, before.begin()));
    EXPECT_TRUE(std::equal(a.begin() + hi, a.end(), before.begin() + hi));
  }
}

// ---- array_copy -----------------------------------------------------------

TEST(ArrayCopy, Examples) {
  auto dst = elems({0, 0, 0, 0});
  const auto before = dst;
  array_copy(dst, 1, elems({7, 8, 9}), 0, 0);
  EXPECT_EQ(dst, before);
  array_copy(dst, 1, std::vector<Element>{{7, 0}, {8, 0}, {9, 0}}, 1, 2);
  EXPECT_EQ(keys_of(dst), (std::vector<std::int64_t>{0, 8, 9, 0}));
}

TEST(ArrayCopy, ExhaustiveAgainstListCopy) {
  for (std::size_t dlen = 0; dlen <= 5; ++dlen) {
    for (std::size_t slen = 0; slen <= 5; ++slen) {
      std::vector<Element> dst(dlen), src(slen);
      for (std::size_t i = 0; i < dlen; ++i) dst[i] = {100 + static_cast<std::int64_t>(i), i};
      for (std::size_t i = 0; i < slen; ++i) src[i] = {200 + static_cast<std::int64_t>(i), i};
      for (std::size_t n = 0; n <= dlen; ++n) {
        for (std::size_t m = 0; m <= slen; ++m) {
          for (std::size_t l = 0; n + l <= dlen && m + l <= slen; ++l) {
            auto got = dst;
            array_copy(got, n, src, m, l);
            EXPECT_EQ(got, list_copy(dst, n, src, m, l));
            EXPECT_EQ(got.size(), dst.size());
          }
        }
      }
    }
  }
}

TEST(ArrayCopy, OverlappingWithinOneBuffer) {
  for (std::size_t len = 0; len <= 8; ++len) {
    std::vector<Element> base(len);
    for (std::size_t i = 0; i < len; ++i) base[i] = {static_cast<std::int64_t>(i), i};
    for (std::size_t n = 0; n <= len; ++n) {
      for (std::size_t m = 0; m <= len; ++m) {
        for (std::size_t l = 0; n + l <= len && m + l <= len; ++l) {
          auto a = base;
          array_copy(a, n, a, m, l);
          EXPECT_EQ(a, list_copy(base, n, base, m, l));
        }
      }
    }
  }
}

TEST(ArrayCopy, OutOfBoundsThrows) {
  auto dst = elems({0, 0});
  const auto src = elems({1, 2});
  EXPECT_THROW(array_copy(dst, 1, src, 0, 2), std::out_of_range);
  EXPECT_THROW(array_copy(dst, 0, src, 1, 2), std::out_of_range);
  EXPECT_THROW(array_copy(dst, 3, src, 0, 0), std::out_of_range);
}

// ---- gallop ---------------------------------------------------------------

TEST(Gallop, Examples) {
  const auto a = elems({1, 3, 5, 5, 7});
  EXPECT_EQ(gallop_left({5, 0}, a, 0, 5, 0), 2u);
  EXPECT_EQ(gallop_right({5, 0}, a, 0, 5, 0), 4u);
  const auto b = elems({1, 3, 5});
  EXPECT_EQ(gallop_left({0, 0}, b, 0, 3, 1), 0u);
  EXPECT_EQ(gallop_left({9, 0}, b, 0, 3, 2), 3u);
  EXPECT_EQ(gallop_right({0, 0}, b, 0, 3, 0), 0u);
}

TEST(Gallop, ExhaustiveSmallArrays) {
  for (std::size_t len = 1; len <= 8; ++len) {
    for_each_array(len, 4, [&](const std::vector<std::int64_t>& keys) {
      if (!std::is_sorted(keys.begin(), keys.end())) return;
      const auto a = elems(keys);
      for (std::int64_t key = -1; key <= 4; ++key) {
        for (std::size_t hint = 0; hint < len; ++hint) {
          ASSERT_EQ(gallop_left({key, 0}, a, 0, len, hint),
                    linear_left(key, a, 0, len));
          ASSERT_EQ(gallop_right({key, 0}, a, 0, len, hint),
                    linear_right(key, a, 0, len));
        }
      }
    });
  }
}

TEST(Gallop, SampledArraysUpToSixtyFour) {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t len = 1 + rng.below(64);
    const std::size_t base = rng.below(4);
    std::vector<Element> a(base + len + 3, Element{-50, 0});
    const auto run = random_sorted(rng, len, 1 + rng.below(6), 0);
    std::copy(run.begin(), run.end(), a.begin() + base);
    for (std::int64_t key = -1; key <= 7; ++key) {
      for (std::size_t hint = 0; hint < len; ++hint) {
        ASSERT_EQ(gallop_left({key, 0}, a, base, len, hint),
                  linear_left(key, a, base, len));
        ASSERT_EQ(gallop_right({key, 0}, a, base, len, hint),
                  linear_right(key, a, base, len));
      }
    }
  }
}

TEST(Gallop, RejectsBadHint) {
  const auto a = elems({1, 2, 3});
  EXPECT_ANY_THROW(gallop_left({1, 0}, a, 0, 3, 3));
  EXPECT_ANY_THROW(gallop_right({1, 0}, a, 0, 0, 0));
  EXPECT_ANY_THROW(gallop_right({1, 0}, a, 2, 3, 0));
}

// ---- merge_lo / merge_hi --------------------------------------------------

// Two adjacent runs at [pad, pad + |r1|) and after it, with `pad` sentinel
// elements on each side so writes outside the window are detectable.
struct MergeCase {
  std::vector<Element> buffer;
  std::size_t base1, len1, base2, len2;
};

MergeCase make_case(const std::vector<Element>& r1, const std::vector<Element>& r2,
                    std::size_t pad) {
  MergeCase c;
  for (std::size_t i = 0; i < pad; ++i) c.buffer.push_back({-99, 900 + i});
  c.buffer.insert(c.buffer.end(), r1.begin(), r1.end());
  c.buffer.insert(c.buffer.end(), r2.begin(), r2.end());
  for (std::size_t i = 0; i < pad; ++i) c.buffer.push_back({99, 950 + i});
  c.base1 = pad;
  c.len1 = r1.size();
  c.base2 = pad + r1.size();
  c.len2 = r2.size();
  return c;
}

using MergeFn = void (*)(SortState&, std::size_t, std::size_t, std::size_t,
                         std::size_t);

void expect_merges(MergeFn fn, const std::vector<Element>& r1,
                   const std::vector<Element>& r2) {
  MergeCase c = make_case(r1, r2, 3);
  const auto before = c.buffer;
  SortState st(c.buffer, false);
  fn(st, c.base1, c.len1, c.base2, c.len2);
  const auto merged = stable_merge(r1, r2);
  ASSERT_TRUE(std::equal(merged.begin(), merged.end(), c.buffer.begin() + 3));
  // Frame: nothing outside the window moved, bit for bit.
  EXPECT_EQ(std::memcmp(c.buffer.data(), before.data(), 3 * sizeof(Element)), 0);
  EXPECT_EQ(std::memcmp(c.buffer.data() + c.base2 + c.len2,
                        before.data() + c.base2 + c.len2, 3 * sizeof(Element)),
            0);
  EXPECT_GE(st.min_gallop, 1u);
}

// The trimmed-run conditions merge_at establishes before calling either merge.
bool trimmed(const std::vector<Element>& r1, const std::vector<Element>& r2) {
  return !r1.empty() && !r2.empty() && r2.front().key < r1.front().key &&
         r1.back().key > r2.back().key;
}

TEST(MergeLo, Examples) {
  expect_merges(merge_lo, {{2, 0}, {4, 1}}, {{1, 2}, {3, 3}});
}

TEST(MergeHi, Examples) {
  expect_merges(merge_hi, {{2, 0}, {4, 1}, {6, 2}}, {{1, 3}, {3, 4}});
}

TEST(MergeAtWindow, RunOneWinsTies) {
  // Through merge_at, which trims the runs before choosing a merge.
  // Runs this short are below the checked invariant's floor, so no checker.
  std::vector<Element> a{{2, 0}, {2, 1}, {1, 2}, {2, 3}};
  SortState st(a, false);
  st.stack.run_base[0] = 0;
  st.stack.run_len[0] = 2;
  st.stack.run_base[1] = 2;
  st.stack.run_len[1] = 2;
  st.stack.stack_size = 2;
  merge_at(st, 0);
  EXPECT_EQ(keys_of(a), (std::vector<std::int64_t>{1, 2, 2, 2}));
  EXPECT_EQ(tags_of(a), (std::vector<std::uint64_t>{2, 0, 1, 3}));
}

TEST(MergeLoHi, RandomRunsAgreeWithOracleAndKeepFrame) {
  SplitMix64 rng(21);
  int cases = 0;
  while (cases < 4000) {
    const std::size_t len1 = 1 + rng.below(rng.below(2) ? 12 : 200);
    const std::size_t len2 = 1 + rng.below(rng.below(2) ? 12 : 200);
    const std::uint64_t alphabet = 2 + rng.below(rng.below(2) ? 4 : 500);
    const auto r1 = random_sorted(rng, len1, alphabet, 0);
    const auto r2 = random_sorted(rng, len2, alphabet, len1);
    if (!trimmed(r1, r2)) continue;
    ++cases;
    expect_merges(merge_lo, r1, r2);
    expect_merges(merge_hi, r1, r2);
  }
}

TEST(MergeLoHi, GallopingHeavyInputs) {
  // Long interleaved blocks drive both merges deep into galloping mode.
  SplitMix64 rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Element> r1, r2;
    std::int64_t key = 0;
    const std::size_t blocks = 2 + rng.below(10);
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t n1 = rng.below(40), n2 = rng.below(40);
      for (std::size_t i = 0; i < n1; ++i) r1.push_back({key++, r1.size()});
      for (std::size_t i = 0; i < n2; ++i) r2.push_back({key++, 1000 + r2.size()});
    }
    r2.insert(r2.begin(), Element{-1, 999});
    r1.push_back({key + 1, r1.size()});
    expect_merges(merge_lo, r1, r2);
    expect_merges(merge_hi, r1, r2);
  }
}

TEST(MergeLo, RejectsNonAdjacentRuns) {
  auto a = elems({2, 4, 1, 3});
  SortState st(a, false);
  EXPECT_THROW(merge_lo(st, 0, 2, 3, 1), std::invalid_argument);
  EXPECT_THROW(merge_hi(st, 0, 0, 0, 4), std::invalid_argument);
}

}  // namespace
}  // namespace tsv
