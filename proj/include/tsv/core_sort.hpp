#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tsv/element.hpp"
#include "tsv/run_stack.hpp"

namespace tsv {

/// Key comparison with an optional comparison counter.
struct KeyLess {
  std::uint64_t* counter = nullptr;

  bool operator()(const Element& a, const Element& b) const {
    if (counter != nullptr) ++*counter;
    return a.key < b.key;
  }
};

enum class StackEvent { push, collapse, force_collapse };

/// Called with the stack after every push_run and after every collapse.
using StackObserver = std::function<void(StackEvent, const RunStack&)>;

struct SortOptions {
  /// Check every stack-procedure contract and the merge frame condition at
  /// runtime; a failure throws InvariantViolation.
  bool check_invariants = false;
  /// Collapse loop used after each push. Only `fixed` is correct.
  CollapsePolicy policy = CollapsePolicy::fixed;
  StackObserver observer;
};

struct SortStats {
  std::size_t stack_capacity = 0;
  std::size_t max_stack_depth = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t merges = 0;
  std::uint64_t contract_checks = 0;
};

/// Everything one sort invocation mutates. Confined to a single thread.
class SortState {
 public:
  SortState(std::span<Element> buffer, bool checker_enabled);

  std::span<Element> buffer;
  RunStack stack;
  std::size_t min_gallop = kInitialMinGallop;
  bool checker_enabled = false;
  SortStats stats;
  StackObserver observer;

  KeyLess less() { return KeyLess{&stats.comparisons}; }

  // Copy of the buffer as of the last checkpoint, used to check that a merge
  // writes only inside its window. Populated only when the checker is on.
  std::vector<Element> shadow;
  void sync_shadow(std::size_t lo, std::size_t hi);
};

/// Stable in-place sort by key.
SortStats timsort(std::span<Element> a, const SortOptions& options = {});

/// Length of the run starting at lo. A strictly descending run is reversed
/// in place; a nondescending one is left alone. Requires lo < hi <= size.
std::size_t count_run_and_make_ascending(std::span<Element> a, std::size_t lo,
                                         std::size_t hi, KeyLess less = {});

void reverse_range(std::span<Element> a, std::size_t lo, std::size_t hi);

/// Binary insertion sort of a[lo, hi) given that a[lo, start) is sorted.
void binary_sort(std::span<Element> a, std::size_t lo, std::size_t hi,
                 std::size_t start, KeyLess less = {});

/// dst becomes take(n, dst) ++ take(l, drop(m, src)) ++ drop(n + l, dst),
/// evaluated on the pre-call contents even when dst and src overlap.
/// Throws std::out_of_range unless n + l <= |dst| and m + l <= |src|.
void array_copy(std::span<Element> dst, std::size_t n,
                std::span<const Element> src, std::size_t m, std::size_t l);

/// Leftmost k in [0, len] with a[base+k-1] < key <= a[base+k]; equal keys
/// in the window land to the right of k. Requires hint < len.
std::size_t gallop_left(const Element& key, std::span<const Element> a,
                        std::size_t base, std::size_t len, std::size_t hint,
                        KeyLess less = {});

/// Rightmost k in [0, len] with a[base+k-1] <= key < a[base+k]; equal keys
/// in the window land to the left of k.
std::size_t gallop_right(const Element& key, std::span<const Element> a,
                         std::size_t base, std::size_t len, std::size_t hint,
                         KeyLess less = {});

/// Stable merge of adjacent runs, buffering the shorter first run.
/// Requires base1 + len1 == base2, len1 <= len2, and the trimmed-run
/// conditions established by merge_at.
void merge_lo(SortState& state, std::size_t base1, std::size_t len1,
              std::size_t base2, std::size_t len2);

/// As merge_lo, but buffers the second run and merges from the high end.
void merge_hi(SortState& state, std::size_t base1, std::size_t len1,
              std::size_t base2, std::size_t len2);

}  // namespace tsv
