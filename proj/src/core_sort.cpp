#include "tsv/core_sort.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsv {
namespace {

using Index = std::ptrdiff_t;

void require_range(std::size_t lo, std::size_t hi, std::size_t size,
                   const char* what) {
  if (lo > hi || hi > size) {
    throw std::out_of_range(std::string(what) + ": range [" +
                            std::to_string(lo) + ", " + std::to_string(hi) +
                            ") outside array of length " +
                            std::to_string(size));
  }
}

}  // namespace

SortState::SortState(std::span<Element> buf, bool checker)
    : buffer(buf),
      stack(new_run_stack(buf.size())),
      checker_enabled(checker) {
  stats.stack_capacity = stack.capacity();
  if (checker_enabled) shadow.assign(buffer.begin(), buffer.end());
}

void SortState::sync_shadow(std::size_t lo, std::size_t hi) {
  if (!checker_enabled) return;
  std::copy(buffer.begin() + lo, buffer.begin() + hi, shadow.begin() + lo);
}

void reverse_range(std::span<Element> a, std::size_t lo, std::size_t hi) {
  require_range(lo, hi, a.size(), "reverse_range");
  std::reverse(a.begin() + lo, a.begin() + hi);
}

std::size_t count_run_and_make_ascending(std::span<Element> a, std::size_t lo,
                                         std::size_t hi, KeyLess less) {
  require_range(lo, hi, a.size(), "count_run_and_make_ascending");
  if (lo == hi) throw std::out_of_range("count_run_and_make_ascending: empty range");
  std::size_t run_hi = lo + 1;
  if (run_hi == hi) return 1;

  if (less(a[run_hi++], a[lo])) {
    // Strictly descending only; an equal pair would be reordered by reversal.
    while (run_hi < hi && less(a[run_hi], a[run_hi - 1])) ++run_hi;
    reverse_range(a, lo, run_hi);
  } else {
    while (run_hi < hi && !less(a[run_hi], a[run_hi - 1])) ++run_hi;
  }
  return run_hi - lo;
}

void binary_sort(std::span<Element> a, std::size_t lo, std::size_t hi,
                 std::size_t start, KeyLess less) {
  require_range(lo, hi, a.size(), "binary_sort");
  if (start < lo || start > hi) {
    throw std::out_of_range("binary_sort: start outside [lo, hi]");
  }
  if (start == lo) ++start;
  for (; start < hi; ++start) {
    const Element pivot = a[start];
    std::size_t left = lo;
    std::size_t right = start;
    // Upper bound: the pivot goes after every element with an equal key.
    while (left < right) {
      const std::size_t mid = left + (right - left) / 2;
      if (less(pivot, a[mid])) {
        right = mid;
      } else {
        left = mid + 1;
      }
    }
    std::move_backward(a.begin() + left, a.begin() + start,
                       a.begin() + start + 1);
    a[left] = pivot;
  }
}

void array_copy(std::span<Element> dst, std::size_t n,
                std::span<const Element> src, std::size_t m, std::size_t l) {
  if (n > dst.size() || l > dst.size() - n || m > src.size() ||
      l > src.size() - m) {
    throw std::out_of_range("array_copy: copy of " + std::to_string(l) +
                            " elements from " + std::to_string(m) + " to " +
                            std::to_string(n) + " out of bounds");
  }
  if (l == 0) return;
  const Element* from = src.data() + m;
  Element* to = dst.data() + n;
  // Overlapping ranges within one buffer: copy away from the destination.
  if (to > from && to < from + l) {
    std::copy_backward(from, from + l, to + l);
  } else {
    std::copy(from, from + l, to);
  }
}

std::size_t gallop_left(const Element& key, std::span<const Element> a,
                        std::size_t base, std::size_t len, std::size_t hint,
                        KeyLess less) {
  if (len == 0 || hint >= len || base + len > a.size()) {
    throw std::out_of_range("gallop_left: bad window or hint");
  }
  const Index b = static_cast<Index>(base);
  const Index h = static_cast<Index>(hint);
  const Index n = static_cast<Index>(len);
  Index last_ofs = 0;
  Index ofs = 1;
  if (less(a[b + h], key)) {
    // Probe right until a[b+h+last_ofs] < key <= a[b+h+ofs].
    const Index max_ofs = n - h;
    while (ofs < max_ofs && less(a[b + h + ofs], key)) {
      last_ofs = ofs;
      ofs = (ofs << 1) + 1;
    }
    ofs = std::min(ofs, max_ofs);
    last_ofs += h;
    ofs += h;
  } else {
    // Probe left until a[b+h-ofs] < key <= a[b+h-last_ofs].
    const Index max_ofs = h + 1;
    while (ofs < max_ofs && !less(a[b + h - ofs], key)) {
      last_ofs = ofs;
      ofs = (ofs << 1) + 1;
    }
    ofs = std::min(ofs, max_ofs);
    const Index tmp = last_ofs;
    last_ofs = h - ofs;
    ofs = h - tmp;
  }
  // Now a[b+last_ofs] < key <= a[b+ofs]; binary search the gap.
  ++last_ofs;
  while (last_ofs < ofs) {
    const Index m = last_ofs + (ofs - last_ofs) / 2;
    if (less(a[b + m], key)) {
      last_ofs = m + 1;
    } else {
      ofs = m;
    }
  }
  return static_cast<std::size_t>(ofs);
}

std::size_t gallop_right(const Element& key, std::span<const Element> a,
                         std::size_t base, std::size_t len, std::size_t hint,
                         KeyLess less) {
  if (len == 0 || hint >= len || base + len > a.size()) {
    throw std::out_of_range("gallop_right: bad window or hint");
  }
  const Index b = static_cast<Index>(base);
  const Index h = static_cast<Index>(hint);
  const Index n = static_cast<Index>(len);
  Index last_ofs = 0;
  Index ofs = 1;
  if (less(key, a[b + h])) {
    // Probe left until a[b+h-ofs] <= key < a[b+h-last_ofs].
    const Index max_ofs = h + 1;
    while (ofs < max_ofs && less(key, a[b + h - ofs])) {
      last_ofs = ofs;
      ofs = (ofs << 1) + 1;
    }
    ofs = std::min(ofs, max_ofs);
    const Index tmp = last_ofs;
    last_ofs = h - ofs;
    ofs = h - tmp;
  } else {
    // Probe right until a[b+h+last_ofs] <= key < a[b+h+ofs].
    const Index max_ofs = n - h;
    while (ofs < max_ofs && !less(key, a[b + h + ofs])) {
      last_ofs = ofs;
      ofs = (ofs << 1) + 1;
    }
    ofs = std::min(ofs, max_ofs);
    last_ofs += h;
    ofs += h;
  }
  ++last_ofs;
  while (last_ofs < ofs) {
    const Index m = last_ofs + (ofs - last_ofs) / 2;
    if (less(key, a[b + m])) {
      ofs = m;
    } else {
      last_ofs = m + 1;
    }
  }
  return static_cast<std::size_t>(ofs);
}

void merge_lo(SortState& state, std::size_t base1, std::size_t len1,
              std::size_t base2, std::size_t len2) {
  if (len1 == 0 || len2 == 0 || base1 + len1 != base2 ||
      base2 + len2 > state.buffer.size()) {
    throw std::invalid_argument("merge_lo: runs are empty or not adjacent");
  }
  const std::span<Element> a = state.buffer;
  const KeyLess less = state.less();

  std::vector<Element> tmp(len1);
  array_copy(tmp, 0, a, base1, len1);
  std::size_t cursor1 = 0;
  std::size_t cursor2 = base2;
  std::size_t dest = base1;

  a[dest++] = a[cursor2++];
  if (--len2 == 0) {
    array_copy(a, dest, tmp, cursor1, len1);
    return;
  }
  if (len1 == 1) {
    array_copy(a, dest, a, cursor2, len2);
    a[dest + len2] = tmp[cursor1];
    return;
  }

  Index min_gallop = static_cast<Index>(state.min_gallop);
  const auto gallop_won = [](std::size_t c) { return c >= kInitialMinGallop; };
  bool done = false;
  while (!done) {
    std::size_t count1 = 0;  // consecutive wins by run 1
    std::size_t count2 = 0;  // consecutive wins by run 2

    // One element at a time until one run starts winning consistently.
    do {
      if (less(a[cursor2], tmp[cursor1])) {
        a[dest++] = a[cursor2++];
        ++count2;
        count1 = 0;
        if (--len2 == 0) { done = true; break; }
      } else {
        a[dest++] = tmp[cursor1++];
        ++count1;
        count2 = 0;
        if (--len1 == 1) { done = true; break; }
      }
    } while (static_cast<Index>(count1 | count2) < min_gallop);
    if (done) break;

    // Galloping mode.
    do {
      count1 = gallop_right(a[cursor2], tmp, cursor1, len1, 0, less);
      if (count1 != 0) {
        array_copy(a, dest, tmp, cursor1, count1);
        dest += count1;
        cursor1 += count1;
        len1 -= count1;
        if (len1 <= 1) { done = true; break; }
      }
      a[dest++] = a[cursor2++];
      if (--len2 == 0) { done = true; break; }

      count2 = gallop_left(tmp[cursor1], a, cursor2, len2, 0, less);
      if (count2 != 0) {
        array_copy(a, dest, a, cursor2, count2);
        dest += count2;
        cursor2 += count2;
        len2 -= count2;
        if (len2 == 0) { done = true; break; }
      }
      a[dest++] = tmp[cursor1++];
      if (--len1 == 1) { done = true; break; }
      --min_gallop;
    } while (gallop_won(count1) || gallop_won(count2));
    if (done) break;
    if (min_gallop < 0) min_gallop = 0;
    min_gallop += 2;  // penalty for leaving gallop mode
  }
  state.min_gallop = static_cast<std::size_t>(std::max<Index>(min_gallop, 1));

  if (len1 == 1) {
    array_copy(a, dest, a, cursor2, len2);
    a[dest + len2] = tmp[cursor1];
  } else if (len1 == 0) {
    throw InvariantViolation("merge_lo: first run exhausted early");
  } else {
    array_copy(a, dest, tmp, cursor1, len1);
  }
}

void merge_hi(SortState& state, std::size_t base1, std::size_t len1,
              std::size_t base2, std::size_t len2) {
  if (len1 == 0 || len2 == 0 || base1 + len1 != base2 ||
      base2 + len2 > state.buffer.size()) {
    throw std::invalid_argument("merge_hi: runs are empty or not adjacent");
  }
  const std::span<Element> a = state.buffer;
  const KeyLess less = state.less();

  std::vector<Element> tmp(len2);
  array_copy(tmp, 0, a, base2, len2);
  // Cursors walk downwards and may step one below their run.
  Index cursor1 = static_cast<Index>(base1 + len1) - 1;
  Index cursor2 = static_cast<Index>(len2) - 1;
  Index dest = static_cast<Index>(base2 + len2) - 1;
  const auto at = [](Index i) { return static_cast<std::size_t>(i); };

  a[at(dest--)] = a[at(cursor1--)];
  if (--len1 == 0) {
    array_copy(a, at(dest - static_cast<Index>(len2 - 1)), tmp, 0, len2);
    return;
  }
  if (len2 == 1) {
    dest -= static_cast<Index>(len1);
    cursor1 -= static_cast<Index>(len1);
    array_copy(a, at(dest + 1), a, at(cursor1 + 1), len1);
    a[at(dest)] = tmp[at(cursor2)];
    return;
  }

  Index min_gallop = static_cast<Index>(state.min_gallop);
  const auto gallop_won = [](std::size_t c) { return c >= kInitialMinGallop; };
  bool done = false;
  while (!done) {
    std::size_t count1 = 0;
    std::size_t count2 = 0;

    do {
      if (less(tmp[at(cursor2)], a[at(cursor1)])) {
        a[at(dest--)] = a[at(cursor1--)];
        ++count1;
        count2 = 0;
        if (--len1 == 0) { done = true; break; }
      } else {
        a[at(dest--)] = tmp[at(cursor2--)];
        ++count2;
        count1 = 0;
        if (--len2 == 1) { done = true; break; }
      }
    } while (static_cast<Index>(count1 | count2) < min_gallop);
    if (done) break;

    do {
      count1 = len1 - gallop_right(tmp[at(cursor2)], a, base1, len1, len1 - 1,
                                   less);
      if (count1 != 0) {
        dest -= static_cast<Index>(count1);
        cursor1 -= static_cast<Index>(count1);
        len1 -= count1;
        array_copy(a, at(dest + 1), a, at(cursor1 + 1), count1);
        if (len1 == 0) { done = true; break; }
      }
      a[at(dest--)] = tmp[at(cursor2--)];
      if (--len2 == 1) { done = true; break; }

      count2 = len2 - gallop_left(a[at(cursor1)], tmp, 0, len2, len2 - 1, less);
      if (count2 != 0) {
        dest -= static_cast<Index>(count2);
        cursor2 -= static_cast<Index>(count2);
        len2 -= count2;
        array_copy(a, at(dest + 1), tmp, at(cursor2 + 1), count2);
        if (len2 <= 1) { done = true; break; }
      }
      a[at(dest--)] = a[at(cursor1--)];
      if (--len1 == 0) { done = true; break; }
      --min_gallop;
    } while (gallop_won(count1) || gallop_won(count2));
    if (done) break;
    if (min_gallop < 0) min_gallop = 0;
    min_gallop += 2;
  }
  state.min_gallop = static_cast<std::size_t>(std::max<Index>(min_gallop, 1));

  if (len2 == 1) {
    dest -= static_cast<Index>(len1);
    cursor1 -= static_cast<Index>(len1);
    array_copy(a, at(dest + 1), a, at(cursor1 + 1), len1);
    a[at(dest)] = tmp[at(cursor2)];
  } else if (len2 == 0) {
    throw InvariantViolation("merge_hi: second run exhausted early");
  } else {
    array_copy(a, at(dest - static_cast<Index>(len2 - 1)), tmp, 0, len2);
  }
}

SortStats timsort(std::span<Element> a, const SortOptions& options) {
  const std::size_t n = a.size();
  SortStats stats;
  stats.stack_capacity = required_stack_capacity(n);
  if (n < 2) return stats;

  if (n < kMinMerge) {
    KeyLess less{&stats.comparisons};
    const std::size_t init = count_run_and_make_ascending(a, 0, n, less);
    binary_sort(a, 0, n, init, less);
    return stats;
  }

  SortState state(a, options.check_invariants);
  state.observer = options.observer;
  std::size_t lo = 0;
  std::size_t remaining = n;
  do {
    std::size_t run_len = count_run_and_make_ascending(a, lo, n, state.less());
    if (run_len < kMinRun) {
      const std::size_t force = std::min(remaining, kMinRun);
      binary_sort(a, lo, lo + force, lo + run_len, state.less());
      run_len = force;
    }
    state.sync_shadow(lo, lo + run_len);
    push_run(state, lo, run_len);
    merge_collapse(state, options.policy);
    lo += run_len;
    remaining -= run_len;
  } while (remaining != 0);

  merge_force_collapse(state);
  return state.stats;
}

}  // namespace tsv
