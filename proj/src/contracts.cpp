#include "tsv/contracts.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

namespace tsv::contracts {
namespace {

InvariantReport fail(Clause c, std::string detail,
                     std::optional<std::size_t> pos = std::nullopt) {
  return InvariantReport::fail(c, pos, std::move(detail));
}

// Clauses the caller sets up before a push: the stack is in collapsed shape
// and the current top is a full-length run.
InvariantReport collapsed_before_push(const RunStack& s) {
  const auto live = s.live_lengths();
  InvariantReport r = check_collapsed_shape(live, kMinRun);
  if (!r.ok) return r;
  if (!live.empty() && live.back() < kMinRun) {
    return fail(Clause::larger_than_bound,
                "top run shorter than 16 before a push", live.size() - 1);
  }
  return r;
}

InvariantReport base0_unchanged(const RunStack& before, const RunStack& after) {
  if (!before.run_base.empty() && !after.run_base.empty() &&
      before.run_base[0] != after.run_base[0]) {
    return fail(Clause::base0_nonneg, "run_base[0] changed");
  }
  return InvariantReport::pass();
}

InvariantReport sum_and_top(const RunStack& before, const RunStack& after) {
  if (sum_run_lengths(before) != sum_run_lengths(after)) {
    return fail(Clause::sum_bound,
                "live length sum changed from " +
                    std::to_string(sum_run_lengths(before)) + " to " +
                    std::to_string(sum_run_lengths(after)));
  }
  if (after.stack_size == 0 ||
      after.run_len[after.stack_size - 1] <
          before.run_len[before.stack_size - 1]) {
    return fail(Clause::larger_than_bound, "top run length decreased");
  }
  return InvariantReport::pass();
}

}  // namespace

InvariantReport push_run_pre(const RunStack& s, std::uint64_t base,
                             std::uint64_t len, std::uint64_t n) {
  if (len == 0 || len > n || base + len > n) {
    return fail(Clause::sum_bound, "run [" + std::to_string(base) + ", +" +
                                       std::to_string(len) +
                                       ") is empty or leaves the array");
  }
  if (s.stack_size > 0) {
    const std::size_t top = s.stack_size - 1;
    if (base != s.run_base[top] + s.run_len[top]) {
      return fail(Clause::contiguity, "pushed run is not contiguous with top",
                  top);
    }
  }
  if (s.stack_size > s.capacity()) {
    return fail(Clause::stack_size_range, "stack_size exceeds capacity");
  }
  InvariantReport r = collapsed_before_push(s);
  if (!r.ok) return r;
  return check_invariant(s, n);
}

InvariantReport push_run_post(const RunStack& before, const RunStack& after,
                              std::uint64_t base, std::uint64_t len,
                              std::uint64_t n) {
  const std::size_t old = before.stack_size;
  if (after.stack_size != old + 1) {
    return fail(Clause::stack_size_range, "push did not grow the stack by one");
  }
  if (after.run_base[old] != base || after.run_len[old] != len) {
    return fail(Clause::contiguity, "pushed slot does not hold the new run",
                old);
  }
  for (std::size_t i = 0; i < old; ++i) {
    if (after.run_len[i] != before.run_len[i] ||
        after.run_base[i] != before.run_base[i]) {
      return fail(Clause::contiguity, "push modified a deeper entry", i);
    }
  }
  return check_invariant(after, n);
}

InvariantReport merge_at_pre(const RunStack& s, std::size_t i,
                             std::uint64_t n) {
  const std::size_t size = s.stack_size;
  if (size < 2) {
    return fail(Clause::stack_size_range, "merge_at needs two runs");
  }
  if (!(i == size - 2 || (size >= 3 && i == size - 3))) {
    return fail(Clause::stack_size_range,
                "merge_at index " + std::to_string(i) +
                    " is neither size-2 nor size-3");
  }
  if (n == 0) return fail(Clause::sum_bound, "merge_at on an empty array");
  return check_invariant(s, n);
}

InvariantReport merge_at_post(const RunStack& before, const RunStack& after,
                              std::size_t i, std::uint64_t n) {
  if (after.stack_size + 1 != before.stack_size) {
    return fail(Clause::stack_size_range, "merge_at did not shrink the stack");
  }
  if (auto r = base0_unchanged(before, after); !r.ok) return r;
  if (after.run_len[i] != before.run_len[i] + before.run_len[i + 1]) {
    return fail(Clause::sum_bound, "merged slot is not the sum of its parts",
                i);
  }
  if (i == before.stack_size - 3) {
    if (after.run_len[i + 1] != before.run_len[i + 2] ||
        after.run_base[i + 1] != before.run_base[i + 2]) {
      return fail(Clause::contiguity, "top run was not shifted down", i + 1);
    }
  }
  for (std::size_t k = 0; k < i; ++k) {
    if (after.run_len[k] != before.run_len[k] ||
        after.run_base[k] != before.run_base[k]) {
      return fail(Clause::contiguity, "merge_at modified a deeper entry", k);
    }
  }
  if (auto r = check_invariant(after, n); !r.ok) return r;
  return sum_and_top(before, after);
}

InvariantReport merge_collapse_pre(const RunStack& s, std::uint64_t n) {
  const std::size_t size = s.stack_size;
  const auto live = s.live_lengths();
  if (size == 0) return fail(Clause::stack_size_range, "collapse of empty stack");
  if (n == 0) return fail(Clause::sum_bound, "collapse on an empty array");
  if (size >= 4 && !elem_inv(live, size - 4, kMinRun)) {
    return fail(Clause::elem_inv, "elem_inv fails at depth 4", size - 4);
  }
  if (size >= 3 && !elem_bigger_than_next(live, size - 3)) {
    return fail(Clause::bigger_than_next, "bigger_than_next fails at depth 3",
                size - 3);
  }
  return check_invariant(s, n);
}

InvariantReport merge_collapse_post(const RunStack& before,
                                    const RunStack& after, std::uint64_t n) {
  if (auto r = check_collapsed_shape(after.live_lengths(), kMinRun); !r.ok) {
    return r;
  }
  if (after.stack_size == 0 || after.stack_size > before.stack_size) {
    return fail(Clause::stack_size_range, "collapse grew or emptied the stack");
  }
  if (auto r = sum_and_top(before, after); !r.ok) return r;
  if (auto r = base0_unchanged(before, after); !r.ok) return r;
  return check_invariant(after, n);
}

InvariantReport merge_force_collapse_pre(const RunStack& s, std::uint64_t n) {
  if (s.stack_size == 0) {
    return fail(Clause::stack_size_range, "force collapse of empty stack");
  }
  if (n == 0) return fail(Clause::sum_bound, "force collapse on empty array");
  return check_invariant(s, n);
}

InvariantReport merge_force_collapse_post(const RunStack& before,
                                          const RunStack& after,
                                          std::uint64_t n) {
  if (after.stack_size != 1) {
    return fail(Clause::stack_size_range,
                "force collapse left " + std::to_string(after.stack_size) +
                    " runs");
  }
  if (sum_run_lengths(before) != sum_run_lengths(after)) {
    return fail(Clause::sum_bound, "force collapse changed the length sum");
  }
  return check_invariant(after, n);
}

InvariantReport frame_unchanged(std::span<const Element> before,
                                std::span<const Element> after, std::size_t lo,
                                std::size_t hi) {
  static_assert(std::has_unique_object_representations_v<Element>);
  if (before.size() != after.size()) {
    return fail(Clause::sizes, "buffer length changed");
  }
  const auto differs = [&](std::size_t from, std::size_t to) {
    return to > from && std::memcmp(before.data() + from, after.data() + from,
                                    (to - from) * sizeof(Element)) != 0;
  };
  if (differs(0, lo) || differs(hi, after.size())) {
    return fail(Clause::frame, "merge wrote outside [" + std::to_string(lo) +
                                   ", " + std::to_string(hi) + ")");
  }
  return InvariantReport::pass();
}

InvariantReport is_stable_merge(std::span<const Element> run1,
                                std::span<const Element> run2,
                                std::span<const Element> merged) {
  std::vector<Element> expected(run1.size() + run2.size());
  std::merge(run1.begin(), run1.end(), run2.begin(), run2.end(),
             expected.begin(),
             [](const Element& a, const Element& b) { return a.key < b.key; });
  if (merged.size() != expected.size() ||
      !std::equal(merged.begin(), merged.end(), expected.begin())) {
    return fail(Clause::frame, "merge window is not the stable merge of its runs");
  }
  return InvariantReport::pass();
}

void enforce(const InvariantReport& report, std::string_view where) {
  if (report.ok) return;
  std::string msg{where};
  msg += ": ";
  msg += clause_name(*report.failed_clause);
  if (!report.detail.empty()) {
    msg += " (";
    msg += report.detail;
    msg += ")";
  }
  throw InvariantViolation(msg);
}

}  // namespace tsv::contracts
