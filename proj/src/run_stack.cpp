#include "tsv/run_stack.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsv/contracts.hpp"
#include "tsv/core_sort.hpp"

namespace tsv {
namespace {

struct CapacityRow {
  std::uint64_t below;
  std::size_t capacity;
};

// Each threshold is safe_bound(capacity, 16) + 1.
constexpr CapacityRow kCapacityTable[] = {
    {120, 4}, {1542, 9}, {119151, 18}, {2917196496ULL, 39}};

void checked(SortState& state, const InvariantReport& r, std::string_view where) {
  ++state.stats.contract_checks;
  contracts::enforce(r, where);
}

}  // namespace

std::size_t required_stack_capacity(std::uint64_t n) {
  for (const auto& row : kCapacityTable) {
    if (n < row.below) return row.capacity;
  }
  std::size_t depth = 40;
  while (safe_bound(depth, kMinRun) < n) ++depth;
  return depth;
}

RunStack new_run_stack(std::uint64_t n) {
  return RunStack(required_stack_capacity(n));
}

std::string_view policy_name(CollapsePolicy p) {
  return p == CollapsePolicy::fixed ? "fixed" : "legacy";
}

std::optional<CollapsePolicy> parse_policy(std::string_view name) {
  if (name == "fixed") return CollapsePolicy::fixed;
  if (name == "legacy") return CollapsePolicy::legacy;
  return std::nullopt;
}

std::optional<std::size_t> collapse_step(std::span<const RunLength> rl,
                                         CollapsePolicy policy) {
  if (rl.size() <= 1) return std::nullopt;
  std::size_t n = rl.size() - 2;
  const bool top_triple = n > 0 && rl[n - 1] <= rl[n] + rl[n + 1];
  const bool next_triple = policy == CollapsePolicy::fixed && n > 1 &&
                           rl[n - 2] <= rl[n - 1] + rl[n];
  if (top_triple || next_triple) {
    if (rl[n - 1] < rl[n + 1]) --n;
    return n;
  }
  // The unsigned index cannot be negative, so only the length test remains.
  if (rl[n] > rl[n + 1]) return std::nullopt;
  return n;
}

std::size_t force_collapse_step(std::span<const RunLength> rl) {
  if (rl.size() < 2) throw std::invalid_argument("force collapse step needs two runs");
  std::size_t n = rl.size() - 2;
  if (n > 0 && rl[n - 1] < rl[n + 1]) --n;
  return n;
}

void push_run(SortState& state, std::size_t base, std::size_t len) {
  RunStack& s = state.stack;
  const std::uint64_t n = state.buffer.size();
  if (len == 0 || base + len > n) {
    throw std::invalid_argument("push_run: run [" + std::to_string(base) +
                                ", +" + std::to_string(len) +
                                ") is empty or leaves the array");
  }
  if (s.stack_size > 0 &&
      base != s.run_base[s.stack_size - 1] + s.run_len[s.stack_size - 1]) {
    throw std::invalid_argument(
        "push_run: base " + std::to_string(base) +
        " is not contiguous with the top run");
  }
  if (s.stack_size >= s.capacity()) {
    throw StackOverflow("push_run: run stack of capacity " +
                        std::to_string(s.capacity()) + " is full (n = " +
                        std::to_string(n) + ")");
  }

  std::optional<RunStack> before;
  if (state.checker_enabled) {
    checked(state, contracts::push_run_pre(s, base, len, n), "push_run pre");
    before = s;
  }

  s.run_base[s.stack_size] = base;
  s.run_len[s.stack_size] = len;
  ++s.stack_size;
  state.stats.max_stack_depth = std::max(state.stats.max_stack_depth, s.stack_size);

  if (before) {
    checked(state, contracts::push_run_post(*before, s, base, len, n),
            "push_run post");
  }
  if (state.observer) state.observer(StackEvent::push, s);
}

void merge_at(SortState& state, std::size_t i) {
  RunStack& s = state.stack;
  const std::uint64_t n = state.buffer.size();
  if (s.stack_size < 2 ||
      !(i == s.stack_size - 2 || (s.stack_size >= 3 && i == s.stack_size - 3))) {
    throw std::invalid_argument("merge_at: index " + std::to_string(i) +
                                " invalid for stack size " +
                                std::to_string(s.stack_size));
  }

  std::optional<RunStack> before;
  if (state.checker_enabled) {
    checked(state, contracts::merge_at_pre(s, i, n), "merge_at pre");
    before = s;
  }

  std::size_t base1 = s.run_base[i];
  std::size_t len1 = s.run_len[i];
  const std::size_t base2 = s.run_base[i + 1];
  std::size_t len2 = s.run_len[i + 1];

  s.run_len[i] = len1 + len2;
  if (i == s.stack_size - 3) {
    s.run_base[i + 1] = s.run_base[i + 2];
    s.run_len[i + 1] = s.run_len[i + 2];
  }
  --s.stack_size;
  s.run_base[s.stack_size] = 0;
  s.run_len[s.stack_size] = 0;
  ++state.stats.merges;

  // Inputs to the stable-merge check, captured before any element moves.
  std::vector<Element> run1;
  std::vector<Element> run2;
  const std::size_t window_lo = base1;
  const std::size_t window_hi = base2 + len2;
  if (before) {
    run1.assign(state.buffer.begin() + base1, state.buffer.begin() + base2);
    run2.assign(state.buffer.begin() + base2, state.buffer.begin() + window_hi);
  }

  const auto a = state.buffer;
  const auto less = state.less();
  // Elements of run 1 already <= run 2's head stay put; likewise the tail of
  // run 2 that is >= run 1's last element.
  const std::size_t skip = gallop_right(a[base2], a, base1, len1, 0, less);
  base1 += skip;
  len1 -= skip;
  if (len1 != 0) {
    len2 = gallop_left(a[base1 + len1 - 1], a, base2, len2, len2 - 1, less);
    if (len2 != 0) {
      const RunStack stack_before_merge = s;
      if (len1 <= len2) {
        merge_lo(state, base1, len1, base2, len2);
      } else {
        merge_hi(state, base1, len1, base2, len2);
      }
      if (before) {
        checked(state,
                contracts::frame_unchanged(state.shadow, state.buffer, base1,
                                           base2 + len2),
                "merge frame");
        checked(state,
                stack_before_merge == s
                    ? InvariantReport::pass()
                    : InvariantReport::fail(Clause::frame, std::nullopt,
                                            "merge modified the run stack"),
                "merge frame");
        checked(state,
                state.min_gallop >= 1
                    ? InvariantReport::pass()
                    : InvariantReport::fail(Clause::frame, std::nullopt,
                                            "min_gallop dropped below 1"),
                "merge frame");
      }
    }
  }

  if (before) {
    checked(state,
            contracts::is_stable_merge(
                run1, run2,
                std::span<const Element>(state.buffer)
                    .subspan(window_lo, window_hi - window_lo)),
            "merge_at result");
    state.sync_shadow(window_lo, window_hi);
    checked(state, contracts::merge_at_post(*before, s, i, n), "merge_at post");
  }
}

void merge_collapse(SortState& state, CollapsePolicy policy) {
  const std::uint64_t n = state.buffer.size();
  std::optional<RunStack> before;
  if (state.checker_enabled) {
    checked(state, contracts::merge_collapse_pre(state.stack, n),
            "merge_collapse pre");
    before = state.stack;
  }
  while (auto at = collapse_step(state.stack.live_lengths(), policy)) {
    merge_at(state, *at);
  }
  if (before) {
    checked(state, contracts::merge_collapse_post(*before, state.stack, n),
            "merge_collapse post");
  }
  if (state.observer) state.observer(StackEvent::collapse, state.stack);
}

void merge_collapse_fixed(SortState& state) {
  merge_collapse(state, CollapsePolicy::fixed);
}

void merge_collapse_legacy(SortState& state) {
  merge_collapse(state, CollapsePolicy::legacy);
}

void merge_force_collapse(SortState& state) {
  const std::uint64_t n = state.buffer.size();
  std::optional<RunStack> before;
  if (state.checker_enabled) {
    checked(state, contracts::merge_force_collapse_pre(state.stack, n),
            "merge_force_collapse pre");
    before = state.stack;
  }
  while (state.stack.stack_size > 1) {
    merge_at(state, force_collapse_step(state.stack.live_lengths()));
  }
  if (before) {
    checked(state,
            contracts::merge_force_collapse_post(*before, state.stack, n),
            "merge_force_collapse post");
  }
  if (state.observer) state.observer(StackEvent::force_collapse, state.stack);
}

}  // namespace tsv
