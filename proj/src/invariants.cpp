#include "tsv/invariants.hpp"

#include <stdexcept>
#include <string>

#include "tsv/element.hpp"
#include "tsv/run_stack.hpp"

namespace tsv {
namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw ArithmeticOverflow("64-bit overflow in run-length arithmetic");
  }
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw ArithmeticOverflow("64-bit overflow in run-length arithmetic");
  }
  return r;
}

std::string describe_position(std::size_t size, std::size_t pos) {
  return "position " + std::to_string(pos) + " (depth " +
         std::to_string(size - pos) + ")";
}

}  // namespace

std::uint64_t fib(std::uint64_t n) {
  std::uint64_t prev = 1;
  std::uint64_t cur = 1;
  for (std::uint64_t i = 1; i < n; ++i) {
    std::uint64_t next = checked_add(prev, cur);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::uint64_t fib2(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t prev = 0;
  std::uint64_t cur = 1;
  for (std::uint64_t i = 1; i < n; ++i) {
    std::uint64_t next = checked_add(checked_add(prev, cur), 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::uint64_t safe_bound(std::uint64_t depth, std::uint64_t min_run) {
  if (depth < 2 || min_run < 1) {
    throw std::invalid_argument("safe_bound requires depth >= 2, min_run >= 1");
  }
  const std::uint64_t l1 = checked_add(depth, 1);
  // fib2(l1) >= l1 for every l1 >= 1, so the subtraction is safe.
  return checked_add(checked_mul(min_run, fib(l1) - 1), fib2(l1) - l1);
}

std::vector<RunLength> worst_case_run_lengths(std::uint64_t depth,
                                              std::uint64_t min_run) {
  if (depth < 2 || min_run < 1) {
    throw std::invalid_argument(
        "worst_case_run_lengths requires depth >= 2, min_run >= 1");
  }
  std::vector<RunLength> rl(depth);
  for (std::uint64_t k = 0; k < depth; ++k) {
    rl[depth - 1 - k] = checked_add(checked_mul(min_run, fib(k)), fib2(k));
  }
  return rl;
}

bool elem_inv(std::span<const RunLength> rl, std::size_t k, RunLength bound) {
  if (k + 2 >= rl.size()) return false;
  // rl[k+1] + rl[k+2] cannot overflow for lengths that index real memory,
  // but the simulator takes arbitrary input.
  RunLength below = 0;
  if (__builtin_add_overflow(rl[k + 1], rl[k + 2], &below)) return false;
  return rl[k] > below && rl[k] >= bound;
}

bool elem_bigger_than_next(std::span<const RunLength> rl, std::size_t k) {
  if (k + 1 >= rl.size()) return false;
  return rl[k] > rl[k + 1];
}

bool elem_larger_than_bound(std::span<const RunLength> rl, std::size_t k,
                            RunLength bound) {
  if (k >= rl.size()) return false;
  return rl[k] >= bound;
}

std::string_view clause_name(Clause c) {
  switch (c) {
    case Clause::sizes: return "sizes";
    case Clause::capacity_table: return "capacity_table";
    case Clause::sum_bound: return "sum_bound";
    case Clause::stack_size_range: return "stack_size_range";
    case Clause::elem_inv: return "elem_inv";
    case Clause::bigger_than_next: return "bigger_than_next";
    case Clause::larger_than_bound: return "larger_than_bound";
    case Clause::contiguity: return "contiguity";
    case Clause::base0_nonneg: return "base0_nonneg";
    case Clause::overflow: return "overflow";
    case Clause::frame: return "frame";
  }
  return "unknown";
}

InvariantReport InvariantReport::fail(Clause c, std::optional<std::size_t> pos,
                                      std::string detail) {
  InvariantReport r;
  r.ok = false;
  r.failed_clause = c;
  r.position = pos;
  r.detail = std::move(detail);
  return r;
}

std::uint64_t sum_run_lengths(const RunStack& s) {
  std::uint64_t total = 0;
  const std::size_t live = std::min(s.stack_size, s.run_len.size());
  for (std::size_t i = 0; i < live; ++i) total += s.run_len[i];
  return total;
}

InvariantReport check_invariant(const RunStack& s, std::uint64_t n) {
  const auto& rl = s.run_len;
  const auto& rb = s.run_base;
  const std::size_t size = s.stack_size;

  if (rb.size() != rl.size()) {
    return InvariantReport::fail(
        Clause::sizes, std::nullopt,
        "run_base has " + std::to_string(rb.size()) + " slots, run_len has " +
            std::to_string(rl.size()));
  }
  const std::size_t expected = required_stack_capacity(n);
  if (rl.size() != expected) {
    return InvariantReport::fail(
        Clause::capacity_table, std::nullopt,
        "capacity " + std::to_string(rl.size()) + " but array length " +
            std::to_string(n) + " requires " + std::to_string(expected));
  }
  if (size > rl.size()) {
    return InvariantReport::fail(
        Clause::stack_size_range, std::nullopt,
        "stack_size " + std::to_string(size) + " exceeds capacity " +
            std::to_string(rl.size()));
  }
  {
    // run_base[0] + sum of live lengths <= n, evaluated without wrapping.
    std::uint64_t total = rl.empty() ? 0 : rb[0];
    bool wrapped = false;
    for (std::size_t i = 0; i < size && !wrapped; ++i) {
      wrapped = __builtin_add_overflow(total, rl[i], &total);
    }
    if (wrapped || total > n) {
      return InvariantReport::fail(
          Clause::sum_bound, std::nullopt,
          "run_base[0] + live lengths exceeds array length " +
              std::to_string(n));
    }
  }
  const std::span<const RunLength> live{rl.data(), size};
  for (std::size_t depth = 5; depth <= size; ++depth) {
    const std::size_t k = size - depth;
    if (!elem_inv(live, k, kMinRun)) {
      return InvariantReport::fail(Clause::elem_inv, k,
                                   "elem_inv fails at " +
                                       describe_position(size, k));
    }
  }
  if (size >= 4 && !elem_bigger_than_next(live, size - 4)) {
    return InvariantReport::fail(
        Clause::bigger_than_next, size - 4,
        "bigger_than_next fails at " + describe_position(size, size - 4));
  }
  for (std::size_t depth : {std::size_t{3}, std::size_t{2}}) {
    if (size >= depth && !elem_larger_than_bound(live, size - depth, kMinRun)) {
      return InvariantReport::fail(
          Clause::larger_than_bound, size - depth,
          "run shorter than 16 at " + describe_position(size, size - depth));
    }
  }
  if (size >= 1 && !elem_larger_than_bound(live, size - 1, 1)) {
    return InvariantReport::fail(Clause::larger_than_bound, size - 1,
                                 "empty run on top of the stack");
  }
  for (std::size_t i = 0; i + 1 < size; ++i) {
    if (rb[i] + rl[i] != rb[i + 1]) {
      return InvariantReport::fail(
          Clause::contiguity, i,
          "run " + std::to_string(i) + " ends at " +
              std::to_string(rb[i] + rl[i]) + " but run " +
              std::to_string(i + 1) + " starts at " +
              std::to_string(rb[i + 1]));
    }
  }
  // run_base entries are unsigned, so base0_nonneg holds by construction.
  return InvariantReport::pass();
}

InvariantReport check_collapsed_shape(std::span<const RunLength> live,
                                      RunLength min_run) {
  const std::size_t size = live.size();
  for (std::size_t depth = 3; depth <= size; ++depth) {
    const std::size_t k = size - depth;
    if (!elem_inv(live, k, min_run)) {
      return InvariantReport::fail(
          Clause::elem_inv, k,
          "elem_inv fails at " + describe_position(size, k) + ": " +
              std::to_string(live[k]) + " <= " + std::to_string(live[k + 1]) +
              " + " + std::to_string(live[k + 2]));
    }
  }
  if (size >= 2 && !elem_bigger_than_next(live, size - 2)) {
    return InvariantReport::fail(
        Clause::bigger_than_next, size - 2,
        "bigger_than_next fails at " + describe_position(size, size - 2) +
            ": " + std::to_string(live[size - 2]) +
            " <= " + std::to_string(live[size - 1]));
  }
  return InvariantReport::pass();
}

InvariantReport check_collapsed_invariant(const RunStack& s, std::uint64_t n) {
  InvariantReport r = check_invariant(s, n);
  if (!r.ok) return r;
  return check_collapsed_shape(s.live_lengths(), kMinRun);
}

}  // namespace tsv
