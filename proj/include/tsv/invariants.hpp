#pragma once

// Run-stack arithmetic: the shifted Fibonacci sequences, the safe array-length
// bound for a given stack depth, the extremal run-length stack, and an
// executable form of the run-stack invariant.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tsv {

using RunLength = std::uint64_t;

struct RunStack;

/// Shifted Fibonacci: fib(0) = fib(1) = 1, fib(n+2) = fib(n) + fib(n+1).
/// Throws ArithmeticOverflow once the value leaves 64-bit range.
std::uint64_t fib(std::uint64_t n);

/// fib2(0) = 0, fib2(1) = 1, fib2(n+2) = fib2(n) + fib2(n+1) + 1.
std::uint64_t fib2(std::uint64_t n);

/// Largest array length a run stack of depth `depth` can sort when every run
/// except the last is at least `min_run` long:
///   min_run * (fib(depth+1) - 1) + fib2(depth+1) - (depth+1).
/// Requires depth >= 2 and min_run >= 1 (std::invalid_argument otherwise).
std::uint64_t safe_bound(std::uint64_t depth, std::uint64_t min_run);

/// The stack (bottom to top) in which every lower bound is tight:
/// entry depth-1-k equals min_run * fib(k) + fib2(k).
std::vector<RunLength> worst_case_run_lengths(std::uint64_t depth,
                                              std::uint64_t min_run);

// Predicates over a run-length array, indexed from the bottom of the stack.
// Out-of-range positions make the predicate false.

/// rl[k] > rl[k+1] + rl[k+2] and rl[k] >= bound.
bool elem_inv(std::span<const RunLength> rl, std::size_t k, RunLength bound);
/// rl[k] > rl[k+1].
bool elem_bigger_than_next(std::span<const RunLength> rl, std::size_t k);
/// rl[k] >= bound.
bool elem_larger_than_bound(std::span<const RunLength> rl, std::size_t k,
                            RunLength bound);

enum class Clause {
  sizes,
  capacity_table,
  sum_bound,
  stack_size_range,
  elem_inv,
  bigger_than_next,
  larger_than_bound,
  contiguity,
  base0_nonneg,
  overflow,
  frame,
};

std::string_view clause_name(Clause c);

/// Verdict of an invariant check. `position` is the stack index (0 = bottom)
/// the failing clause refers to, when it refers to one.
struct InvariantReport {
  bool ok = true;
  std::optional<Clause> failed_clause;
  std::optional<std::size_t> position;
  std::string detail;

  static InvariantReport pass() { return {}; }
  static InvariantReport fail(Clause c, std::optional<std::size_t> pos,
                              std::string detail);

  friend bool operator==(const InvariantReport&,
                         const InvariantReport&) = default;
};

/// Sum of the first stack_size run lengths.
std::uint64_t sum_run_lengths(const RunStack& s);

/// The run-stack invariant that must hold between every stack operation,
/// evaluated clause by clause against an array of length `n`. Reports the
/// first failing clause. Pure.
///
/// Deliberately loose at the top of the stack: only depths >= 5 need the full
/// X > Y + Z shape, depth 4 needs bigger-than-next, depths 3 and 2 need
/// length >= 16, the top needs length >= 1.
InvariantReport check_invariant(const RunStack& s, std::uint64_t n);

/// The shape merge_collapse establishes on return, on the live run lengths
/// only: elem_inv (with `min_run`) at every position size-i for i >= 3, and
/// bigger-than-next at size-2.
InvariantReport check_collapsed_shape(std::span<const RunLength> live,
                                      RunLength min_run);

/// check_invariant followed by check_collapsed_shape with min_run 16.
InvariantReport check_collapsed_invariant(const RunStack& s, std::uint64_t n);

}  // namespace tsv
