#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tsv/invariants.hpp"

namespace tsv {

class SortState;

/// Pending runs, as two parallel fixed-capacity arrays plus a logical size.
/// Position 0 is the bottom of the stack (oldest, longest run).
struct RunStack {
  std::vector<RunLength> run_base;
  std::vector<RunLength> run_len;
  std::size_t stack_size = 0;

  RunStack() = default;
  explicit RunStack(std::size_t capacity)
      : run_base(capacity, 0), run_len(capacity, 0) {}

  std::size_t capacity() const { return run_len.size(); }
  std::span<const RunLength> live_lengths() const {
    return {run_len.data(), stack_size};
  }

  friend bool operator==(const RunStack&, const RunStack&) = default;
};

/// Stack capacity allocated for an array of length n: 4, 9, 18 or 39 below
/// 120, 1542, 119151 and 2917196496 respectively, then the smallest depth
/// whose safe bound (min run 16) covers n.
std::size_t required_stack_capacity(std::uint64_t n);

/// An empty stack sized by required_stack_capacity(n).
RunStack new_run_stack(std::uint64_t n);

enum class CollapsePolicy {
  /// Checks the top two triples before deciding to stop.
  fixed,
  /// The pre-fix loop that only inspects the top triple. Can leave the
  /// stack in a state that violates X > Y + Z further down.
  legacy,
};

std::string_view policy_name(CollapsePolicy p);
std::optional<CollapsePolicy> parse_policy(std::string_view name);

/// One iteration of the collapse loop over the live lengths: the stack index
/// to merge at, or nullopt when the loop would exit.
std::optional<std::size_t> collapse_step(std::span<const RunLength> live,
                                         CollapsePolicy policy);

/// One iteration of the force-collapse loop: merges at size-2, or size-3
/// when the run below is shorter than the top one. Requires size >= 2.
std::size_t force_collapse_step(std::span<const RunLength> live);

/// Push (base, len). Requires len > 0, base + len within the array, and base
/// contiguous with the current top. Throws std::invalid_argument on a
/// precondition failure and StackOverflow when the stack is full.
void push_run(SortState& state, std::size_t base, std::size_t len);

/// Merge runs i and i+1 (i is size-2 or size-3), shifting the top run down
/// when i = size-3.
void merge_at(SortState& state, std::size_t i);

void merge_collapse_fixed(SortState& state);
void merge_collapse_legacy(SortState& state);
void merge_collapse(SortState& state, CollapsePolicy policy);

/// Merge everything left on the stack into one run.
void merge_force_collapse(SortState& state);

}  // namespace tsv
