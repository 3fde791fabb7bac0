#pragma once

// Element-free model of the run stack. Merging two runs is just adding their
// lengths, so collapse policies can be replayed and searched cheaply.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsv/element.hpp"
#include "tsv/invariants.hpp"
#include "tsv/run_stack.hpp"

namespace tsv {

/// Run lengths in push order. Every entry is >= 1; every entry but the last
/// is expected to be >= min_run.
struct RunLenSequence {
  std::vector<RunLength> lengths;
  RunLength min_run = 1;

  friend bool operator==(const RunLenSequence&, const RunLenSequence&) = default;
};

struct SimViolation {
  std::size_t step = 0;  // index of the push after which it was observed
  Clause clause = Clause::elem_inv;
  std::optional<std::size_t> position;
  std::string detail;
};

struct SimTrace {
  std::size_t max_depth = 0;
  std::vector<SimViolation> violations;
  std::vector<RunLength> final_stack;
  /// Live lengths after each push and after each collapse, alternating.
  /// Filled only when requested.
  std::vector<std::vector<RunLength>> states;
};

struct ReplayOptions {
  CollapsePolicy policy = CollapsePolicy::fixed;
  std::size_t capacity = 0;  // 0 means model_capacity(sum, min_run)
  bool record_states = false;
};

/// Stack depth sufficient for `total` elements when runs are at least
/// `min_run` long: required_stack_capacity for min_run 16, otherwise the
/// smallest depth >= 2 whose safe bound covers total.
std::size_t model_capacity(RunLength total, RunLength min_run);

/// Push each length, collapse after each push, and record every post-collapse
/// shape failure (elem_inv with the sequence's min_run at depths >= 3,
/// bigger-than-next at depth 2). A push onto a full stack is recorded as an
/// overflow; the model stack grows past capacity so the replay can continue.
/// Throws std::invalid_argument for a zero run length.
SimTrace replay(const RunLenSequence& seq, const ReplayOptions& options);

struct SearchOptions {
  CollapsePolicy policy = CollapsePolicy::legacy;
  std::size_t max_runs = 12;
  RunLength min_run = 1;
  std::uint64_t budget = 10'000'000;
};

struct SearchResult {
  std::optional<RunLenSequence> found;
  std::uint64_t nodes = 0;
  bool exhausted = false;  // the whole bounded space was explored
};

/// Iterative-deepening search for the shortest run-length sequence whose
/// replay under the policy records a non-overflow violation. Each next length
/// ranges over [min_run, min_run + sum so far + 1]. A node is one replayed
/// push; the search stops when `budget` nodes have been expanded.
SearchResult search_breaking_sequence(const SearchOptions& options);

/// Push order that builds worst_case_run_lengths(depth, min_run) with no
/// merge along the way: bottom run first.
RunLenSequence extremal_push_sequence(std::uint64_t depth, RunLength min_run);

/// An array whose natural runs are exactly `seq`: each run strictly ascending,
/// each boundary a strict descent. Tags are positions. Runs shorter than
/// kMinRun will be extended by the sort, so exact run structure needs lengths
/// >= kMinRun. `seed` only shifts all keys by a constant.
std::vector<Element> sequence_to_array(const RunLenSequence& seq,
                                       std::uint64_t seed);

/// Decimal, comma-separated, one line.
std::string format_sequence(const std::vector<RunLength>& lengths);
/// Parses format_sequence output; surrounding whitespace is ignored.
/// Throws std::invalid_argument on malformed input or a zero entry.
std::vector<RunLength> parse_sequence(std::string_view text);

}  // namespace tsv
