#pragma once

// Pre- and postconditions of the stack procedures, as executable checks.
// Each returns a report instead of throwing so property tests can inspect the
// failing clause; the sort engine turns failures into InvariantViolation.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "tsv/element.hpp"
#include "tsv/invariants.hpp"
#include "tsv/run_stack.hpp"

namespace tsv::contracts {

InvariantReport push_run_pre(const RunStack& s, std::uint64_t base,
                             std::uint64_t len, std::uint64_t n);
InvariantReport push_run_post(const RunStack& before, const RunStack& after,
                              std::uint64_t base, std::uint64_t len,
                              std::uint64_t n);

InvariantReport merge_at_pre(const RunStack& s, std::size_t i, std::uint64_t n);
InvariantReport merge_at_post(const RunStack& before, const RunStack& after,
                              std::size_t i, std::uint64_t n);

InvariantReport merge_collapse_pre(const RunStack& s, std::uint64_t n);
InvariantReport merge_collapse_post(const RunStack& before,
                                    const RunStack& after, std::uint64_t n);

InvariantReport merge_force_collapse_pre(const RunStack& s, std::uint64_t n);
InvariantReport merge_force_collapse_post(const RunStack& before,
                                          const RunStack& after,
                                          std::uint64_t n);

/// Every element of `after` outside [lo, hi) is bit-identical to `before`.
InvariantReport frame_unchanged(std::span<const Element> before,
                                std::span<const Element> after, std::size_t lo,
                                std::size_t hi);

/// `merged` equals the stable merge of `run1` and `run2` (run1 first on ties).
InvariantReport is_stable_merge(std::span<const Element> run1,
                                std::span<const Element> run2,
                                std::span<const Element> merged);

/// Throws InvariantViolation naming `where` when the report is a failure.
void enforce(const InvariantReport& report, std::string_view where);

}  // namespace tsv::contracts
