#pragma once

// Deterministic input generators, an independent reference sort, and the
// verdict checker used by the test suites and the bench/verify commands.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsv/element.hpp"
#include "tsv/invariants.hpp"

namespace tsv {

enum class GenKind {
  uniform_random,
  run_structured,
  ascending,
  descending,
  constant,
  worst_case,
};

std::string_view gen_kind_name(GenKind k);
/// Accepts both `run_structured` and `run-structured` spellings.
std::optional<GenKind> parse_gen_kind(std::string_view name);

inline constexpr GenKind kAllGenKinds[] = {
    GenKind::uniform_random, GenKind::run_structured, GenKind::ascending,
    GenKind::descending,     GenKind::constant,       GenKind::worst_case};

struct GenSpec {
  GenKind kind = GenKind::uniform_random;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  /// Floor on generated run lengths (run_structured, worst_case).
  RunLength min_run = kMinRun;
  /// uniform_random keys are drawn from [0, alphabet); 0 means the full
  /// 64-bit range.
  std::uint64_t alphabet = 0;
  /// worst_case only: when nonzero, emit exactly the extremal stack of this
  /// depth and ignore n. When zero, use the deepest extremal stack that fits
  /// in n and append the rest as one extra run.
  std::uint64_t depth = 0;
};

/// Pure function of the spec. Tags are 0..n-1 in position order.
std::vector<Element> generate(const GenSpec& spec);

/// Bottom-up stable merge sort. Shares no code with the sort engine.
std::vector<Element> reference_sort(std::span<const Element> a,
                                    std::uint64_t* comparisons = nullptr);

struct Defect {
  std::size_t index = 0;
  std::string description;
};

struct Verdict {
  bool sorted = true;
  bool permutation = true;
  bool stable = true;
  std::optional<Defect> first_defect;

  bool ok() const { return sorted && permutation && stable; }
};

/// sorted: keys nondecreasing. permutation: same multiset of (key, tag).
/// stable: for every key, the tags appear in the same order as in the input.
/// first_defect names the lowest output index at which any check fails.
Verdict check_result(std::span<const Element> input,
                     std::span<const Element> output);

}  // namespace tsv
