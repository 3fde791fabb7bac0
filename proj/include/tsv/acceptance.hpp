#pragma once

// The acceptance criteria as one runnable suite. Shared by the acceptance
// test binary and the `verify` CLI command.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tsv/run_stack.hpp"

namespace tsv {

struct AcceptanceOptions {
  /// Full workload sizes. Quick mode shrinks array counts and sizes but keeps
  /// every criterion and every tolerance.
  bool full = true;
  /// Collapse policy wired into the sort under test. Anything but `fixed`
  /// is a deliberate mutation and must make the suite fail.
  CollapsePolicy sort_policy = CollapsePolicy::fixed;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Informational entries are reported but do not affect the verdict.
  bool informational = false;
  std::string detail;
  double seconds = 0.0;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Runs every criterion in order, invoking `on_result` as each completes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const CriterionCallback& on_result = {});

/// True when every non-informational criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace tsv
