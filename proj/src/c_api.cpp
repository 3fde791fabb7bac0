// extern "C" surface over the C++ core. Exceptions never cross this
// boundary; each one maps to a tsv_status and a thread-local message.

#include "tsv/tsv.h"

#include <cstring>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsv/acceptance.hpp"
#include "tsv/core_sort.hpp"
#include "tsv/harness.hpp"
#include "tsv/invariants.hpp"
#include "tsv/stack_sim.hpp"

struct tsv_lengths {
  std::vector<std::uint64_t> values;
};

struct tsv_keys {
  std::vector<std::int64_t> values;
};

struct tsv_sim_trace {
  tsv::SimTrace trace;
  std::vector<std::string> clause_names;
};

namespace {

thread_local std::string g_last_error;

tsv_status fail(tsv_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
tsv_status guarded(Fn&& fn) {
  try {
    fn();
    return TSV_OK;
  } catch (const tsv::InvariantViolation& e) {
    return fail(TSV_ERR_INVARIANT, e.what());
  } catch (const tsv::StackOverflow& e) {
    return fail(TSV_ERR_STACK_OVERFLOW, e.what());
  } catch (const tsv::ArithmeticOverflow& e) {
    return fail(TSV_ERR_ARITHMETIC_OVERFLOW, e.what());
  } catch (const std::out_of_range& e) {
    return fail(TSV_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(TSV_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TSV_ERR_NO_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(TSV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TSV_ERR_INTERNAL, "unknown error");
  }
}

tsv::CollapsePolicy to_policy(tsv_policy p) {
  switch (p) {
    case TSV_POLICY_FIXED: return tsv::CollapsePolicy::fixed;
    case TSV_POLICY_LEGACY: return tsv::CollapsePolicy::legacy;
  }
  throw std::invalid_argument("unknown policy");
}

tsv::GenKind to_kind(tsv_gen_kind k) {
  switch (k) {
    case TSV_GEN_UNIFORM_RANDOM: return tsv::GenKind::uniform_random;
    case TSV_GEN_RUN_STRUCTURED: return tsv::GenKind::run_structured;
    case TSV_GEN_ASCENDING: return tsv::GenKind::ascending;
    case TSV_GEN_DESCENDING: return tsv::GenKind::descending;
    case TSV_GEN_CONSTANT: return tsv::GenKind::constant;
    case TSV_GEN_WORST_CASE: return tsv::GenKind::worst_case;
  }
  throw std::invalid_argument("unknown generator kind");
}

std::vector<tsv::Element> to_elements(const std::int64_t* keys, std::size_t n) {
  std::vector<tsv::Element> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {keys[i], i};
  return out;
}

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

tsv_keys* to_keys(const std::vector<tsv::Element>& elements) {
  auto* out = new tsv_keys;
  out->values.reserve(elements.size());
  for (const auto& e : elements) out->values.push_back(e.key);
  return out;
}

}  // namespace

extern "C" {

const char* tsv_status_name(tsv_status status) {
  switch (status) {
    case TSV_OK: return "ok";
    case TSV_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TSV_ERR_OUT_OF_RANGE: return "out of range";
    case TSV_ERR_INVARIANT: return "invariant violation";
    case TSV_ERR_STACK_OVERFLOW: return "run stack overflow";
    case TSV_ERR_ARITHMETIC_OVERFLOW: return "arithmetic overflow";
    case TSV_ERR_NO_MEMORY: return "out of memory";
    case TSV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tsv_last_error_message(void) { return g_last_error.c_str(); }

tsv_status tsv_policy_parse(const char* name, tsv_policy* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    const auto p = tsv::parse_policy(name);
    require(p.has_value(), "policy must be 'fixed' or 'legacy'");
    *out = *p == tsv::CollapsePolicy::fixed ? TSV_POLICY_FIXED : TSV_POLICY_LEGACY;
  });
}

tsv_status tsv_sort_i64(int64_t* keys, size_t n, unsigned flags,
                        tsv_sort_stats* stats) {
  return guarded([&] {
    require(keys != nullptr || n == 0, "null keys");
    auto elements = to_elements(keys, n);
    tsv::SortOptions opts;
    opts.check_invariants = (flags & TSV_SORT_CHECK_INVARIANTS) != 0;
    const tsv::SortStats s = tsv::timsort(elements, opts);
    for (std::size_t i = 0; i < n; ++i) keys[i] = elements[i].key;
    if (stats != nullptr) {
      *stats = {s.stack_capacity, s.max_stack_depth, s.comparisons, s.merges,
                s.contract_checks};
    }
  });
}

tsv_status tsv_reference_sort_i64(int64_t* keys, size_t n,
                                  uint64_t* comparisons) {
  return guarded([&] {
    require(keys != nullptr || n == 0, "null keys");
    std::uint64_t count = 0;
    const auto sorted = tsv::reference_sort(to_elements(keys, n), &count);
    for (std::size_t i = 0; i < n; ++i) keys[i] = sorted[i].key;
    if (comparisons != nullptr) *comparisons = count;
  });
}

size_t tsv_lengths_size(const tsv_lengths* list) {
  return list == nullptr ? 0 : list->values.size();
}

const uint64_t* tsv_lengths_data(const tsv_lengths* list) {
  return list == nullptr ? nullptr : list->values.data();
}

void tsv_lengths_free(tsv_lengths* list) { delete list; }

tsv_status tsv_lengths_parse(const char* text, tsv_lengths** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new tsv_lengths{tsv::parse_sequence(text)};
  });
}

tsv_status tsv_lengths_format(const uint64_t* lengths, size_t count, char* buf,
                              size_t cap, size_t* needed) {
  return guarded([&] {
    require(lengths != nullptr || count == 0, "null lengths");
    const std::string text =
        tsv::format_sequence(std::vector<std::uint64_t>(lengths, lengths + count));
    if (needed != nullptr) *needed = text.size();
    if (buf != nullptr && cap > text.size()) {
      std::memcpy(buf, text.c_str(), text.size() + 1);
    } else if (buf != nullptr) {
      throw std::out_of_range("buffer too small for formatted lengths");
    }
  });
}

tsv_status tsv_fib(uint64_t n, uint64_t* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = tsv::fib(n);
  });
}

tsv_status tsv_fib2(uint64_t n, uint64_t* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = tsv::fib2(n);
  });
}

tsv_status tsv_safe_bound(uint64_t depth, uint64_t min_run, uint64_t* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = tsv::safe_bound(depth, min_run);
  });
}

uint64_t tsv_required_stack_capacity(uint64_t n) {
  return tsv::required_stack_capacity(n);
}

tsv_status tsv_worst_case_run_lengths(uint64_t depth, uint64_t min_run,
                                      tsv_lengths** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new tsv_lengths{tsv::worst_case_run_lengths(depth, min_run)};
  });
}

tsv_status tsv_gen_kind_parse(const char* name, tsv_gen_kind* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    const auto k = tsv::parse_gen_kind(name);
    require(k.has_value(), "unknown generator kind");
    *out = static_cast<tsv_gen_kind>(*k);
  });
}

const char* tsv_gen_kind_name(tsv_gen_kind kind) {
  try {
    return tsv::gen_kind_name(to_kind(kind)).data();
  } catch (...) {
    return "unknown";
  }
}

tsv_status tsv_generate(const tsv_gen_spec* spec, tsv_keys** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "null argument");
    tsv::GenSpec g;
    g.kind = to_kind(spec->kind);
    g.n = spec->n;
    g.seed = spec->seed;
    g.min_run = spec->min_run == 0 ? tsv::kMinRun : spec->min_run;
    g.alphabet = spec->alphabet;
    g.depth = spec->depth;
    require(g.kind != tsv::GenKind::worst_case || g.depth == 0 || g.depth >= 2,
            "worst-case depth must be at least 2");
    *out = to_keys(tsv::generate(g));
  });
}

tsv_status tsv_sequence_to_keys(const uint64_t* lengths, size_t count,
                                uint64_t seed, tsv_keys** out) {
  return guarded([&] {
    require((lengths != nullptr || count == 0) && out != nullptr,
            "null argument");
    tsv::RunLenSequence seq{{lengths, lengths + count}, 1};
    *out = to_keys(tsv::sequence_to_array(seq, seed));
  });
}

size_t tsv_keys_size(const tsv_keys* keys) {
  return keys == nullptr ? 0 : keys->values.size();
}

const int64_t* tsv_keys_data(const tsv_keys* keys) {
  return keys == nullptr ? nullptr : keys->values.data();
}

void tsv_keys_free(tsv_keys* keys) { delete keys; }

tsv_status tsv_sim_replay(const uint64_t* lengths, size_t count,
                          uint64_t min_run, tsv_policy policy,
                          uint64_t capacity, tsv_sim_trace** out) {
  return guarded([&] {
    require((lengths != nullptr || count == 0) && out != nullptr,
            "null argument");
    require(min_run >= 1, "min_run must be positive");
    tsv::ReplayOptions opts;
    opts.policy = to_policy(policy);
    opts.capacity = capacity;
    auto* t = new tsv_sim_trace;
    try {
      t->trace = tsv::replay({{lengths, lengths + count}, min_run}, opts);
    } catch (...) {
      delete t;
      throw;
    }
    for (const auto& v : t->trace.violations) {
      t->clause_names.emplace_back(tsv::clause_name(v.clause));
    }
    *out = t;
  });
}

uint64_t tsv_sim_trace_max_depth(const tsv_sim_trace* trace) {
  return trace == nullptr ? 0 : trace->trace.max_depth;
}

size_t tsv_sim_trace_violation_count(const tsv_sim_trace* trace) {
  return trace == nullptr ? 0 : trace->trace.violations.size();
}

tsv_status tsv_sim_trace_violation(const tsv_sim_trace* trace, size_t index,
                                   uint64_t* step, const char** clause,
                                   const char** detail) {
  return guarded([&] {
    require(trace != nullptr, "null trace");
    if (index >= trace->trace.violations.size()) {
      throw std::out_of_range("violation index out of range");
    }
    const auto& v = trace->trace.violations[index];
    if (step != nullptr) *step = v.step;
    if (clause != nullptr) *clause = trace->clause_names[index].c_str();
    if (detail != nullptr) *detail = v.detail.c_str();
  });
}

size_t tsv_sim_trace_final_size(const tsv_sim_trace* trace) {
  return trace == nullptr ? 0 : trace->trace.final_stack.size();
}

const uint64_t* tsv_sim_trace_final_stack(const tsv_sim_trace* trace) {
  return trace == nullptr ? nullptr : trace->trace.final_stack.data();
}

void tsv_sim_trace_free(tsv_sim_trace* trace) { delete trace; }

tsv_status tsv_sim_search(tsv_policy policy, uint64_t max_runs,
                          uint64_t min_run, uint64_t budget,
                          tsv_lengths** found, uint64_t* nodes,
                          int* exhausted) {
  return guarded([&] {
    require(found != nullptr, "null output");
    require(min_run >= 1, "min_run must be positive");
    tsv::SearchOptions opts;
    opts.policy = to_policy(policy);
    opts.max_runs = max_runs;
    opts.min_run = min_run;
    opts.budget = budget;
    const tsv::SearchResult r = tsv::search_breaking_sequence(opts);
    *found = r.found ? new tsv_lengths{r.found->lengths} : nullptr;
    if (nodes != nullptr) *nodes = r.nodes;
    if (exhausted != nullptr) *exhausted = r.exhausted ? 1 : 0;
  });
}

tsv_status tsv_verify(int full, tsv_policy sort_policy, tsv_criterion_fn fn,
                      void* user, int* all_passed) {
  return guarded([&] {
    tsv::AcceptanceOptions opts;
    opts.full = full != 0;
    opts.sort_policy = to_policy(sort_policy);
    const auto results = tsv::run_acceptance(opts, [&](const tsv::CriterionResult& r) {
      if (fn != nullptr) {
        fn(user, r.id, r.name.c_str(), r.passed ? 1 : 0,
           r.informational ? 1 : 0, r.detail.c_str(), r.seconds);
      }
    });
    if (all_passed != nullptr) *all_passed = tsv::all_passed(results) ? 1 : 0;
  });
}

}  // extern "C"
