#include "tsv/stack_sim.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include "tsv/prng.hpp"

namespace tsv {
namespace {

void collapse(std::vector<RunLength>& live, CollapsePolicy policy) {
  while (auto n = collapse_step(live, policy)) {
    live[*n] += live[*n + 1];
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(*n) + 1);
  }
}

// One replayed push: returns the post-collapse shape failure, if any.
InvariantReport push_and_collapse(std::vector<RunLength>& live, RunLength len,
                                  RunLength min_run, CollapsePolicy policy) {
  live.push_back(len);
  collapse(live, policy);
  return check_collapsed_shape(live, min_run);
}

struct Searcher {
  const SearchOptions& opts;
  std::uint64_t nodes = 0;
  bool budget_hit = false;
  std::vector<RunLength> path;

  // Explores sequences extending `path` up to `depth` pushes.
  bool dfs(const std::vector<RunLength>& live, RunLength sum,
           std::size_t depth) {
    if (path.size() == depth) return false;
    const RunLength hi = opts.min_run + sum + 1;
    for (RunLength len = opts.min_run; len <= hi; ++len) {
      if (nodes >= opts.budget) {
        budget_hit = true;
        return false;
      }
      ++nodes;
      std::vector<RunLength> next = live;
      path.push_back(len);
      if (!push_and_collapse(next, len, opts.min_run, opts.policy).ok) {
        return true;
      }
      if (dfs(next, sum + len, depth)) return true;
      path.pop_back();
      if (budget_hit) return false;
    }
    return false;
  }
};

}  // namespace

std::size_t model_capacity(RunLength total, RunLength min_run) {
  if (min_run == kMinRun) return required_stack_capacity(total);
  std::uint64_t depth = 2;
  while (safe_bound(depth, min_run) < total) ++depth;
  return depth;
}

SimTrace replay(const RunLenSequence& seq, const ReplayOptions& options) {
  const RunLength total =
      std::accumulate(seq.lengths.begin(), seq.lengths.end(), RunLength{0});
  const std::size_t capacity = options.capacity != 0
                                   ? options.capacity
                                   : model_capacity(total, seq.min_run);
  SimTrace trace;
  std::vector<RunLength> live;
  for (std::size_t step = 0; step < seq.lengths.size(); ++step) {
    const RunLength len = seq.lengths[step];
    if (len == 0) throw std::invalid_argument("replay: zero run length");
    if (live.size() >= capacity) {
      trace.violations.push_back(
          {step, Clause::overflow, live.size(),
           "push onto a full stack of capacity " + std::to_string(capacity)});
    }
    live.push_back(len);
    trace.max_depth = std::max(trace.max_depth, live.size());
    if (options.record_states) trace.states.push_back(live);
    collapse(live, options.policy);
    if (options.record_states) trace.states.push_back(live);
    InvariantReport r = check_collapsed_shape(live, seq.min_run);
    if (!r.ok) {
      trace.violations.push_back(
          {step, *r.failed_clause, r.position, std::move(r.detail)});
    }
  }
  trace.final_stack = std::move(live);
  return trace;
}

SearchResult search_breaking_sequence(const SearchOptions& options) {
  if (options.min_run == 0) {
    throw std::invalid_argument("search: min_run must be positive");
  }
  SearchResult result;
  Searcher s{options, 0, false, {}};
  for (std::size_t depth = 1; depth <= options.max_runs; ++depth) {
    s.path.clear();
    if (s.dfs({}, 0, depth)) {
      result.found = RunLenSequence{s.path, options.min_run};
      break;
    }
    if (s.budget_hit) break;
  }
  result.nodes = s.nodes;
  result.exhausted = !result.found && !s.budget_hit;
  return result;
}

RunLenSequence extremal_push_sequence(std::uint64_t depth, RunLength min_run) {
  // Every prefix of the extremal stack already satisfies the collapsed shape,
  // so pushing bottom-first never triggers a merge.
  return RunLenSequence{worst_case_run_lengths(depth, min_run), min_run};
}

std::vector<Element> sequence_to_array(const RunLenSequence& seq,
                                       std::uint64_t seed) {
  const std::int64_t shift =
      seed == 0 ? 0
                : static_cast<std::int64_t>(SplitMix64(seed).below(1ULL << 32)) -
                      (std::int64_t{1} << 31);
  std::vector<Element> out;
  out.reserve(std::accumulate(seq.lengths.begin(), seq.lengths.end(),
                              RunLength{0}));
  std::int64_t last = 0;
  for (std::size_t i = 0; i < seq.lengths.size(); ++i) {
    if (seq.lengths[i] == 0) {
      throw std::invalid_argument("sequence_to_array: zero run length");
    }
    const std::int64_t first = i == 0 ? 0 : std::min<std::int64_t>(0, last - 1);
    for (RunLength j = 0; j < seq.lengths[i]; ++j) {
      last = first + static_cast<std::int64_t>(j);
      out.push_back({last + shift, out.size()});
    }
  }
  return out;
}

std::string format_sequence(const std::vector<RunLength>& lengths) {
  std::string out;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (i != 0) out += ',';
    out += std::to_string(lengths[i]);
  }
  return out;
}

std::vector<RunLength> parse_sequence(std::string_view text) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  std::vector<RunLength> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view field =
        text.substr(pos, comma == std::string_view::npos ? text.size() - pos
                                                         : comma - pos);
    RunLength v = 0;
    const auto [end, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || end != field.data() + field.size() || v == 0) {
      throw std::invalid_argument("bad run length '" + std::string(field) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace tsv
