#include "tsv/harness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "tsv/prng.hpp"
#include "tsv/stack_sim.hpp"

namespace tsv {
namespace {

std::vector<Element> with_keys(std::uint64_t n, auto key_of) {
  std::vector<Element> out(n);
  for (std::uint64_t i = 0; i < n; ++i) out[i] = {key_of(i), i};
  return out;
}

std::vector<Element> run_structured(const GenSpec& spec) {
  SplitMix64 rng(spec.seed);
  const RunLength floor = std::max<RunLength>(spec.min_run, 1);
  RunLenSequence seq{{}, floor};
  std::uint64_t left = spec.n;
  while (left > 0) {
    const RunLength len = std::min<RunLength>(left, rng.between(floor, 8 * floor));
    seq.lengths.push_back(len);
    left -= len;
  }
  return sequence_to_array(seq, spec.seed);
}

std::vector<Element> worst_case(const GenSpec& spec) {
  const RunLength floor = std::max<RunLength>(spec.min_run, 1);
  if (spec.depth != 0) {
    return sequence_to_array(extremal_push_sequence(spec.depth, floor),
                             spec.seed);
  }
  RunLenSequence seq{{}, floor};
  if (spec.n >= safe_bound(2, floor)) {
    std::uint64_t depth = 2;
    while (safe_bound(depth + 1, floor) <= spec.n) ++depth;
    seq = extremal_push_sequence(depth, floor);
  }
  const RunLength used =
      std::accumulate(seq.lengths.begin(), seq.lengths.end(), RunLength{0});
  if (spec.n > used) seq.lengths.push_back(spec.n - used);
  return sequence_to_array(seq, spec.seed);
}

// Merge a[lo, mid) and a[mid, hi) from `from` into `to`; left side wins ties.
void merge_pass(const std::vector<Element>& from, std::vector<Element>& to,
                std::size_t lo, std::size_t mid, std::size_t hi,
                std::uint64_t* comparisons) {
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (comparisons != nullptr) ++*comparisons;
    if (from[j].key < from[i].key) {
      to[k++] = from[j++];
    } else {
      to[k++] = from[i++];
    }
  }
  while (i < mid) to[k++] = from[i++];
  while (j < hi) to[k++] = from[j++];
}

}  // namespace

std::string_view gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::uniform_random: return "uniform_random";
    case GenKind::run_structured: return "run_structured";
    case GenKind::ascending: return "ascending";
    case GenKind::descending: return "descending";
    case GenKind::constant: return "constant";
    case GenKind::worst_case: return "worst_case";
  }
  return "unknown";
}

std::optional<GenKind> parse_gen_kind(std::string_view name) {
  std::string normalized(name);
  std::replace(normalized.begin(), normalized.end(), '-', '_');
  for (GenKind k : kAllGenKinds) {
    if (gen_kind_name(k) == normalized) return k;
  }
  if (normalized == "random" || normalized == "uniform") {
    return GenKind::uniform_random;
  }
  return std::nullopt;
}

std::vector<Element> generate(const GenSpec& spec) {
  switch (spec.kind) {
    case GenKind::uniform_random: {
      SplitMix64 rng(spec.seed);
      return with_keys(spec.n, [&](std::uint64_t) {
        return static_cast<std::int64_t>(
            spec.alphabet == 0 ? rng.next() : rng.below(spec.alphabet));
      });
    }
    case GenKind::run_structured:
      return run_structured(spec);
    case GenKind::ascending:
      return with_keys(spec.n,
                       [](std::uint64_t i) { return static_cast<std::int64_t>(i); });
    case GenKind::descending:
      return with_keys(spec.n, [&](std::uint64_t i) {
        return static_cast<std::int64_t>(spec.n - 1 - i);
      });
    case GenKind::constant:
      return with_keys(spec.n, [](std::uint64_t) { return std::int64_t{0}; });
    case GenKind::worst_case:
      return worst_case(spec);
  }
  throw std::invalid_argument("generate: unknown kind");
}

std::vector<Element> reference_sort(std::span<const Element> a,
                                    std::uint64_t* comparisons) {
  std::vector<Element> src(a.begin(), a.end());
  std::vector<Element> dst(a.size());
  const std::size_t n = src.size();
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      merge_pass(src, dst, lo, mid, hi, comparisons);
    }
    std::swap(src, dst);
  }
  return src;
}

Verdict check_result(std::span<const Element> input,
                     std::span<const Element> output) {
  Verdict v;
  std::optional<Defect> sorted_defect;
  std::optional<Defect> perm_defect;
  std::optional<Defect> stable_defect;

  for (std::size_t i = 1; i < output.size(); ++i) {
    if (output[i].key < output[i - 1].key) {
      v.sorted = false;
      sorted_defect = Defect{i, "key decreases at index " + std::to_string(i)};
      break;
    }
  }

  {
    const auto by_pair = [](const Element& x, const Element& y) {
      return std::pair(x.key, x.tag) < std::pair(y.key, y.tag);
    };
    std::vector<Element> in_sorted(input.begin(), input.end());
    std::vector<Element> out_sorted(output.begin(), output.end());
    std::sort(in_sorted.begin(), in_sorted.end(), by_pair);
    std::sort(out_sorted.begin(), out_sorted.end(), by_pair);
    if (in_sorted != out_sorted) {
      v.permutation = false;
      // Locate the first output element that has no partner in the input.
      std::map<std::pair<std::int64_t, std::uint64_t>, std::size_t> budget;
      for (const Element& e : input) ++budget[{e.key, e.tag}];
      std::size_t at = output.size();
      for (std::size_t i = 0; i < output.size(); ++i) {
        auto it = budget.find({output[i].key, output[i].tag});
        if (it == budget.end() || it->second == 0) {
          at = i;
          break;
        }
        --it->second;
      }
      perm_defect = Defect{
          at, at < output.size()
                  ? "element at index " + std::to_string(at) +
                        " is not from the input"
                  : "output is missing " +
                        std::to_string(input.size() > output.size()
                                           ? input.size() - output.size()
                                           : 0) +
                        " input elements"};
    }
  }

  {
    // Tags of each key in input order; output must consume them in order.
    std::map<std::int64_t, std::pair<std::vector<std::uint64_t>, std::size_t>>
        expected;
    for (const Element& e : input) expected[e.key].first.push_back(e.tag);
    for (std::size_t i = 0; i < output.size(); ++i) {
      auto it = expected.find(output[i].key);
      if (it == expected.end()) continue;  // reported as a permutation defect
      auto& [tags, next] = it->second;
      if (next >= tags.size() || tags[next] != output[i].tag) {
        v.stable = false;
        stable_defect = Defect{
            i, "equal keys out of input order at index " + std::to_string(i)};
        break;
      }
      ++next;
    }
  }

  for (auto* d : {&sorted_defect, &perm_defect, &stable_defect}) {
    if (*d && (!v.first_defect || (*d)->index < v.first_defect->index)) {
      v.first_defect = *d;
    }
  }
  return v;
}

}  // namespace tsv
