// timsort-verify: sort files, generate inputs, drive the run-stack
// simulator, benchmark, and run the acceptance suite.
//
// Exit codes: 0 success, 1 verification or invariant failure, 2 usage or
// I/O error.

#include <tsv/tsv.h>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

// Thrown for anything that should exit with kUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KeysDeleter {
  void operator()(tsv_keys* k) const { tsv_keys_free(k); }
};
struct LengthsDeleter {
  void operator()(tsv_lengths* l) const { tsv_lengths_free(l); }
};
struct TraceDeleter {
  void operator()(tsv_sim_trace* t) const { tsv_sim_trace_free(t); }
};
using KeysPtr = std::unique_ptr<tsv_keys, KeysDeleter>;
using LengthsPtr = std::unique_ptr<tsv_lengths, LengthsDeleter>;
using TracePtr = std::unique_ptr<tsv_sim_trace, TraceDeleter>;

std::string api_error(tsv_status s) {
  return std::string(tsv_status_name(s)) + ": " + tsv_last_error_message();
}

void check_usage(tsv_status s) {
  if (s != TSV_OK) throw UsageError(api_error(s));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw UsageError("cannot read " + path);
  return data;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot open " + path + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out) throw UsageError("cannot write " + path);
}

std::vector<int64_t> decode_text(const std::string& data) {
  std::vector<int64_t> keys;
  std::size_t pos = 0;
  std::size_t line = 1;
  while (pos < data.size()) {
    std::size_t end = data.find('\n', pos);
    if (end == std::string::npos) end = data.size();
    std::string_view field(data.data() + pos, end - pos);
    if (!field.empty() && field.back() == '\r') field.remove_suffix(1);
    int64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() ||
        ptr != field.data() + field.size()) {
      throw UsageError("line " + std::to_string(line) +
                       ": not a signed 64-bit integer");
    }
    keys.push_back(value);
    pos = end + 1;
    ++line;
  }
  return keys;
}

std::string encode_text(const int64_t* keys, std::size_t n) {
  std::string out;
  out.reserve(n * 8);
  for (std::size_t i = 0; i < n; ++i) {
    out += std::to_string(keys[i]);
    out += '\n';
  }
  return out;
}

std::vector<int64_t> decode_bin(const std::string& data) {
  if (data.size() % 8 != 0) {
    throw UsageError("binary input size is not a multiple of 8");
  }
  std::vector<int64_t> keys(data.size() / 8);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    uint64_t v = 0;
    for (int b = 7; b >= 0; --b) {
      v = (v << 8) | static_cast<unsigned char>(data[i * 8 + b]);
    }
    keys[i] = static_cast<int64_t>(v);
  }
  return keys;
}

std::string encode_bin(const int64_t* keys, std::size_t n) {
  std::string out(n * 8, '\0');
  for (std::size_t i = 0; i < n; ++i) {
    auto v = static_cast<uint64_t>(keys[i]);
    for (int b = 0; b < 8; ++b) {
      out[i * 8 + b] = static_cast<char>(v & 0xff);
      v >>= 8;
    }
  }
  return out;
}

std::vector<int64_t> decode(const std::string& data, const std::string& format) {
  return format == "bin" ? decode_bin(data) : decode_text(data);
}

std::string encode(const int64_t* keys, std::size_t n, const std::string& format) {
  return format == "bin" ? encode_bin(keys, n) : encode_text(keys, n);
}

// ---- sort ----------------------------------------------------------------

struct SortArgs {
  std::string input;
  std::string output;
  std::string format = "text";
  bool check_invariants = false;
};

int cmd_sort(const SortArgs& a) {
  std::vector<int64_t> keys = decode(read_file(a.input), a.format);
  tsv_sort_stats stats{};
  const unsigned flags = a.check_invariants ? TSV_SORT_CHECK_INVARIANTS : 0u;
  const tsv_status s = tsv_sort_i64(keys.data(), keys.size(), flags, &stats);
  if (s == TSV_ERR_INVARIANT || s == TSV_ERR_STACK_OVERFLOW) {
    std::cerr << "invariant violation: " << tsv_last_error_message() << '\n';
    return kFailure;
  }
  if (s != TSV_OK) throw UsageError(api_error(s));
  write_file(a.output, encode(keys.data(), keys.size(), a.format));
  if (a.check_invariants) {
    std::cerr << "max_stack_depth=" << stats.max_stack_depth
              << " capacity=" << stats.stack_capacity
              << " contract_checks=" << stats.contract_checks << '\n';
  }
  return kOk;
}

// ---- gen -----------------------------------------------------------------

struct GenArgs {
  std::string kind;
  uint64_t n = 0;
  uint64_t seed = 0;
  uint64_t u = 16;
  uint64_t depth = 0;
  uint64_t alphabet = 0;
  std::string output;
  std::string format = "text";
};

int cmd_gen(const GenArgs& a) {
  tsv_gen_spec spec{};
  check_usage(tsv_gen_kind_parse(a.kind.c_str(), &spec.kind));
  spec.n = a.n;
  spec.seed = a.seed;
  spec.min_run = a.u;
  spec.alphabet = a.alphabet;
  spec.depth = a.depth;
  tsv_keys* raw = nullptr;
  check_usage(tsv_generate(&spec, &raw));
  KeysPtr keys(raw);
  write_file(a.output,
             encode(tsv_keys_data(keys.get()), tsv_keys_size(keys.get()), a.format));
  return kOk;
}

// ---- sim -----------------------------------------------------------------

struct SimArgs {
  std::string policy = "fixed";
  std::string replay;
  bool search = false;
  uint64_t max_runs = 12;
  uint64_t u = 1;
  uint64_t budget = 10'000'000;
};

std::string join(const uint64_t* v, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

// CSV fields are unquoted, so details must not carry separators.
std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

int cmd_sim(const SimArgs& a) {
  tsv_policy policy{};
  check_usage(tsv_policy_parse(a.policy.c_str(), &policy));

  if (a.search) {
    tsv_lengths* raw = nullptr;
    uint64_t nodes = 0;
    int exhausted = 0;
    check_usage(tsv_sim_search(policy, a.max_runs, a.u, a.budget, &raw, &nodes,
                               &exhausted));
    LengthsPtr found(raw);
    if (found) {
      std::cout << join(tsv_lengths_data(found.get()), tsv_lengths_size(found.get()))
                << '\n';
    } else {
      std::cout << "none\n";
    }
    std::cerr << "nodes=" << nodes << " exhausted=" << (exhausted ? "yes" : "no")
              << '\n';
    return kOk;
  }

  std::string text = a.replay;
  std::error_code ec;
  if (std::filesystem::is_regular_file(a.replay, ec)) text = read_file(a.replay);
  tsv_lengths* raw = nullptr;
  check_usage(tsv_lengths_parse(text.c_str(), &raw));
  LengthsPtr seq(raw);

  tsv_sim_trace* trace_raw = nullptr;
  check_usage(tsv_sim_replay(tsv_lengths_data(seq.get()), tsv_lengths_size(seq.get()),
                             a.u, policy, 0, &trace_raw));
  TracePtr trace(trace_raw);
  const std::size_t count = tsv_sim_trace_violation_count(trace.get());
  std::cout << "max_depth," << tsv_sim_trace_max_depth(trace.get()) << '\n';
  std::cout << "violations," << count << '\n';
  for (std::size_t i = 0; i < count; ++i) {
    uint64_t step = 0;
    const char* clause = nullptr;
    const char* detail = nullptr;
    check_usage(tsv_sim_trace_violation(trace.get(), i, &step, &clause, &detail));
    std::cout << "violation," << step << ',' << clause << ',' << csv_safe(detail)
              << '\n';
  }
  std::cout << "final_stack,"
            << join(tsv_sim_trace_final_stack(trace.get()),
                    tsv_sim_trace_final_size(trace.get()))
            << '\n';
  return count == 0 ? kOk : kFailure;
}

// ---- bench ---------------------------------------------------------------

struct BenchArgs {
  std::vector<uint64_t> sizes{1000, 10000, 100000};
  std::vector<std::string> kinds{"uniform_random", "run_structured", "ascending",
                                 "descending",     "constant",       "worst_case"};
  uint64_t repeats = 3;
  std::string csv;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<tsv_gen_kind> kinds;
  for (const auto& name : a.kinds) {
    tsv_gen_kind k{};
    check_usage(tsv_gen_kind_parse(name.c_str(), &k));
    kinds.push_back(k);
  }

  std::ostringstream csv;
  csv << "kind,n,seed,repeat,algo,nanos,max_stack_depth,comparisons\n";
  bool depth_ok = true;
  using Clock = std::chrono::steady_clock;

  for (tsv_gen_kind kind : kinds) {
    for (uint64_t n : a.sizes) {
      for (uint64_t r = 0; r < a.repeats; ++r) {
        const uint64_t seed = r;
        tsv_gen_spec spec{kind, n, seed, 0, 0, 0};
        tsv_keys* raw = nullptr;
        check_usage(tsv_generate(&spec, &raw));
        KeysPtr generated(raw);
        const int64_t* data = tsv_keys_data(generated.get());
        const std::size_t len = tsv_keys_size(generated.get());

        std::vector<int64_t> keys(data, data + len);
        tsv_sort_stats stats{};
        auto t0 = Clock::now();
        const tsv_status s = tsv_sort_i64(keys.data(), keys.size(), 0, &stats);
        auto t1 = Clock::now();
        if (s != TSV_OK) {
          std::cerr << "timsort failed: " << api_error(s) << '\n';
          return kFailure;
        }
        const uint64_t capacity = tsv_required_stack_capacity(len);
        if (stats.max_stack_depth > capacity) depth_ok = false;
        csv << tsv_gen_kind_name(kind) << ',' << len << ',' << seed << ',' << r
            << ",timsort,"
            << std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()
            << ',' << stats.max_stack_depth << ',' << stats.comparisons << '\n';

        std::vector<int64_t> ref(data, data + len);
        uint64_t comparisons = 0;
        t0 = Clock::now();
        check_usage(tsv_reference_sort_i64(ref.data(), ref.size(), &comparisons));
        t1 = Clock::now();
        if (ref != keys) {
          std::cerr << "timsort disagrees with the reference sort\n";
          return kFailure;
        }
        csv << tsv_gen_kind_name(kind) << ',' << len << ',' << seed << ',' << r
            << ",reference,"
            << std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()
            << ",0," << comparisons << '\n';
      }
    }
  }

  if (a.csv.empty() || a.csv == "-") {
    std::cout << csv.str();
  } else {
    write_file(a.csv, csv.str());
  }
  if (!depth_ok) {
    std::cerr << "stack depth exceeded the allocated capacity\n";
    return kFailure;
  }
  return kOk;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  bool quick = false;
  bool full = false;
  std::string sort_policy = "fixed";
};

void print_criterion(void*, int id, const char* name, int passed,
                     int informational, const char* detail, double seconds) {
  const char* verdict = informational ? "INFO" : passed ? "PASS" : "FAIL";
  std::printf("[%s] %d %s (%.2fs): %s\n", verdict, id, name, seconds, detail);
  std::fflush(stdout);
}

int cmd_verify(const VerifyArgs& a) {
  tsv_policy policy{};
  check_usage(tsv_policy_parse(a.sort_policy.c_str(), &policy));
  int all = 0;
  const tsv_status s = tsv_verify(a.quick ? 0 : 1, policy, print_criterion,
                                  nullptr, &all);
  if (s != TSV_OK) {
    std::cerr << "verify aborted: " << api_error(s) << '\n';
    return kFailure;
  }
  std::printf("%s\n", all ? "ALL PASS" : "FAILED");
  return all ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timsort with a verified run-stack discipline"};
  app.require_subcommand(1);

  const std::vector<std::string> formats{"text", "bin"};

  SortArgs sort_args;
  auto* sort = app.add_subcommand("sort", "Sort a file of int64 keys");
  sort->add_option("--input,-i", sort_args.input, "Input path")->required();
  sort->add_option("--output,-o", sort_args.output, "Output path")->required();
  sort->add_option("--format", sort_args.format, "text or bin")
      ->check(CLI::IsMember(formats));
  sort->add_flag("--check-invariants", sort_args.check_invariants,
                 "Check every stack contract; report max stack depth on stderr");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate an input file");
  gen->add_option("--kind", gen_args.kind,
                  "uniform_random, run_structured, ascending, descending, "
                  "constant or worst_case")
      ->required();
  gen->add_option("--n", gen_args.n, "Array length");
  gen->add_option("--seed", gen_args.seed, "PRNG seed");
  gen->add_option("--u", gen_args.u, "Minimum run length")
      ->check(CLI::PositiveNumber);
  gen->add_option("--depth", gen_args.depth,
                  "worst_case: extremal stack depth (overrides --n)");
  gen->add_option("--alphabet", gen_args.alphabet,
                  "uniform_random: number of distinct keys (0 = full range)");
  gen->add_option("--output,-o", gen_args.output, "Output path")->required();
  gen->add_option("--format", gen_args.format, "text or bin")
      ->check(CLI::IsMember(formats));

  SimArgs sim_args;
  auto* sim = app.add_subcommand("sim", "Replay or search run-length sequences");
  sim->add_option("--policy", sim_args.policy, "fixed or legacy");
  auto* replay = sim->add_option("--replay", sim_args.replay,
                                 "Comma-separated run lengths, or a file holding them");
  auto* search = sim->add_flag("--search", sim_args.search,
                               "Search for a sequence that breaks the invariant");
  replay->excludes(search);
  sim->add_option("--max-runs", sim_args.max_runs, "Search depth limit");
  sim->add_option("--u", sim_args.u, "Minimum run length")
      ->check(CLI::PositiveNumber);
  sim->add_option("--budget", sim_args.budget, "Search node budget");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time timsort against the reference sort");
  bench->add_option("--sizes", bench_args.sizes, "Array lengths")->delimiter(',');
  bench->add_option("--kinds", bench_args.kinds, "Generator kinds")->delimiter(',');
  bench->add_option("--repeats", bench_args.repeats, "Repeats per size and kind");
  bench->add_option("--csv", bench_args.csv, "CSV output path (default stdout)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  auto* quick = verify->add_flag("--quick", verify_args.quick, "Reduced workload");
  auto* full = verify->add_flag("--full", verify_args.full, "Full workload (default)");
  quick->excludes(full);
  verify->add_option("--sort-policy", verify_args.sort_policy,
                     "Collapse policy wired into the sort (legacy is a mutation test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (sort->parsed()) return cmd_sort(sort_args);
    if (gen->parsed()) return cmd_gen(gen_args);
    if (sim->parsed()) {
      if (!sim_args.search && replay->count() == 0) {
        throw UsageError("sim needs --replay or --search");
      }
      return cmd_sim(sim_args);
    }
    if (bench->parsed()) return cmd_bench(bench_args);
    if (verify->parsed()) return cmd_verify(verify_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
