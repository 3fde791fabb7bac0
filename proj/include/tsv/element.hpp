#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tsv {

/// A sort key with an opaque satellite tag. Ordering looks at `key` only;
/// `tag` rides along so stability can be observed from the outside.
struct Element {
  std::int64_t key = 0;
  std::uint64_t tag = 0;

  friend bool operator==(const Element&, const Element&) = default;
};

inline constexpr std::size_t kMinRun = 16;
inline constexpr std::size_t kMinMerge = 2 * kMinRun;
inline constexpr std::size_t kInitialMinGallop = 7;

/// Raised when a runtime contract check fails. Reaching this means the
/// implementation is wrong; no input can legitimately trigger it.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a run would be pushed onto a full run stack.
class StackOverflow : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised by the checked 64-bit arithmetic in the bound computations.
class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace tsv
