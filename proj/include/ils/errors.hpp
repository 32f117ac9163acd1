#pragma once

#include <stdexcept>
#include <string>

namespace ils {

/// Input matrix failed a positive-definiteness pivot test (rank-deficient or
/// indefinite input).
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(const std::string& what)
      : std::runtime_error(what) {}
};

/// A checked 64-bit operation on an integer transform overflowed. Signals
/// pathologically conditioned input; the transform would be silently wrong
/// with wrapping arithmetic, so this is a hard error.
class IntegerOverflow : public std::runtime_error {
 public:
  explicit IntegerOverflow(const std::string& what)
      : std::runtime_error(what) {}
};

/// Reduction exceeded its swap budget. Only reachable through floating-point
/// livelock near omega = 1.
class NonTermination : public std::runtime_error {
 public:
  explicit NonTermination(const std::string& what)
      : std::runtime_error(what) {}
};

/// Ellipsoid enumeration produced more points than the caller's limit.
class CapacityExceeded : public std::runtime_error {
 public:
  explicit CapacityExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

/// The brute-force search box could not be certified to enclose the target
/// set within the allowed radius.
class BoxTooSmall : public std::runtime_error {
 public:
  explicit BoxTooSmall(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed problem or matrix file.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ils
