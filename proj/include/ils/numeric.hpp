#pragma once

#include <cmath>
#include <cstdint>

#include "ils/errors.hpp"

namespace ils {

/// Nearest integer with half-integer ties going DOWN: round_half_down(k + 1/2)
/// is k. Every rounding in this library goes through here; the discrete-search
/// tie policy depends on it.
inline std::int64_t round_half_down(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 0.5));
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw IntegerOverflow("integer transform entry overflowed in addition");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    throw IntegerOverflow("integer transform entry overflowed in subtraction");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw IntegerOverflow("integer transform entry overflowed in multiplication");
  return r;
}

}  // namespace ils
