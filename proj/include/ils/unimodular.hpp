#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ils/matrix.hpp"
#include "ils/numeric.hpp"

namespace ils {

/// Integer change-of-basis matrix with |det| = 1. Starts as the identity and
/// only ever changes by right-multiplication with elementary unimodular
/// factors, so unimodularity holds by construction. All entry arithmetic is
/// overflow-checked.
class UnimodularTransform {
 public:
  explicit UnimodularTransform(int n) : m_(IntMatrix::identity(n)) {}

  int size() const { return m_.rows(); }
  std::int64_t operator()(int i, int j) const { return m_(i, j); }
  const IntMatrix& matrix() const { return m_; }

  /// Right-multiply by I − mu·e_i e_jᵀ: column j ← column j − mu·column i.
  void reduce_column(int i, int j, std::int64_t mu) {
    const int n = size();
    for (int r = 0; r < n; ++r)
      m_(r, j) = checked_sub(m_(r, j), checked_mul(mu, m_(r, i)));
  }

  /// Right-multiply by the reduce-swap factor [[−mu, 1], [1, 0]] acting on
  /// columns (j−1, j).
  void swap_pair(int j, std::int64_t mu) {
    const int n = size();
    const int a = j - 1, b = j;
    for (int r = 0; r < n; ++r) {
      const std::int64_t x = m_(r, a), y = m_(r, b);
      m_(r, a) = checked_sub(y, checked_mul(mu, x));
      m_(r, b) = x;
    }
  }

 private:
  IntMatrix m_;
};

/// Exact integer product M·v: the lattice point v, expressed back in the
/// standard basis.
inline std::vector<std::int64_t> map_back(const UnimodularTransform& m,
                                          std::span<const std::int64_t> v) {
  const int n = m.size();
  if (static_cast<int>(v.size()) != n)
    throw std::invalid_argument("map_back: dimension mismatch");
  std::vector<std::int64_t> out(n, 0);
  for (int i = 0; i < n; ++i) {
    std::int64_t acc = 0;
    for (int j = 0; j < n; ++j) acc = checked_add(acc, checked_mul(m(i, j), v[j]));
    out[i] = acc;
  }
  return out;
}

}  // namespace ils
