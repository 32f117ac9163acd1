#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ils/factorization.hpp"
#include "ils/generator.hpp"
#include "ils/matrix.hpp"
#include "ils/unimodular.hpp"

namespace ils::testing {

inline bool rel_close(double a, double b, double tol) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= tol * scale;
}

inline Matrix reconstruct_udu(const UduFactorization& f) {
  const int n = f.size();
  Matrix q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k <= std::min(i, j); ++k)
        acc += f.d[k] * f.u(k, i) * f.u(k, j);
      q(i, j) = acc;
    }
  return q;
}

inline Matrix reconstruct_cholesky(const CholeskyUpper& ch) {
  return matmul(transposed(ch.r), ch.r);
}

inline Matrix sqrt_d_times_u(const UduFactorization& f) {
  const int n = f.size();
  Matrix r(n, n);
  for (int i = 0; i < n; ++i) {
    const double s = std::sqrt(f.d[i]);
    for (int j = i; j < n; ++j) r(i, j) = s * f.u(i, j);
  }
  return r;
}

inline SpdMatrix spd2(double a, double b, double c) {
  Matrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = b;
  m(1, 1) = c;
  return SpdMatrix(std::move(m));
}

/// MᵀQM with the upper triangle mirrored so the result is bit-symmetric.
inline SpdMatrix congruence_transform(const SpdMatrix& q, const IntMatrix& m) {
  const int n = q.size();
  Matrix out(n, n);
  std::vector<double> qm(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r) {
        double row = 0.0;
        for (int c = 0; c < n; ++c) row += q(r, c) * static_cast<double>(m(c, j));
        acc += static_cast<double>(m(r, i)) * row;
      }
      out(i, j) = acc;
      out(j, i) = acc;
    }
  return SpdMatrix(std::move(out));
}

/// Random unimodular matrix built from elementary column operations, entries
/// kept within ±max_entry.
inline IntMatrix random_unimodular(int n, SplitMix64& rng,
                                   std::int64_t max_entry = 5) {
  IntMatrix m = IntMatrix::identity(n);
  if (n == 1) {
    if (rng.next_u64() & 1)
      m(0, 0) = -1;
    return m;
  }
  const int ops = 4 * n;
  int done = 0;
  int attempts = 0;
  while (done < ops && attempts < 200 * ops) {
    ++attempts;
    const int i = static_cast<int>(rng.next_u64() % n);
    int j = static_cast<int>(rng.next_u64() % n);
    while (j == i) j = static_cast<int>(rng.next_u64() % n);
    const std::int64_t mu = static_cast<std::int64_t>(rng.next_u64() % 5) - 2;
    if (mu == 0) {  // column swap keeps |det| = 1
      for (int r = 0; r < n; ++r) std::swap(m(r, i), m(r, j));
      ++done;
      continue;
    }
    bool ok = true;
    std::vector<std::int64_t> next(n);
    for (int r = 0; r < n; ++r) {
      next[r] = m(r, j) + mu * m(r, i);
      if (std::llabs(next[r]) > max_entry) ok = false;
    }
    if (!ok) continue;
    for (int r = 0; r < n; ++r) m(r, j) = next[r];
    ++done;
  }
  return m;
}

/// Exact determinant by fraction-free (Bareiss) elimination over __int128.
/// Returns nullopt if an intermediate would overflow.
inline std::optional<std::int64_t> exact_determinant(const IntMatrix& m) {
  const int n = m.rows();
  std::vector<__int128> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = m(i, j);
  const auto at = [&](int i, int j) -> __int128& {
    return a[static_cast<std::size_t>(i) * n + j];
  };
  constexpr __int128 kLimit = (static_cast<__int128>(1) << 126);
  const auto mul = [&](__int128 x, __int128 y) -> std::optional<__int128> {
    if (x != 0 && (y > kLimit / (x < 0 ? -x : x) || y < -(kLimit / (x < 0 ? -x : x))))
      return std::nullopt;
    return x * y;
  };

  int sign = 1;
  __int128 prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int p = -1;
      for (int r = k + 1; r < n; ++r)
        if (at(r, k) != 0) {
          p = r;
          break;
        }
      if (p < 0) return 0;  // singular
      for (int c = 0; c < n; ++c) std::swap(at(k, c), at(p, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        const auto t1 = mul(at(i, j), at(k, k));
        const auto t2 = mul(at(i, k), at(k, j));
        if (!t1 || !t2) return std::nullopt;
        at(i, j) = (*t1 - *t2) / prev;
      }
    prev = at(k, k);
  }
  const __int128 det = sign * at(n - 1, n - 1);
  if (det > std::numeric_limits<std::int64_t>::max() ||
      det < std::numeric_limits<std::int64_t>::min())
    return std::nullopt;
  return static_cast<std::int64_t>(det);
}

/// ‖x − y‖²_Q, evaluated straight from Q.
inline double quad_distance(const SpdMatrix& q, std::span<const double> x,
                            std::span<const double> y) {
  const int n = q.size();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int k = 0; k < n; ++k) row += q(i, k) * (x[k] - y[k]);
    acc += (x[i] - y[i]) * row;
  }
  return acc;
}

}  // namespace ils::testing
