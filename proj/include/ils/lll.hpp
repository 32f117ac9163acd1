#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ils/errors.hpp"
#include "ils/factorization.hpp"
#include "ils/matrix.hpp"
#include "ils/numeric.hpp"
#include "ils/unimodular.hpp"

namespace ils {

inline constexpr double kDefaultOmega = 0.99;

/// Working state of a reduction run. Two congruences hold throughout:
///   UᵀDU == MᵀQM      (Q the original form)
///   M·vhat == original float solution
/// vhat is co-transformed by the inverse of each elementary factor as it is
/// applied, so M⁻¹ is never formed.
struct ReductionState {
  UduFactorization factors;
  UnimodularTransform transform;
  std::vector<double> vhat;
  double omega = kDefaultOmega;

  int size() const { return factors.size(); }
};

struct LllReport {
  long long swap_count = 0;
  long long reduce_count = 0;
  double defect_before = 1.0;
  double defect_after = 1.0;
  double omega = kDefaultOmega;
};

/// Size-reduce entry (i, j), i < j: column j of U gets −⌊u_{i,j}⌉ times
/// column i (rows ≤ i only; the rest are zero), the transform follows, and
/// vhat picks up the inverse factor. Afterwards |u_{i,j}| ≤ 1/2. A no-op when
/// the entry already rounds to zero.
inline void reduce_entry(ReductionState& s, int i, int j) {
  if (i < 0 || j <= i || j >= s.size())
    throw std::invalid_argument("reduce_entry: bad level pair");
  Matrix& u = s.factors.u;
  const std::int64_t mu = round_half_down(u(i, j));
  if (mu == 0) return;
  const double mu_d = static_cast<double>(mu);
  for (int r = 0; r <= i; ++r) u(r, j) -= u(r, i) * mu_d;
  s.transform.reduce_column(i, j, mu);
  s.vhat[i] += mu_d * s.vhat[j];
}

namespace detail {

// Shared body of SwapRestore (mu = 0) and ReduceSwapRestore (mu = ⌊u⌉).
// Columns (j−1, j) are reduce-swapped and the triangular structure restored:
//   d̄_{j−1} = d_j + ŭ²d_{j−1},  d̄_j = d_j·d_{j−1}/d̄_{j−1},  ū = ŭ·d_{j−1}/d̄_{j−1}
// with ŭ = u − mu. U ← G_j·U·M_j, where the 2×2 diagonal block is written
// directly as [[1, ū],[0, 1]].
inline void swap_restore_impl(ReductionState& s, int j, std::int64_t mu) {
  const int n = s.size();
  if (j < 1 || j >= n) throw std::invalid_argument("swap_restore: bad level");
  Matrix& u = s.factors.u;
  std::vector<double>& d = s.factors.d;
  const int a = j - 1, b = j;

  const double mu_d = static_cast<double>(mu);
  const double ubreve = u(a, b) - mu_d;
  const double da = d[a], db = d[b];
  const double da_bar = db + ubreve * ubreve * da;
  const double ratio = da / da_bar;
  const double db_bar = db * ratio;
  const double ubar = ubreve * ratio;

  // rows (a, b), columns right of the pair: left factor G_j
  for (int k = b + 1; k < n; ++k) {
    const double x = u(a, k), y = u(b, k);
    u(a, k) = ubar * x + (1.0 - ubreve * ubar) * y;
    u(b, k) = x - ubreve * y;
  }
  // rows above the pair, columns (a, b): right factor M_j
  for (int i = 0; i < a; ++i) {
    const double x = u(i, a), y = u(i, b);
    u(i, a) = y - mu_d * x;
    u(i, b) = x;
  }
  u(a, a) = 1.0;
  u(a, b) = ubar;
  u(b, a) = 0.0;
  u(b, b) = 1.0;

  d[a] = da_bar;
  d[b] = db_bar;

  s.transform.swap_pair(j, mu);

  // vhat ← M_j⁻¹ vhat, M_j⁻¹ = [[0, 1], [1, mu]] on components (a, b)
  const double va = s.vhat[a], vb = s.vhat[b];
  s.vhat[a] = vb;
  s.vhat[b] = va + mu_d * vb;
}

inline void check_omega(double omega) {
  if (!(omega > 0.25) || !(omega <= 1.0))
    throw std::invalid_argument("omega must lie in (1/4, 1]");
}

inline long long swap_budget(int n) {
  // Termination guard for the omega = 1 limit: 10·n²·64 swaps.
  return 640LL * n * n;
}

}  // namespace detail

/// Swap columns (j−1, j) and restore the factorization, without size-reducing
/// the pair entry first.
inline void swap_restore(ReductionState& s, int j) {
  detail::swap_restore_impl(s, j, 0);
}

/// Size-reduce u_{j−1,j}, then swap columns (j−1, j) and restore.
inline void reduce_swap_restore(ReductionState& s, int j) {
  if (j < 1 || j >= s.size())
    throw std::invalid_argument("reduce_swap_restore: bad level");
  detail::swap_restore_impl(s, j, round_half_down(s.factors.u(j - 1, j)));
}

/// Original reduction loop: one-step up-and-down over the level index, each
/// visit size-reducing the pair entry, testing d_j ≥ (ω − u²_{j−1,j})d_{j−1},
/// and either swap-restoring and stepping down or size-reducing the rest of
/// the column and stepping up.
inline std::pair<ReductionState, LllReport> lll_original(
    const SpdMatrix& q, std::span<const double> vhat0,
    double omega = kDefaultOmega) {
  detail::check_omega(omega);
  const int n = q.size();
  if (static_cast<int>(vhat0.size()) != n)
    throw std::invalid_argument("lll_original: float solution has wrong length");

  ReductionState s{udu_factorize(q), UnimodularTransform(n),
                   std::vector<double>(vhat0.begin(), vhat0.end()), omega};
  LllReport rep;
  rep.omega = omega;
  rep.defect_before = defect_log(s.factors);

  Matrix& u = s.factors.u;
  std::vector<double>& d = s.factors.d;
  const long long budget = detail::swap_budget(n);

  int j = 1;
  while (j < n) {
    if (std::abs(u(j - 1, j)) > 0.5) {
      reduce_entry(s, j - 1, j);
      ++rep.reduce_count;
    }
    const double uu = u(j - 1, j);
    if (d[j] < (omega - uu * uu) * d[j - 1]) {
      swap_restore(s, j);
      if (++rep.swap_count > budget)
        throw NonTermination("lll_original: swap budget exhausted");
      j = std::max(j - 1, 1);
    } else {
      for (int i = j - 2; i >= 0; --i)
        if (std::abs(u(i, j)) > 0.5) {
          reduce_entry(s, i, j);
          ++rep.reduce_count;
        }
      ++j;
    }
  }

  rep.defect_after = defect_log(s.factors);
  return {std::move(s), rep};
}

/// Delayed size-reduction variant: the loop enforces only the ordering
/// condition — written as d̄_{j−1} < ω·d_{j−1} with d̄_{j−1} = d_j + ŭ²d_{j−1}
/// — reducing the pair entry merely as part of a swap; one full size-reduction
/// sweep runs after the loop. Typically about twice as fast as the original.
inline std::pair<ReductionState, LllReport> lll_delayed(
    const SpdMatrix& q, std::span<const double> vhat0,
    double omega = kDefaultOmega) {
  detail::check_omega(omega);
  const int n = q.size();
  if (static_cast<int>(vhat0.size()) != n)
    throw std::invalid_argument("lll_delayed: float solution has wrong length");

  ReductionState s{udu_factorize(q), UnimodularTransform(n),
                   std::vector<double>(vhat0.begin(), vhat0.end()), omega};
  LllReport rep;
  rep.omega = omega;
  rep.defect_before = defect_log(s.factors);

  Matrix& u = s.factors.u;
  std::vector<double>& d = s.factors.d;
  const long long budget = detail::swap_budget(n);

  int j = 1;
  while (j < n) {
    const double uu = u(j - 1, j);
    const bool reduce_option = std::abs(uu) > 0.5;
    const double ubreve = reduce_option
                              ? uu - static_cast<double>(round_half_down(uu))
                              : uu;
    const double da_bar = d[j] + ubreve * ubreve * d[j - 1];
    if (da_bar < omega * d[j - 1]) {
      if (reduce_option)
        reduce_swap_restore(s, j);
      else
        swap_restore(s, j);
      if (++rep.swap_count > budget)
        throw NonTermination("lll_delayed: swap budget exhausted");
      j = std::max(j - 1, 1);
    } else {
      ++j;
    }
  }

  for (int jj = 1; jj < n; ++jj)
    for (int i = jj - 1; i >= 0; --i)
      if (std::abs(u(i, jj)) > 0.5) {
        reduce_entry(s, i, jj);
        ++rep.reduce_count;
      }

  rep.defect_after = defect_log(s.factors);
  return {std::move(s), rep};
}

}  // namespace ils
