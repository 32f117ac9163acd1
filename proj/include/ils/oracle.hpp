#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ils/errors.hpp"
#include "ils/factorization.hpp"
#include "ils/matrix.hpp"
#include "ils/numeric.hpp"

// Brute-force reference solver for small problems. Enumerates every integer
// point whose objective stays under a bound by scanning one plain conditional
// interval per level, left to right: any point with q ≤ bound has all its
// partial sums ≤ bound, so nothing can be missed. Conditioned values are
// recomputed from scratch at every visit and every reported q is re-evaluated
// straight from the quadratic form. No candidate ordering, no caching, no
// shrinking bound, no queue: none of the machinery of the search module, so
// the two routes cannot be wrong in the same way.

namespace ils {

struct OraclePoint {
  std::vector<std::int64_t> v;
  double q = 0.0;
};

namespace oracle_detail {

constexpr long long kMaxNodes = 50'000'000;

inline double quad_eval(const SpdMatrix& q, std::span<const double> vhat,
                        std::span<const std::int64_t> v) {
  const int n = q.size();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ri = static_cast<double>(v[i]) - vhat[i];
    double row = 0.0;
    for (int k = 0; k < n; ++k)
      row += q(i, k) * (static_cast<double>(v[k]) - vhat[k]);
    acc += ri * row;
  }
  return acc;
}

inline void check_dims(const SpdMatrix& q, std::span<const double> vhat) {
  if (q.size() > 10)
    throw std::invalid_argument("oracle: n must be at most 10");
  if (static_cast<int>(vhat.size()) != q.size())
    throw std::invalid_argument("oracle: float solution has wrong length");
}

inline double pad_slack(const SpdMatrix& q) {
  double max_diag = 0.0;
  for (int i = 0; i < q.size(); ++i) max_diag = std::max(max_diag, q(i, i));
  return 1e-9 * max_diag;
}

/// Hands every integer point with running sum Σ_{i ≥ j} d_i (v_i − ṽ_i)² at
/// or under `bound` to `emit`. Returns the node count; throws BoxTooSmall
/// when the enumeration region is infeasibly large.
template <typename Emit>
long long enumerate_within(const UduFactorization& f,
                           std::span<const double> vhat, double bound,
                           long long nodes_so_far, Emit&& emit) {
  const int n = f.size();
  std::vector<std::int64_t> v(n, 0), hi(n, 0);
  std::vector<double> t(n, 0.0), vt(n, 0.0);
  long long nodes = nodes_so_far;

  const auto open_level = [&](int j) {
    double cond = vhat[j];
    for (int k = j + 1; k < n; ++k)
      cond -= f.u(j, k) * (static_cast<double>(v[k]) - vhat[k]);
    vt[j] = cond;
    const double w = std::sqrt(std::max(0.0, (bound - t[j]) / f.d[j]));
    v[j] = static_cast<std::int64_t>(std::ceil(cond - w)) - 1;  // pre-increment
    hi[j] = static_cast<std::int64_t>(std::floor(cond + w));
  };

  int j = n - 1;
  t[n - 1] = 0.0;
  open_level(j);
  while (true) {
    ++v[j];
    if (v[j] > hi[j]) {
      ++j;
      if (j == n) break;
      continue;
    }
    if (++nodes > kMaxNodes)
      throw BoxTooSmall("oracle: enumeration region exceeds the node budget");
    const double w = static_cast<double>(v[j]) - vt[j];
    const double s = t[j] + f.d[j] * w * w;
    if (s > bound) continue;
    if (j == 0) {
      emit(std::span<const std::int64_t>(v));
    } else {
      t[j - 1] = s;
      --j;
      open_level(j);
    }
  }
  return nodes;
}

}  // namespace oracle_detail

/// The k smallest q-values over the integer lattice, exact, q non-decreasing.
/// The enumeration bound starts at the objective of the rounded float
/// solution and grows until the region holds k points.
inline std::vector<OraclePoint> brute_force_best(const SpdMatrix& q,
                                                 std::span<const double> vhat,
                                                 int k) {
  namespace od = oracle_detail;
  od::check_dims(q, vhat);
  if (k < 1) throw std::invalid_argument("brute_force_best: k must be >= 1");

  const double slack = od::pad_slack(q);
  const UduFactorization f = udu_factorize(q);
  std::vector<std::int64_t> seed(q.size(), 0);
  for (int j = 0; j < q.size(); ++j) seed[j] = round_half_down(vhat[j]);

  double bound = std::max(od::quad_eval(q, vhat, seed), slack);
  long long nodes = 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<OraclePoint> best;  // q non-decreasing, at most k entries
    nodes = od::enumerate_within(
        f, vhat, bound * (1.0 + 1e-9) + slack, nodes,
        [&](std::span<const std::int64_t> v) {
          const double qx = od::quad_eval(q, vhat, v);
          if (static_cast<int>(best.size()) < k || qx < best.back().q) {
            const auto pos = std::upper_bound(
                best.begin(), best.end(), qx,
                [](double a, const OraclePoint& b) { return a < b.q; });
            best.insert(pos, OraclePoint{{v.begin(), v.end()}, qx});
            if (static_cast<int>(best.size()) > k) best.pop_back();
          }
        });
    if (static_cast<int>(best.size()) == k) return best;
    bound *= 4.0;
  }
  throw BoxTooSmall("brute_force_best: could not collect " + std::to_string(k) +
                    " points within the growth budget");
}

/// Every integer point with q(v) ≤ c (boundary inclusive), exact,
/// q non-decreasing.
inline std::vector<OraclePoint> brute_force_ellipsoid(
    const SpdMatrix& q, std::span<const double> vhat, double c) {
  namespace od = oracle_detail;
  od::check_dims(q, vhat);
  if (!(c > 0.0))
    throw std::invalid_argument("brute_force_ellipsoid: c must be > 0");

  const double slack = od::pad_slack(q);
  const UduFactorization f = udu_factorize(q);

  std::vector<OraclePoint> members;
  od::enumerate_within(f, vhat, c * (1.0 + 1e-9) + slack, 0,
                       [&](std::span<const std::int64_t> v) {
                         const double qx = od::quad_eval(q, vhat, v);
                         if (qx <= c)
                           members.push_back(OraclePoint{{v.begin(), v.end()}, qx});
                       });
  std::stable_sort(members.begin(), members.end(),
                   [](const OraclePoint& a, const OraclePoint& b) {
                     return a.q < b.q;
                   });
  return members;
}

}  // namespace ils
