#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ils/errors.hpp"
#include "ils/matrix.hpp"

namespace ils {

/// A pivot at or below kPivotTol times the largest diagonal entry of the
/// input counts as loss of positive definiteness.
inline constexpr double kPivotTol = 1e-12;

/// Q = Uᵀ D U with U unit upper-triangular and D a positive diagonal.
struct UduFactorization {
  Matrix u;
  std::vector<double> d;

  int size() const { return static_cast<int>(d.size()); }
};

/// Q = Rᵀ R with R upper-triangular, positive diagonal. R = D^{1/2} U.
struct CholeskyUpper {
  Matrix r;

  int size() const { return r.rows(); }
};

namespace detail {

inline double pivot_floor(const SpdMatrix& q) {
  double max_diag = 0.0;
  for (int i = 0; i < q.size(); ++i) max_diag = std::max(max_diag, q(i, i));
  return kPivotTol * max_diag;
}

}  // namespace detail

/// Right-looking symmetric elimination. D is produced without square roots so
/// the d_j feeding the reduction inequality tests are as sharp as possible.
inline UduFactorization udu_factorize(const SpdMatrix& q) {
  const int n = q.size();
  Matrix a = q.matrix();  // working copy; only the upper triangle is touched
  Matrix u = Matrix::identity(n);
  std::vector<double> d(n, 0.0);
  const double floor = detail::pivot_floor(q);

  for (int i = 0; i < n; ++i) {
    const double pivot = a(i, i);
    if (!(pivot > floor))
      throw NotPositiveDefinite("udu_factorize: pivot " + std::to_string(pivot) +
                                " at index " + std::to_string(i));
    d[i] = pivot;
    for (int j = i + 1; j < n; ++j) u(i, j) = a(i, j) / pivot;
    for (int r = i + 1; r < n; ++r) {
      const double f = d[i] * u(i, r);
      for (int c = r; c < n; ++c) a(r, c) -= f * u(i, c);
    }
  }
  return {std::move(u), std::move(d)};
}

inline CholeskyUpper cholesky_upper(const SpdMatrix& q) {
  const int n = q.size();
  Matrix r(n, n);
  const double floor = detail::pivot_floor(q);

  for (int i = 0; i < n; ++i) {
    double pivot = q(i, i);
    for (int k = 0; k < i; ++k) pivot -= r(k, i) * r(k, i);
    if (!(pivot > floor))
      throw NotPositiveDefinite("cholesky_upper: pivot " + std::to_string(pivot) +
                                " at index " + std::to_string(i));
    const double rii = std::sqrt(pivot);
    r(i, i) = rii;
    for (int j = i + 1; j < n; ++j) {
      double acc = q(i, j);
      for (int k = 0; k < i; ++k) acc -= r(k, i) * r(k, j);
      r(i, j) = acc / rii;
    }
  }
  return {std::move(r)};
}

/// Dilute orthogonality defect of the basis described by (U, D), by the
/// logarithmic formula
///   log(defect) = 1/(2n) Σ_{j>1} log(1 + Σ_{i<j} (d_i/d_j) u_{i,j}²).
/// Always ≥ 1; exactly 1 for a diagonal quadratic form.
inline double defect_log(const UduFactorization& f) {
  const int n = f.size();
  double acc = 0.0;
  for (int j = 1; j < n; ++j) {
    double inner = 0.0;
    for (int i = 0; i < j; ++i)
      inner += (f.d[i] / f.d[j]) * f.u(i, j) * f.u(i, j);
    acc += std::log1p(inner);
  }
  return std::exp(acc / (2.0 * n));
}

/// Same defect from the definition, ( Π_j e_jᵀ(MᵀQM)e_j / det Q )^{1/(2n)},
/// where the columns of the unimodular M describe the basis. det Q comes from
/// the UDU diagonal, never from a general determinant expansion. Evaluated in
/// log space to dodge overflow for large n.
inline double defect_direct(const SpdMatrix& q, const IntMatrix& m) {
  const int n = q.size();
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("defect_direct: transform shape mismatch");

  const UduFactorization f = udu_factorize(q);
  double log_det = 0.0;
  for (const double dj : f.d) log_det += std::log(dj);

  double log_prod = 0.0;
  std::vector<double> col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = static_cast<double>(m(i, j));
    // e_jᵀ MᵀQM e_j = colᵀ Q col
    double norm_sq = 0.0;
    for (int r = 0; r < n; ++r) {
      double acc = 0.0;
      for (int c = 0; c < n; ++c) acc += q(r, c) * col[c];
      norm_sq += col[r] * acc;
    }
    if (!(norm_sq > 0.0))
      throw NotPositiveDefinite("defect_direct: non-positive basis vector norm");
    log_prod += std::log(norm_sq);
  }
  return std::exp((log_prod - log_det) / (2.0 * n));
}

}  // namespace ils
