#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ils/errors.hpp"
#include "ils/factorization.hpp"
#include "ils/matrix.hpp"
#include "ils/numeric.hpp"

namespace ils {

/// Candidate enumerator for one level. Integer candidates ℓ come out in the
/// zig-zag order m, m±1, m∓1, m±2, … of increasing distance to the float
/// conditioned value, tracked by a two-element FIFO queue (ℓ_a, ℓ_b),
/// (s_a, s_b) and an alternating sign. `init` performs the only squaring at
/// this level; every `next` extends the partial sum with the perturbation
/// step (ℓ±1 − ṽ)² = w² + (1 ± 2w), multiplication-free.
class SchnorrList {
 public:
  struct Candidate {
    std::int64_t ell;
    double s;
  };

  void bind_weight(double d) { d_ = d; }
  double weight() const { return d_; }

  Candidate init(double vtilde, double t) {
    vtilde_ = vtilde;
    t_ = t;
    const std::int64_t ell = round_half_down(vtilde);
    const double w = static_cast<double>(ell) - vtilde;
    const double s = t + d_ * (w * w);
    ell_a_ = ell_b_ = ell;
    s_a_ = s_b_ = s;
    sign_ = (w < 0.0) ? +1 : -1;
    return {ell, s};
  }

  Candidate next() {
    const double w = static_cast<double>(ell_a_) - vtilde_;
    const std::int64_t ell = ell_a_ + sign_;
    const double s = (sign_ > 0) ? s_a_ + d_ * (1.0 + 2.0 * w)
                                 : s_a_ + d_ * (1.0 - 2.0 * w);
    ell_a_ = ell_b_;
    ell_b_ = ell;
    s_a_ = s_b_;
    s_b_ = s;
    sign_ = -sign_;
    return {ell, s};
  }

  double vtilde() const { return vtilde_; }
  double t() const { return t_; }
  int sign() const { return sign_; }

 private:
  double d_ = 1.0;
  double vtilde_ = 0.0;
  double t_ = 0.0;
  std::int64_t ell_a_ = 0, ell_b_ = 0;
  double s_a_ = 0.0, s_b_ = 0.0;
  int sign_ = -1;
};

struct Solution {
  std::vector<std::int64_t> v;
  double q = 0.0;
};

struct SearchStats {
  long long nodes = 0;       // candidates examined (init + next)
  long long next_calls = 0;
  long long cond_terms = 0;  // multiply-accumulate terms spent on conditioned values
  bool degenerate_minimum = false;  // a second point with q == q̌ surfaced at level 1
};

/// Solutions are ordered by non-decreasing q.
struct SolveResult {
  std::vector<Solution> solutions;
  SearchStats stats;
};

struct SearchOptions {
  bool use_cache = true;    // partial-sum caching of conditioned values
  bool check_cache = false; // re-derive every cached value directly (tests)
  std::size_t capacity = 1'000'000;  // ellipsoid point limit
};

/// Mutable state of one discrete search over a fixed factorization: current
/// integer choices v with their float offsets v* = v − v̂, the partial sums
/// s and t, one Schnorr list per level, the partial-sum cache Ũ for the
/// conditioned values, and the levels at which the search last changed
/// direction (j1, j2, j2*), which decide how much of a cached row is stale.
///
/// Levels are 0-based here: level 0 is the innermost (last conditioned),
/// level n−1 the outermost. One workspace runs one search; many workspaces
/// over the same factorization may run concurrently.
class SearchWorkspace {
 public:
  SearchWorkspace(const UduFactorization& f, std::span<const double> vhat,
                  SearchOptions opts = {})
      : f_(&f),
        opts_(opts),
        n_(f.size()),
        vhat_(vhat.begin(), vhat.end()),
        v_(n_, 0),
        vstar_(n_, 0.0),
        s_(n_, 0.0),
        t_(n_, 0.0),
        utilde_(n_, n_),
        lists_(n_) {
    if (n_ < 1) throw std::invalid_argument("search: empty problem");
    if (static_cast<int>(vhat_.size()) != n_)
      throw std::invalid_argument("search: float solution has wrong length");
    for (int j = 0; j < n_; ++j) {
      lists_[j].bind_weight(f.d[j]);
      utilde_(j, j) = vhat_[j];  // diagonal seeds the conditioned-value cache
    }
  }

  /// Float conditioned value ṽ_j given that the integers above level jr are
  /// unchanged since row j of the cache was last written. Starts from the
  /// cached partial ũ_{j,jr+1} (or the seeded diagonal when jr is the top
  /// level) and folds in one term per level down to j+1, recording each
  /// partial back into the cache.
  double conditioned_ambiguity(int j, int jr) {
    if (!opts_.use_cache) jr = n_ - 1;
    const Matrix& u = f_->u;
    double acc = (jr == n_ - 1) ? utilde_(j, j) : utilde_(j, jr + 1);
    for (int k = jr; k > j; --k) {
      acc -= u(j, k) * vstar_[k];
      utilde_(j, k) = acc;
      ++stats_.cond_terms;
    }
    if (opts_.check_cache) {
      const double direct = conditioned_direct(j);
      const double scale = std::max({std::abs(direct), std::abs(acc), 1.0});
      if (std::abs(acc - direct) > 1e-12 * scale)
        throw std::logic_error("conditioned-value cache diverged from direct evaluation");
    }
    return acc;
  }

  /// Direct evaluation of ṽ_j from the current integers, no cache.
  double conditioned_direct(int j) const {
    const Matrix& u = f_->u;
    double acc = vhat_[j];
    for (int k = n_ - 1; k > j; --k) acc -= u(j, k) * vstar_[k];
    return acc;
  }

  /// Bootstrapping pass, outermost level down to 0: rounds each conditioned
  /// value, chains the partial sums, and leaves every Schnorr list and the
  /// cache initialized. Returns s_0 = q of the point formed.
  double babai_pass() {
    t_[n_ - 1] = 0.0;
    jr_ = n_ - 1;
    for (int j = n_ - 1; j >= 0; --j) {
      const double vt = conditioned_ambiguity(j, jr_);
      const auto c = lists_[j].init(vt, t_[j]);
      ++stats_.nodes;
      set_level(j, c.ell, c.s);
    }
    return s_[0];
  }

  SolveResult run_ds() {
    SolveResult out;
    const double q_babai = babai_pass();
    std::vector<std::int64_t> best_v = v_;
    double best_q = q_babai;

    bool found = false;
    bool forwards = true;
    j1_ = 0;
    j2_ = n_ - 1;
    j2star_ = 0;
    int j = 0;
    while (!found) {
      if (forwards) {
        if (j == n_ - 1) {
          found = true;
        } else {
          ++j;
          const auto c = lists_[j].next();
          ++stats_.nodes;
          ++stats_.next_calls;
          if (c.s < best_q) {
            set_level(j, c.ell, c.s);
            forwards = false;
            j2_ = j;
            j2star_ = std::max(j2_, j2star_);
          }
        }
      } else {
        --j;
        jr_ = (j < j1_) ? j2star_ : j2_;
        const double vt = conditioned_ambiguity(j, jr_);
        const auto c = lists_[j].init(vt, t_[j]);
        ++stats_.nodes;
        if (j == 0) {
          if (c.s < best_q) {
            set_level(0, c.ell, c.s);
            best_v = v_;
            best_q = c.s;
          } else if (c.s == best_q) {
            stats_.degenerate_minimum = true;  // tied boundary point, first one kept
          }
          forwards = true;
          j1_ = 0;
          j2star_ = 0;
        } else {
          if (c.s < best_q) {
            set_level(j, c.ell, c.s);
          } else {
            forwards = true;
            j1_ = j;
          }
        }
      }
    }

    out.solutions.push_back({std::move(best_v), best_q});
    out.stats = stats_;
    return out;
  }

  SolveResult run_dns(int ns) {
    if (ns < 1) throw std::invalid_argument("dns: ns must be >= 1");
    SolveResult out;
    babai_pass();

    // Working set of the ns best points so far, q non-decreasing, ties in
    // discovery order. Seeded with the bootstrap point and ns−1 of its
    // level-0 siblings, whose q values are non-decreasing by construction.
    std::vector<Solution> work;
    work.reserve(static_cast<std::size_t>(ns) + 1);
    work.push_back({v_, s_[0]});
    for (int k = 1; k < ns; ++k) {
      const auto c = lists_[0].next();
      ++stats_.nodes;
      ++stats_.next_calls;
      set_level(0, c.ell, c.s);
      work.push_back({v_, c.s});
    }
    double bound = work.back().q;  // the current ns-th best plays the role of q̌

    const auto insert_point = [&](double s) {
      const auto pos =
          std::upper_bound(work.begin(), work.end(), s,
                           [](double a, const Solution& b) { return a < b.q; });
      work.insert(pos, Solution{v_, s});
      work.pop_back();
      bound = work.back().q;
    };

    bool done = false;
    bool forwards = true;
    j1_ = 0;
    j2_ = n_ - 1;
    j2star_ = 0;
    int j = 0;
    while (!done) {
      if (forwards) {
        if (j == n_ - 1) {
          done = true;
        } else {
          ++j;
          const auto c = lists_[j].next();
          ++stats_.nodes;
          ++stats_.next_calls;
          if (c.s < bound) {
            set_level(j, c.ell, c.s);
            forwards = false;
            j2_ = j;
            j2star_ = std::max(j2_, j2star_);
          }
        }
      } else {
        --j;
        jr_ = (j < j1_) ? j2star_ : j2_;
        const double vt = conditioned_ambiguity(j, jr_);
        auto c = lists_[j].init(vt, t_[j]);
        ++stats_.nodes;
        if (j == 0) {
          // Harvest every level-0 candidate that still beats the working set.
          while (c.s < bound) {
            set_level(0, c.ell, c.s);
            insert_point(c.s);
            c = lists_[0].next();
            ++stats_.nodes;
            ++stats_.next_calls;
          }
          forwards = true;
          j1_ = 0;
          j2star_ = 0;
        } else {
          if (c.s < bound) {
            set_level(j, c.ell, c.s);
          } else {
            forwards = true;
            j1_ = j;
          }
        }
      }
    }

    out.solutions = std::move(work);
    out.stats = stats_;
    return out;
  }

  SolveResult run_dsc(double c_bound) {
    if (!(c_bound > 0.0)) throw std::invalid_argument("dsc: c must be > 0");
    SolveResult out;
    std::vector<Solution> points;

    babai_pass();
    const auto record = [&](double s) {
      if (points.size() >= opts_.capacity)
        throw CapacityExceeded("dsc: more than " + std::to_string(opts_.capacity) +
                               " points in the ellipsoid");
      points.push_back({v_, s});
    };

    // Level-0 sweep around the bootstrap point. Boundary points (s == c) are
    // admitted: the ellipsoid is closed.
    {
      SchnorrList::Candidate c{v_[0], s_[0]};
      while (c.s <= c_bound) {
        set_level(0, c.ell, c.s);
        record(c.s);
        c = lists_[0].next();
        ++stats_.nodes;
        ++stats_.next_calls;
      }
    }

    bool done = false;
    bool forwards = true;
    j1_ = 0;
    j2_ = n_ - 1;
    j2star_ = 0;
    int j = 0;
    while (!done) {
      if (forwards) {
        if (j == n_ - 1) {
          done = true;
        } else {
          ++j;
          const auto c = lists_[j].next();
          ++stats_.nodes;
          ++stats_.next_calls;
          if (c.s <= c_bound) {
            set_level(j, c.ell, c.s);
            forwards = false;
            j2_ = j;
            j2star_ = std::max(j2_, j2star_);
          }
        }
      } else {
        --j;
        jr_ = (j < j1_) ? j2star_ : j2_;
        const double vt = conditioned_ambiguity(j, jr_);
        auto c = lists_[j].init(vt, t_[j]);
        ++stats_.nodes;
        if (j == 0) {
          while (c.s <= c_bound) {
            set_level(0, c.ell, c.s);
            record(c.s);
            c = lists_[0].next();
            ++stats_.nodes;
            ++stats_.next_calls;
          }
          forwards = true;
          j1_ = 0;
          j2star_ = 0;
        } else {
          if (c.s <= c_bound) {
            set_level(j, c.ell, c.s);
          } else {
            forwards = true;
            j1_ = j;
          }
        }
      }
    }

    std::stable_sort(points.begin(), points.end(),
                     [](const Solution& a, const Solution& b) { return a.q < b.q; });
    out.solutions = std::move(points);
    out.stats = stats_;
    return out;
  }

  // introspection, mostly for tests
  const std::vector<std::int64_t>& v() const { return v_; }
  const std::vector<double>& vstar() const { return vstar_; }
  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& t() const { return t_; }
  const Matrix& utilde() const { return utilde_; }
  const SearchStats& stats() const { return stats_; }

 private:
  void set_level(int j, std::int64_t ell, double s) {
    v_[j] = ell;
    vstar_[j] = static_cast<double>(ell) - vhat_[j];
    s_[j] = s;
    if (j > 0) t_[j - 1] = s;
  }

  const UduFactorization* f_;
  SearchOptions opts_;
  int n_;
  std::vector<double> vhat_;
  std::vector<std::int64_t> v_;
  std::vector<double> vstar_;
  std::vector<double> s_, t_;
  Matrix utilde_;
  std::vector<SchnorrList> lists_;
  int j1_ = 0, j2_ = 0, j2star_ = 0, jr_ = 0;
  SearchStats stats_;
};

/// Bootstrap (Babai) point and its q value.
inline std::pair<std::vector<std::int64_t>, double> babai(
    const UduFactorization& f, std::span<const double> vhat) {
  SearchWorkspace ws(f, vhat);
  const double q = ws.babai_pass();
  return {ws.v(), q};
}

/// Nearest lattice point: argmin over integer vectors of
/// q(v) = Σ_j d_j (v_j − ṽ_j)², plus q̌. Among tied minimizers the first one
/// found is kept.
inline SolveResult ds(const UduFactorization& f, std::span<const double> vhat,
                      const SearchOptions& opts = {}) {
  SearchWorkspace ws(f, vhat, opts);
  return ws.run_ds();
}

/// The ns best lattice points, q non-decreasing.
inline SolveResult dns(const UduFactorization& f, std::span<const double> vhat,
                       int ns, const SearchOptions& opts = {}) {
  SearchWorkspace ws(f, vhat, opts);
  return ws.run_dns(ns);
}

/// Every lattice point with q(v) ≤ c, boundary inclusive, q non-decreasing.
inline SolveResult dsc(const UduFactorization& f, std::span<const double> vhat,
                       double c, const SearchOptions& opts = {}) {
  SearchWorkspace ws(f, vhat, opts);
  return ws.run_dsc(c);
}

}  // namespace ils
