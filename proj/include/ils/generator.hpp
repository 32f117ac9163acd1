#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ils/matrix.hpp"

namespace ils {

/// SplitMix64. Fully specified by its constants, so streams are reproducible
/// anywhere:
///   state += 0x9E3779B97F4A7C15
///   z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9
///   z = (z ^ z>>27) * 0x94D049BB133111EB;  return z ^ z>>31
/// Uniform doubles take the top 53 bits; normals come from Box-Muller on
/// those uniforms. No platform RNG anywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

enum class InstanceKind { kRandomSpd, kIllConditioned, kDiagonal };

inline const char* to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kRandomSpd: return "random-spd";
    case InstanceKind::kIllConditioned: return "ill-conditioned";
    case InstanceKind::kDiagonal: return "diagonal";
  }
  return "?";
}

inline InstanceKind instance_kind_from_string(const std::string& s) {
  if (s == "random-spd") return InstanceKind::kRandomSpd;
  if (s == "ill-conditioned") return InstanceKind::kIllConditioned;
  if (s == "diagonal") return InstanceKind::kDiagonal;
  throw std::invalid_argument("unknown instance kind: " + s);
}

struct ProblemInstance {
  SpdMatrix q;
  std::vector<double> vhat;
  std::uint64_t seed = 0;
  InstanceKind kind = InstanceKind::kRandomSpd;
};

namespace gen_detail {

// Random rotation by modified Gram-Schmidt on a matrix of normals. Rows end up
// orthonormal; a fresh draw replaces any degenerate row (never seen in
// practice).
inline Matrix random_rotation(int n, SplitMix64& rng) {
  Matrix rot(n, n);
  for (int i = 0; i < n; ++i) {
    while (true) {
      for (int j = 0; j < n; ++j) rot(i, j) = rng.next_normal();
      for (int k = 0; k < i; ++k) {
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += rot(i, j) * rot(k, j);
        for (int j = 0; j < n; ++j) rot(i, j) -= dot * rot(k, j);
      }
      double norm_sq = 0.0;
      for (int j = 0; j < n; ++j) norm_sq += rot(i, j) * rot(i, j);
      if (norm_sq > 1e-12) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (int j = 0; j < n; ++j) rot(i, j) *= inv;
        break;
      }
    }
  }
  return rot;
}

}  // namespace gen_detail

/// Deterministic synthetic instances; the same (kind, n, seed) always yields
/// bit-identical bytes.
///   random-spd:      Q = AᵀA + n·1e-3·I, A standard normal.
///   ill-conditioned: Q = RᵀΛR, Λ log-uniformly spaced over [1, 1e6],
///                    R a random rotation. High defect in the standard basis.
///   diagonal:        positive diagonal, log-uniform in [0.1, 10].
/// The float solution is standard normal, drawn after Q.
inline ProblemInstance gen(InstanceKind kind, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen: n must be >= 1");
  SplitMix64 rng(seed);
  Matrix q(n, n);

  switch (kind) {
    case InstanceKind::kRandomSpd: {
      Matrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.next_normal();
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double acc = 0.0;
          for (int k = 0; k < n; ++k) acc += a(k, i) * a(k, j);
          if (i == j) acc += n * 1e-3;
          q(i, j) = acc;
          q(j, i) = acc;
        }
      break;
    }
    case InstanceKind::kIllConditioned: {
      std::vector<double> lambda(n);
      for (int i = 0; i < n; ++i)
        lambda[i] = (n == 1) ? 1.0
                             : std::pow(10.0, 6.0 * static_cast<double>(i) /
                                                  static_cast<double>(n - 1));
      const Matrix rot = gen_detail::random_rotation(n, rng);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double acc = 0.0;
          for (int k = 0; k < n; ++k) acc += lambda[k] * rot(k, i) * rot(k, j);
          q(i, j) = acc;
          q(j, i) = acc;
        }
      break;
    }
    case InstanceKind::kDiagonal: {
      for (int i = 0; i < n; ++i)
        q(i, i) = std::pow(10.0, 2.0 * rng.next_unit() - 1.0);
      break;
    }
  }

  std::vector<double> vhat(n);
  for (int i = 0; i < n; ++i) vhat[i] = rng.next_normal();

  return {SpdMatrix(std::move(q)), std::move(vhat), seed, kind};
}

}  // namespace ils
