#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "ils/lll.hpp"
#include "ils/generator.hpp"
#include "ils/oracle.hpp"
#include "ils/search.hpp"
#include "support.hpp"

using namespace ils;
using namespace ils::testing;

namespace {

UduFactorization identity_form(int n) {
  return udu_factorize(SpdMatrix(Matrix::identity(n)));
}

UduFactorization form2(double u01, double d0, double d1) {
  Matrix u = Matrix::identity(2);
  u(0, 1) = u01;
  return UduFactorization{std::move(u), {d0, d1}};
}

}  // namespace

TEST_CASE("schnorr list init") {
  SchnorrList sl;
  sl.bind_weight(1.0);

  SECTION("fractional center") {
    const auto c = sl.init(0.4, 0.0);
    CHECK(c.ell == 0);
    CHECK(rel_close(c.s, 0.16, 1e-15));
    CHECK(sl.sign() == +1);  // w = -0.4 < 0, the list climbs first
  }
  SECTION("half tie goes to the lower integer") {
    const auto c = sl.init(2.5, 0.0);
    CHECK(c.ell == 2);
    CHECK(rel_close(c.s, 0.25, 1e-15));
    CHECK(sl.sign() == +1);
  }
  SECTION("exact integer center") {
    sl.bind_weight(2.0);
    const auto c = sl.init(3.0, 1.5);
    CHECK(c.ell == 3);
    CHECK(c.s == 1.5);
    CHECK(sl.sign() == -1);
  }
}

TEST_CASE("schnorr list next matches the direct formula") {
  SchnorrList sl;
  sl.bind_weight(1.0);
  sl.init(0.4, 0.0);

  const std::vector<std::int64_t> expect_ell{1, -1, 2, -2};
  const std::vector<double> expect_s{0.36, 1.96, 2.56, 5.76};
  for (std::size_t i = 0; i < expect_ell.size(); ++i) {
    const auto c = sl.next();
    CHECK(c.ell == expect_ell[i]);
    CHECK(rel_close(c.s, expect_s[i], 1e-12));
  }
}

TEST_CASE("integer center walks the descending zig-zag") {
  SchnorrList sl;
  sl.bind_weight(1.0);
  const auto c0 = sl.init(3.0, 0.0);
  CHECK(c0.ell == 3);
  std::vector<std::int64_t> ells;
  for (int i = 0; i < 4; ++i) ells.push_back(sl.next().ell);
  CHECK(ells == std::vector<std::int64_t>{2, 4, 1, 5});
}

TEST_CASE("schnorr list is sound over random trajectories") {
  SplitMix64 rng(2718);
  for (int traj = 0; traj < 10'000; ++traj) {
    const double vt = 20.0 * rng.next_unit() - 10.0;
    const double t = 5.0 * rng.next_unit();
    const double d = std::pow(10.0, 12.0 * rng.next_unit() - 6.0);
    SchnorrList sl;
    sl.bind_weight(d);

    auto c = sl.init(vt, t);
    double prev_dist = std::abs(static_cast<double>(c.ell) - vt);
    double prev_s = c.s;
    for (int step = 0; step < 10; ++step) {
      c = sl.next();
      const double dist = std::abs(static_cast<double>(c.ell) - vt);
      CHECK(dist >= prev_dist);
      CHECK(c.s >= prev_s);
      const double direct =
          t + d * (static_cast<double>(c.ell) - vt) * (static_cast<double>(c.ell) - vt);
      CHECK(rel_close(c.s, direct, 1e-12));
      prev_dist = dist;
      prev_s = c.s;
    }
  }
}

TEST_CASE("conditioned values match hand evaluation and stay cached") {
  // u01 = 0.5, vhat = (0.3, 0.7): the bootstrap fixes v1 = 1, then
  // vtilde0 = 0.3 - 0.5 (1 - 0.7) = 0.15.
  const auto f = form2(0.5, 1.0, 1.0);
  const std::vector<double> vhat{0.3, 0.7};
  SearchWorkspace ws(f, vhat);
  ws.babai_pass();
  CHECK(ws.v()[1] == 1);
  CHECK(rel_close(ws.utilde()(0, 1), 0.15, 1e-15));
  CHECK(rel_close(ws.conditioned_direct(0), 0.15, 1e-15));
  CHECK(ws.utilde()(1, 1) == 0.7);  // top level keeps the seeded diagonal
}

TEST_CASE("cached conditioned values equal direct recomputation during search") {
  SplitMix64 seeds(1001);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(seeds.next_u64() % 7);
    const auto inst = gen(InstanceKind::kRandomSpd, n, seeds.next_u64());
    const auto [st, rep] = lll_delayed(inst.q, inst.vhat, 0.99);
    SearchOptions opts;
    opts.check_cache = true;  // conditioned_ambiguity now cross-checks itself
    CHECK_NOTHROW(ds(st.factors, st.vhat, opts));
  }
}

TEST_CASE("disabling the cache changes work done, not results") {
  SplitMix64 seeds(5005);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(seeds.next_u64() % 6);
    const auto inst = gen(InstanceKind::kRandomSpd, n, seeds.next_u64());
    const auto f = udu_factorize(inst.q);

    SearchOptions cached;
    SearchOptions direct;
    direct.use_cache = false;
    const auto a = ds(f, inst.vhat, cached);
    const auto b = ds(f, inst.vhat, direct);
    CHECK(a.solutions[0].v == b.solutions[0].v);
    CHECK(a.solutions[0].q == b.solutions[0].q);
    CHECK(a.stats.cond_terms <= b.stats.cond_terms);
  }
}

TEST_CASE("babai bootstrapping") {
  SECTION("orthogonal form rounds componentwise") {
    const auto f = identity_form(2);
    const auto [v, q] = babai(f, std::vector<double>{0.4, 0.6});
    CHECK(v == std::vector<std::int64_t>{0, 1});
    CHECK(rel_close(q, 0.32, 1e-14));
  }
  SECTION("correlated two-level recursion") {
    const auto f = form2(0.8, 1.0, 1.0);
    const auto [v, q] = babai(f, std::vector<double>{0.0, 0.6});
    CHECK(v == std::vector<std::int64_t>{0, 1});
    CHECK(rel_close(q, 0.16 + 0.1024, 1e-14));
  }
  SECTION("never beats the search") {
    SplitMix64 seeds(909);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + static_cast<int>(seeds.next_u64() % 6);
      const auto inst = gen(InstanceKind::kRandomSpd, n, seeds.next_u64());
      const auto f = udu_factorize(inst.q);
      const auto [v, qb] = babai(f, inst.vhat);
      CHECK(qb >= ds(f, inst.vhat).solutions[0].q - 1e-12 * std::abs(qb));
    }
  }
}

TEST_CASE("ds on closed-form instances") {
  SECTION("orthogonal form: the bootstrap point is optimal") {
    const auto res = ds(identity_form(2), std::vector<double>{0.4, 0.6});
    CHECK(res.solutions.size() == 1);
    CHECK(res.solutions[0].v == std::vector<std::int64_t>{0, 1});
    CHECK(rel_close(res.solutions[0].q, 0.32, 1e-14));
    CHECK_FALSE(res.stats.degenerate_minimum);
  }
  SECTION("one dimension, half tie") {
    UduFactorization f{Matrix::identity(1), {2.0}};
    const auto res = ds(f, std::vector<double>{0.5});
    CHECK(res.solutions[0].v == std::vector<std::int64_t>{0});
    CHECK(rel_close(res.solutions[0].q, 0.25 * 2.0, 1e-15));
  }
  SECTION("a tied minimum raises the degenerate flag but keeps the first point") {
    const auto res = ds(identity_form(2), std::vector<double>{0.3, 0.5});
    CHECK(res.solutions[0].v == std::vector<std::int64_t>{0, 0});
    CHECK(rel_close(res.solutions[0].q, 0.34, 1e-14));
    CHECK(res.stats.degenerate_minimum);
  }
}

TEST_CASE("empty problems are rejected") {
  UduFactorization f{Matrix(0, 0), {}};
  CHECK_THROWS_AS(ds(f, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("ds equals the brute-force oracle") {
  SplitMix64 seeds(60601);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(seeds.next_u64() % 8);
    const auto kind = trial % 5 == 0 ? InstanceKind::kDiagonal
                                     : InstanceKind::kRandomSpd;
    const auto inst = gen(kind, n, seeds.next_u64());
    const auto best = brute_force_best(inst.q, inst.vhat, 1);

    // straight search in the standard basis
    const auto plain = ds(udu_factorize(inst.q), inst.vhat);
    CHECK(rel_close(plain.solutions[0].q, best[0].q, 1e-10));

    // search in the reduced basis, mapped back
    const auto [st, rep] = lll_delayed(inst.q, inst.vhat, 0.99);
    const auto red = ds(st.factors, st.vhat);
    CHECK(rel_close(red.solutions[0].q, best[0].q, 1e-10));
    const auto back = map_back(st.transform, red.solutions[0].v);
    std::vector<double> back_d(back.begin(), back.end());
    CHECK(rel_close(quad_distance(inst.q, back_d, inst.vhat),
                    red.solutions[0].q, 1e-8));
  }
}

TEST_CASE("dns on closed-form instances") {
  SECTION("one dimension, both halves of the tie") {
    const auto res = dns(identity_form(1), std::vector<double>{0.5}, 2);
    REQUIRE(res.solutions.size() == 2);
    CHECK(res.solutions[0].v == std::vector<std::int64_t>{0});
    CHECK(res.solutions[1].v == std::vector<std::int64_t>{1});
    CHECK(rel_close(res.solutions[0].q, 0.25, 1e-15));
    CHECK(rel_close(res.solutions[1].q, 0.25, 1e-15));
  }
  SECTION("three best on the orthogonal form") {
    const auto res = dns(identity_form(2), std::vector<double>{0.4, 0.6}, 3);
    REQUIRE(res.solutions.size() == 3);
    CHECK(rel_close(res.solutions[0].q, 0.32, 1e-14));
    CHECK(rel_close(res.solutions[1].q, 0.52, 1e-14));
    CHECK(rel_close(res.solutions[2].q, 0.52, 1e-14));
  }
  SECTION("ns below one is rejected") {
    CHECK_THROWS_AS(dns(identity_form(1), std::vector<double>{0.1}, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("dns equals the oracle's k best") {
  SplitMix64 seeds(70707);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(seeds.next_u64() % 6);
    const auto inst = gen(InstanceKind::kRandomSpd, n, seeds.next_u64());
    const auto f = udu_factorize(inst.q);
    const auto res = dns(f, inst.vhat, 4);
    const auto best = brute_force_best(inst.q, inst.vhat, 4);
    REQUIRE(res.solutions.size() == 4);
    for (int i = 0; i < 4; ++i)
      CHECK(rel_close(res.solutions[i].q, best[i].q, 1e-10));
    // the single-best special case degenerates to ds exactly
    const auto one = dns(f, inst.vhat, 1);
    CHECK(one.solutions[0].q == ds(f, inst.vhat).solutions[0].q);
  }
}

TEST_CASE("dsc on closed-form instances") {
  SECTION("five points of the unit-ish ball") {
    const auto res = dsc(identity_form(2), std::vector<double>{0.0, 0.0}, 1.5);
    REQUIRE(res.solutions.size() == 5);
    CHECK(res.solutions[0].q == 0.0);
    for (int i = 1; i < 5; ++i) CHECK(res.solutions[i].q == 1.0);
    std::set<std::vector<std::int64_t>> pts;
    for (const auto& s : res.solutions) pts.insert(s.v);
    CHECK(pts == std::set<std::vector<std::int64_t>>{
                     {0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  }
  SECTION("radius below the minimum yields the empty set") {
    const auto f = identity_form(2);
    const std::vector<double> vhat{0.4, 0.6};
    const double qmin = ds(f, vhat).solutions[0].q;
    const auto res = dsc(f, vhat, 0.99 * qmin);
    CHECK(res.solutions.empty());
  }
  SECTION("boundary points are included") {
    const auto res = dsc(identity_form(2), std::vector<double>{0.0, 0.0}, 1.0);
    CHECK(res.solutions.size() == 5);  // (0,0) and the four q == c points
  }
  SECTION("capacity limit raises") {
    SearchOptions opts;
    opts.capacity = 3;
    CHECK_THROWS_AS(
        dsc(identity_form(2), std::vector<double>{0.0, 0.0}, 4.0, opts),
        CapacityExceeded);
  }
  SECTION("non-positive radius is rejected") {
    CHECK_THROWS_AS(dsc(identity_form(1), std::vector<double>{0.1}, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("dsc equals the oracle's ellipsoid enumeration") {
  SplitMix64 seeds(80808);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(seeds.next_u64() % 6);
    const auto inst = gen(InstanceKind::kRandomSpd, n, seeds.next_u64());
    const auto f = udu_factorize(inst.q);
    const double qmin = ds(f, inst.vhat).solutions[0].q;
    if (qmin < 1e-12) continue;
    const double c = 2.0 * qmin;

    const auto res = dsc(f, inst.vhat, c);
    const auto oracle = brute_force_ellipsoid(inst.q, inst.vhat, c);
    REQUIRE(res.solutions.size() == oracle.size());

    std::set<std::vector<std::int64_t>> got, want;
    for (const auto& s : res.solutions) got.insert(s.v);
    for (const auto& p : oracle) want.insert(p.v);
    CHECK(got == want);

    // consistency with ds
    const auto vstar = ds(f, inst.vhat).solutions[0].v;
    CHECK(got.count(vstar) == 1);
    CHECK_FALSE(dsc(f, inst.vhat, qmin).solutions.empty());
  }
}

TEST_CASE("solution lists come out sorted by q") {
  SplitMix64 seeds(90909);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(seeds.next_u64() % 5);
    const auto inst = gen(InstanceKind::kRandomSpd, n, seeds.next_u64());
    const auto f = udu_factorize(inst.q);
    const auto multi = dns(f, inst.vhat, 5);
    CHECK(std::is_sorted(multi.solutions.begin(), multi.solutions.end(),
                         [](const Solution& a, const Solution& b) {
                           return a.q < b.q;
                         }));
    const double qmin = multi.solutions[0].q;
    if (qmin < 1e-12) continue;
    const auto cloud = dsc(f, inst.vhat, 3.0 * qmin);
    CHECK(std::is_sorted(cloud.solutions.begin(), cloud.solutions.end(),
                         [](const Solution& a, const Solution& b) {
                           return a.q < b.q;
                         }));
  }
}
