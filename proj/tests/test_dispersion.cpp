#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "zeroscope/dispersion.hpp"

using namespace zeroscope;
using namespace zeroscope::dispersion;

namespace {

const SieveTable& sieve() {
  static const SieveTable s = arith::build_sieve(40000);
  return s;
}

/// Δ(w) from value tables of every character mod w with conductor <= R.
double delta_oracle(i64 w, double X, i64 R, const SmoothBump& f) {
  const auto chars = enumerate_characters(w);
  const double phi_w = static_cast<double>(arith::euler_phi(w));
  double s = 0.0;
  for (i64 n = 2; n <= static_cast<i64>(3 * X); ++n) {
    const double lam = sieve().lambda[n];
    if (lam == 0.0 || std::gcd(n, w) != 1) continue;
    double u = (n - 1) % w == 0 ? 1.0 : 0.0;
    for (const auto& chi : chars) {
      if (chi.conductor() <= R) u -= chi(n).real() / phi_w;
    }
    s += lam * f(n / X) * u;
  }
  return s;
}

double kloosterman_oracle(i64 m, i64 n, i64 c) {
  double s = 0.0;
  for (i64 x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    const i64 xb = c == 1 ? 0 : arith::mod_inverse(x, c);
    s += std::cos(2.0 * std::numbers::pi * static_cast<double>(arith::positive_mod(m * x + n * xb, c)) / c);
  }
  return s;
}

}  // namespace

TEST(Params, LevelConsistency) {
  const auto p = DispersionParams::from_level(100.0, 0.04, 3);
  EXPECT_TRUE(p.consistent());
  auto q = p;
  q.X *= 1.01;
  EXPECT_FALSE(q.consistent());
}

TEST(DeltaW, MatchesCharacterTableOracle) {
  const auto f = make_bump({0.5, 3.0});
  for (auto [w, R] : std::vector<std::pair<i64, i64>>{{11, 1}, {12, 3}, {15, 5}, {16, 4}, {21, 7}, {30, 2}}) {
    const double a = delta_w(w, 1e4, R, f, sieve());
    const double b = delta_oracle(w, 1e4, R, f);
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(b))) << w << " " << R;
  }
  EXPECT_NEAR(delta_w(11, 1e4, 1, f, sieve()), -7.20748, 1e-4);
}

TEST(DeltaW, TrivialModulusVanishes) {
  const auto f = make_bump({0.5, 3.0});
  for (i64 R : {1, 2, 10}) EXPECT_EQ(delta_w(1, 1e4, R, f, sieve()), 0.0);
}

TEST(DeltaW, PrincipalOnlyAndFullOrthogonality) {
  const auto f = make_bump({0.5, 3.0});
  const double X = 5000;
  for (i64 w : {7, 9, 10, 13}) {
    double prog = 0.0, coprime = 0.0;
    for (i64 n = 2; n <= 3 * X; ++n) {
      const double v = sieve().lambda[n] * f(n / X);
      if (v == 0.0 || std::gcd(n, w) != 1) continue;
      coprime += v;
      if ((n - 1) % w == 0) prog += v;
    }
    const double expect = prog - coprime / arith::euler_phi(w);
    EXPECT_NEAR(delta_w(w, X, 1, f, sieve()), expect, 1e-9 * std::max(1.0, std::abs(expect)));
    // With every character admitted the progression is matched exactly.
    EXPECT_EQ(delta_w(w, X, w, f, sieve()), 0.0);
  }
}

TEST(DeltaW, SieveTooSmall) {
  const auto small = arith::build_sieve(100);
  EXPECT_THROW(delta_w(5, 1000, 1, make_bump({0.5, 3.0}), small), resource_error);
}

TEST(TKappa, NestedLoopOracle) {
  const auto f = make_bump({0.5, 3.0});
  const auto Psi = make_bump({0.5, 3.0});
  DispersionParams p;
  p.Q = 50;
  p.X = 2500;
  p.R = 3;
  double oracle = 0.0;
  for (i64 v = 1; v <= 150; ++v) {
    for (i64 w = 1; v * w <= 150; ++w) {
      const double psi = Psi(static_cast<double>(v * w) / p.Q);
      if (psi == 0.0 || arith::mobius(v) == 0) continue;
      oracle += psi * arith::mobius(v) / static_cast<double>(v) * arith::euler_phi(w) / static_cast<double>(w) *
                delta_oracle(w, p.X, p.R, f);
    }
  }
  const double got = t_kappa(p, Psi, f, sieve());
  EXPECT_NEAR(got, oracle, 1e-9 * std::abs(oracle));
  EXPECT_EQ(t_kappa(p, SmoothBump::zero(), f, sieve()), 0.0);
  p.R = 30;
  EXPECT_THROW(t_kappa(p, Psi, f, sieve()), domain_error);
}

TEST(LargeSieve, RatioAndOrthogonalityDrop) {
  const auto f = make_bump({0.5, 3.0});
  const double r2 = large_sieve_ratio(30, 1000, 2, f, sieve());
  const double r30 = large_sieve_ratio(30, 1000, 30, f, sieve());
  EXPECT_GT(r2, 0.0);
  EXPECT_TRUE(std::isfinite(r2));
  EXPECT_LT(r30, r2);
  EXPECT_THROW(large_sieve_ratio(30, 0.0, 2, f, sieve()), domain_error);
}

TEST(Kloosterman, SmallValuesAndOracle) {
  EXPECT_NEAR(kloosterman(1, 1, 2), 1.0, 1e-12);
  EXPECT_NEAR(kloosterman(1, 1, 3), -1.0, 1e-12);
  for (i64 c = 1; c <= 60; ++c) {
    for (i64 m = -5; m <= 5; ++m) {
      for (i64 n = -5; n <= 5; ++n) ASSERT_NEAR(kloosterman(m, n, c), kloosterman_oracle(m, n, c), 1e-9);
    }
  }
}

TEST(Kloosterman, WeilBoundSmallSweep) {
  const auto r = weil_sweep(120, 10);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.checked, 120LL * 21 * 21);
  EXPECT_LE(r.worst_ratio, 1.0 + 1e-12);
}

TEST(Poisson, ClosesAndDecays) {
  const auto g = make_bump({1.0, 2.0});
  double prev = std::numeric_limits<double>::infinity();
  for (i64 H : {1, 2, 4, 8}) {
    const auto r = poisson_check(g, 1000, 7, 3, H);
    EXPECT_LT(r.residual, 1e-8);
    EXPECT_LE(r.residual, prev + 1e-12);
    prev = r.residual;
  }
  // A short sum, where the dual side needs many frequencies.
  const auto s4 = poisson_check(g, 20, 7, 3, 4);
  const auto s40 = poisson_check(g, 20, 7, 3, 40);
  EXPECT_LT(s40.residual, 0.1 * s4.residual);
  const auto z = poisson_check(SmoothBump::zero(), 1000, 7, 3, 4);
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
  EXPECT_EQ(z.residual, 0.0);
  EXPECT_THROW(poisson_check(g, 1000, 6, 3, 2), domain_error);
}

TEST(Classify, Examples) {
  const auto a = classify({{1.0}, 0.05, 0.1, 0.01});
  EXPECT_EQ(a.type, CaseType::d1);
  EXPECT_EQ(a.indices, std::vector<std::size_t>{0});

  const auto b = classify({{1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.05, 0.1, 0.01});
  EXPECT_EQ(b.type, CaseType::d2);
  EXPECT_EQ(b.indices, (std::vector<std::size_t>{0, 1, 2}));

  // σ = 0.15 > 1/6 - δ/2 for δ = 0.05: outside the hypotheses.
  const ExponentTuple c{{0.2, 0.2, 0.2, 0.2, 0.2}, 0.01, 0.15, 0.05};
  EXPECT_FALSE(c.violation().empty());
  EXPECT_THROW(classify(c), domain_error);
  const auto cc = classify(c, false);
  EXPECT_EQ(cc.type, CaseType::ii);
  EXPECT_EQ(cc.indices, std::vector<std::size_t>{0});
}

TEST(Classify, GreedyAndExhaustiveWitnesses) {
  // Every entry below σ: the greedy step builds the set.
  const ExponentTuple x{std::vector<double>(20, 0.05), 0.02, 0.12, 0.02};
  ASSERT_TRUE(x.violation().empty());
  const auto c = classify(x);
  EXPECT_EQ(c.type, CaseType::ii);
  EXPECT_TRUE(witness_valid(x, c));
}

TEST(Classify, RandomSweepIsReplayable) {
  const auto a = fuzz_classifier(20000, 99, 12);
  const auto b = fuzz_classifier(20000, 99, 12);
  EXPECT_EQ(a.failures, 0u) << a.first_failure;
  EXPECT_EQ(a.by_type[0], b.by_type[0]);
  EXPECT_EQ(a.by_type[1], b.by_type[1]);
  EXPECT_EQ(a.by_type[2], b.by_type[2]);
  EXPECT_GT(a.by_type[1], 0u);  // the sweep reaches all three cases
  const auto wide = fuzz_classifier(5000, 7, 30);
  EXPECT_EQ(wide.failures, 0u) << wide.first_failure;
}

TEST(HeathBrown, Examples) {
  const auto a = heath_brown_check(8, 3, 2);
  EXPECT_NEAR(a.lhs, std::log(2.0), 1e-12);
  EXPECT_NEAR(a.rhs, std::log(2.0), 1e-9);
  EXPECT_TRUE(a.equal);
  const auto b = heath_brown_check(6, 3, 2);
  EXPECT_NEAR(b.rhs, 0.0, 1e-9);
  EXPECT_TRUE(b.equal);
  const auto c = heath_brown_check(1, 3, 2);
  EXPECT_NEAR(c.rhs, 0.0, 1e-12);
  EXPECT_THROW(heath_brown_check(9, 3, 2), domain_error);
}

TEST(HeathBrown, AgreesWithSieve) {
  for (i64 n = 1; n <= 1500; ++n) {
    const auto r = heath_brown_check(n, 3, 12);
    ASSERT_NEAR(r.rhs, sieve().lambda[n], 1e-9) << n;
  }
}
