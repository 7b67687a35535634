#include <gtest/gtest.h>

#include <cmath>

#include "zeroscope/density.hpp"

using namespace zeroscope;
using namespace zeroscope::density;

namespace {

DirichletCharacter chi_minus_4() { return primitive_characters(4).at(0); }

}  // namespace

TEST(PrimeSide, HandComputedModFour) {
  // Only n = 3 contributes for n <= 4: χ(3) = -1, φ̂(t) = 1 - |t|.
  const double L = std::log(4.0);
  const double expect = 1.0 + 2.0 * std::log(3.0) / std::sqrt(3.0) * (1.0 - std::log(3.0) / L) / L;
  EXPECT_NEAR(explicit_prime_side(chi_minus_4(), 4.0, TestFunction::fejer(1.0)), expect, 1e-13);
  EXPECT_NEAR(expect, 1.18989595163013, 1e-13);
}

TEST(PrimeSide, EmptySumAndDomain) {
  // Q^ν < 2: the prime sum is empty and only φ̂(0) log q / L remains.
  const auto phi = TestFunction::fejer(0.5);
  const double Q = 3.0;
  EXPECT_NEAR(explicit_prime_side(chi_minus_4(), Q, phi), phi.hat(0.0) * std::log(4.0) / std::log(Q), 1e-14);
  EXPECT_THROW(explicit_prime_side(enumerate_characters(5).at(0), 10.0, TestFunction::fejer(1.0)), domain_error);
  EXPECT_THROW(explicit_prime_side(chi_minus_4(), 1.0, TestFunction::fejer(1.0)), domain_error);
  const auto small = arith::build_sieve(10);
  EXPECT_THROW(explicit_prime_side(chi_minus_4(), 100.0, TestFunction::fejer(1.0), &small), resource_error);
}

TEST(PrimeSide, LinearInTheTestFunction) {
  const auto chi = primitive_characters(7).at(1);
  const double a = explicit_prime_side(chi, 200.0, TestFunction::fejer(1.0));
  const double b = explicit_prime_side(chi, 200.0, TestFunction::fejer(1.0, 2.5));
  EXPECT_NEAR(b, 2.5 * a, 1e-12 * std::abs(b));
}

namespace {

// ψ(z) by upward recurrence then the asymptotic series.
std::complex<double> digamma_c(std::complex<double> z) {
  std::complex<double> shift = 0.0;
  while (std::abs(z) < 20.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const auto z2 = 1.0 / (z * z);
  return shift + std::log(z) - 0.5 / z -
         z2 * (1.0 / 12.0 - z2 * (1.0 / 120.0 - z2 * (1.0 / 252.0 - z2 * (1.0 / 240.0 - z2 / 132.0))));
}

}  // namespace

TEST(Archimedean, MatchesDirectDigammaIntegral) {
  // (1/2π) ∫ φ(Lr/2π) Re ψ(1/4 + a/2 + ir/2) dr by trapezoid on a long window.
  const auto phi = TestFunction::fejer(1.0);
  const double L = std::log(50.0);
  for (int a : {0, 1}) {
    const double R = 3000.0, h = 0.02;
    double s = 0.0;
    for (double r = -R; r <= R; r += h) {
      s += phi(L * r / (2.0 * pi)) * digamma_c({0.25 + 0.5 * a, r / 2.0}).real() * h;
    }
    s /= 2.0 * pi;
    EXPECT_NEAR(archimedean_term(a, L, phi), s, 2e-3) << a;
  }
}

TEST(ExplicitBalance, ExactModeClosesForSmallModuli) {
  const auto phi = TestFunction::fejer(1.0);
  for (i64 q : {4, 5, 7, 8, 11}) {
    for (const auto& chi : primitive_characters(q)) {
      const auto r = explicit_balance(chi, 100.0, phi, 60.0, BalanceMode::exact);
      EXPECT_TRUE(r.within_budget()) << chi.id() << " residual " << r.residual << " budget " << r.budget;
      EXPECT_GT(r.zeros_used, 0u);
    }
  }
}

TEST(ExplicitBalance, ResidualShrinksWithHeight) {
  const auto phi = TestFunction::fejer(1.0);
  const auto chi = chi_minus_4();
  const auto a = explicit_balance(chi, 100.0, phi, 20.0, BalanceMode::exact);
  const auto b = explicit_balance(chi, 100.0, phi, 80.0, BalanceMode::exact);
  EXPECT_LT(std::abs(b.residual), std::abs(a.residual));
  EXPECT_LT(b.tail, a.tail);
}

TEST(ExplicitBalance, ApproximateModeAcrossModuli) {
  // The omitted archimedean and conductor terms are O(1/log q), so the
  // residual shrinks along q = Q prime.
  const auto phi = TestFunction::fejer(1.0);
  for (std::size_t k : {1, 2}) {
    double prev = std::numeric_limits<double>::infinity();
    for (i64 q : {101, 401, 1009}) {
      const auto chi = primitive_characters(q).at(k);
      const auto r = explicit_balance(chi, static_cast<double>(q), phi, 20.0, BalanceMode::approximate);
      EXPECT_TRUE(r.within_budget()) << q << " residual " << r.residual << " budget " << r.budget;
      EXPECT_LT(std::abs(r.residual), prev) << q;
      prev = std::abs(r.residual);
    }
  }
}

TEST(ExplicitBalance, RejectsUncertifiedZeroSets) {
  lfunc::ZeroSet z;
  z.char_id = "4:1";
  z.certificate.matched = false;
  EXPECT_THROW(explicit_balance(chi_minus_4(), 100.0, TestFunction::fejer(1.0), 10.0, BalanceMode::exact,
                                nullptr, default_c_expl, z),
               completeness_error);
}

TEST(ZeroTail, BoundsTheObservedTail) {
  const auto zs = lfunc::find_zeros(lfunc::make_context(chi_minus_4()), 200.0);
  ASSERT_TRUE(zs.certificate.matched);
  for (double T : {10.0, 20.0, 50.0}) {
    double seen = 0.0;
    for (double g : zs.ordinates) {
      if (std::abs(g) > T) seen += 1.0 / (g * g);
    }
    EXPECT_LE(seen, density::detail::inverse_square_tail(4, T)) << T;
  }
  EXPECT_GT(density::detail::inverse_square_tail(4, 10.0), density::detail::inverse_square_tail(4, 20.0));
  EXPECT_THROW(density::detail::inverse_square_tail(4, 0.5), domain_error);
}

TEST(SKappa, TwoWaysAgree) {
  for (auto [Q, nu] : std::vector<std::pair<double, double>>{{12, 1.0}, {20, 1.0}, {20, 1.5}}) {
    const auto s = s_kappa_two_ways(Q, TestFunction::fejer(nu), default_psi());
    EXPECT_LT(std::abs(s.difference), 1e-10 * std::max(1.0, std::abs(s.direct))) << Q << " " << nu;
  }
}

TEST(SKappa, CoprimalityConditionMatters) {
  const auto s = s_kappa_two_ways(20, TestFunction::fejer(1.0), default_psi());
  EXPECT_GT(std::abs(s.orthog_unrestricted - s.direct), 1e-3);
}

TEST(SKappa, ZeroWeightAndThreads) {
  const auto z = s_kappa_two_ways(20, TestFunction::fejer(1.0), Weight::zero());
  EXPECT_EQ(z.direct, 0.0);
  EXPECT_EQ(z.orthog, 0.0);
  EXPECT_EQ(z.difference, 0.0);
  const auto a = s_kappa_two_ways(20, TestFunction::fejer(1.0), default_psi(), nullptr, 1);
  const auto b = s_kappa_two_ways(20, TestFunction::fejer(1.0), default_psi(), nullptr, 3);
  EXPECT_EQ(a.direct, b.direct);
  EXPECT_EQ(a.orthog, b.orthog);
}

TEST(Density, MainTermMatchesCharacterCount) {
  const auto Phi = default_family_weight();
  const auto phi = TestFunction::fejer(1.0);
  double brute = 0.0;
  for (i64 q : family_moduli(10.0, Phi)) {
    std::size_t prim = 0;
    for (const auto& chi : enumerate_characters(q)) prim += chi.conductor() == q;
    brute += Phi(q / 10.0) * static_cast<double>(prim);
  }
  EXPECT_NEAR(density_main_term(10.0, phi, Phi), phi.hat(0.0) * brute, 1e-12 * brute);
}

TEST(Density, SmallFamily) {
  const auto Phi = default_family_weight();
  const auto phi = TestFunction::fejer(1.0);
  DensityOptions one;
  one.threads = 1;
  DensityOptions many;
  many.threads = 3;
  const auto a = one_level_density(10.0, phi, Phi, 20.0, one);
  const auto b = one_level_density(10.0, phi, Phi, 20.0, many);
  EXPECT_GE(a.lhs, 0.0);
  EXPECT_EQ(a.lhs, b.lhs);
  EXPECT_EQ(a.rhs, density_main_term(10.0, phi, Phi));
  EXPECT_NEAR(a.ratio, a.lhs / a.rhs, 1e-15);
  EXPECT_TRUE(a.excluded.empty());
  EXPECT_EQ(a.rows.size(), family_moduli(10.0, Phi).size());

  // φ >= 0, so widening the window only adds zeros.
  const auto c = one_level_density(10.0, phi, Phi, 30.0, one);
  EXPECT_GE(c.lhs, a.lhs);
  EXPECT_LT(c.tail, a.tail);
  EXPECT_THROW(one_level_density(10.0, phi, Phi, 0.5), domain_error);
}

TEST(Nonvanishing, ProportionsAndBound) {
  const auto all = nonvanishing_proportion(20.0, std::numeric_limits<double>::infinity(), 1.0 / 25.0, 10.0);
  EXPECT_EQ(all.count, 0u);
  EXPECT_EQ(all.proportion, 0.0);
  std::size_t expect_total = 0;
  for (i64 q = 10; q <= 20; ++q) expect_total += static_cast<std::size_t>(primitive_count(q));
  EXPECT_EQ(all.total, expect_total);

  const auto r = nonvanishing_proportion(20.0, 0.0, 1.0 / 25.0, 10.0);
  EXPECT_GT(r.min_abs_central, 0.0);
  EXPECT_EQ(r.count, r.total);
  EXPECT_LE(r.density_bound, r.proportion);
  EXPECT_GE(r.density_bound, 0.0);
  EXPECT_THROW(nonvanishing_proportion(2.0, 0.0), domain_error);
}

TEST(Nonvanishing, DeskScaleFamily) {
  const auto r = nonvanishing_proportion(200.0, 1e-8);
  EXPECT_GE(r.proportion, 0.51118);
  EXPECT_LE(r.density_bound, r.proportion);
  EXPECT_GT(r.total, 5000u);
}
