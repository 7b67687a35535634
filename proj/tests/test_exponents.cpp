#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "zeroscope/exponents.hpp"

using namespace zeroscope;
using namespace zeroscope::exponents;

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(parse_rational("50/1093"), rat(50, 1093));
  EXPECT_EQ(parse_rational("-3/6"), rat(-1, 2));
  EXPECT_EQ(parse_rational("0.51118"), rat(51118, 100000));
  EXPECT_EQ(parse_rational("7"), rat(7));
  EXPECT_EQ(to_string(rat(1143, 2236)), "1143/2236");
  EXPECT_THROW(parse_rational("1/0"), domain_error);
  EXPECT_THROW(parse_rational("abc"), domain_error);
}

TEST(LinFrac, ArithmeticAndEvaluation) {
  const auto f = LinFrac::frac(1, rat(-9, 2));
  EXPECT_EQ(f(rat(0)), rat(1, 2));
  EXPECT_EQ(f(rat(2, 9)), rat(0));
  EXPECT_EQ(LinFrac::constant(rat(1, 3))(rat(5, 7)), rat(1, 3));
  EXPECT_EQ((f - f)(rat(1, 10)), rat(0));
  EXPECT_EQ((f * 2)(rat(1, 10)), 2 * f(rat(1, 10)));
  EXPECT_EQ(rho_upper_from_size(), LinFrac::frac(rat(4, 15), rat(-1, 15)));
  // R = X^{1/2}/Q with Q = X^{1/(2+w)}: ρ = 1/2 - 1/(2+w) = w/(2(2+w)).
  EXPECT_EQ(rho_lower_from_main_term()(rat(1, 10)), rat(1, 2) - rat(10, 21));
}

TEST(Sup, FullSystem) {
  const auto r = sup_varpi();
  ASSERT_TRUE(r.value.is_rational());
  // δ-window: 242w/75 < (2+w)/12 - w/2 after clearing (2+w), i.e. 1093w < 50.
  EXPECT_EQ(r.value.a, rat(50, 1093));
  EXPECT_EQ(r.binding, "delta");
  EXPECT_FALSE(r.at_search_bound);
  EXPECT_NE(std::find(r.binding_labels.begin(), r.binding_labels.end(), "II:delta-lower"),
            r.binding_labels.end());
}

TEST(Sup, FeasibilityBracketsTheSupremum) {
  EXPECT_TRUE(feasible_at(rat(0)));
  EXPECT_TRUE(feasible_at(rat(49, 1093)));
  EXPECT_TRUE(feasible_at(rat(50, 1093) - rat(1, 1000000000)));
  EXPECT_FALSE(feasible_at(rat(50, 1093)));
  EXPECT_FALSE(feasible_at(rat(51, 1093)));
}

TEST(Sup, VariantsShareTheDeltaBottleneck) {
  for (const auto& sys : {full_system(D1Variant::direct), full_system(D1Variant::displayed, false)}) {
    const auto r = sup_varpi(sys);
    EXPECT_EQ(r.value.a, rat(50, 1093));
    EXPECT_EQ(r.binding, "delta");
  }
}

TEST(Sup, SubsystemsAndSearchBound) {
  // λ alone: w/(3(2+w)) < (1/3 - w)/2 gives 3w² + 7w - 2 < 0.
  const auto lam = sup_varpi(full_system().restricted_to(Param::lambda));
  EXPECT_FALSE(lam.value.is_rational());
  EXPECT_NEAR(lam.value.to_double(), (std::sqrt(73.0) - 7.0) / 6.0, 1e-15);
  EXPECT_EQ(lam.binding, "lambda");

  const auto rho = sup_varpi(full_system().restricted_to(Param::rho));
  EXPECT_EQ(rho.value.a, rat(4, 15));

  // Without the type II δ floor the level cap 1/8 binds.
  const auto open = sup_varpi(full_system().without("II:delta-lower"));
  EXPECT_EQ(open.value.a, rat(1, 8));
}

TEST(Interval, ValuesAtFixedLevels) {
  const auto d0 = interval_for(Param::delta, rat(0));
  EXPECT_EQ(d0.lo, rat(0));
  EXPECT_EQ(d0.hi, rat(1, 12));
  EXPECT_FALSE(d0.empty);

  const auto d = interval_for(Param::delta, rat(1, 25));
  EXPECT_EQ(d.lo, rat(242, 75) * rat(1, 25) / (2 + rat(1, 25)));
  EXPECT_EQ(d.hi, rat(1, 12) - rat(1, 2) * rat(1, 25) / (2 + rat(1, 25)));
  EXPECT_FALSE(d.empty);
  EXPECT_EQ(interval_for(Param::lambda, rat(1, 25)).lo, rat(1, 153));

  const auto closed = interval_for(Param::delta, rat(50, 1093));
  EXPECT_EQ(closed.lo, closed.hi);
  EXPECT_TRUE(closed.empty);
  EXPECT_TRUE(interval_for(Param::rho, rat(50, 1093)).empty);

  EXPECT_THROW(interval_for(Param::sigma, rat(0)), domain_error);
  EXPECT_THROW(interval_for(Param::delta, rat(1, 8)), domain_error);
}

TEST(Interval, ShrinksWithLevel) {
  Rational prev_width = 1;
  for (int k = 0; k <= 45; k += 5) {
    const auto i = interval_for(Param::delta, rat(k, 1000));
    const Rational width = i.hi - i.lo;
    EXPECT_LE(width, prev_width);
    prev_width = width;
  }
}

namespace {

// Thresholds straight from the size condition Q^a N^b Y^c <= Q^2 N with
// Q = X^{1/(2+w)}, Y = X^{w/(2+w)}: N <= X^{((2-a) - c w)/((b-1)(2+w))}.
double threshold_oracle(double a, double b, double c, double w) {
  return ((2.0 - a) - c * w) / ((b - 1.0) * (2.0 + w));
}

}  // namespace

TEST(Tii, ThresholdsAtSevenSixtyFourths) {
  const auto th = tii_thresholds(rat(7, 64));
  ASSERT_EQ(th.size(), 4u);
  EXPECT_EQ(th.front(), LinFrac::frac(1, rat(-9, 2)));
  EXPECT_EQ(th.back(), LinFrac::frac(rat(50, 43), rat(-249, 43)));
  for (const auto& e : {LinFrac::frac(1, rat(-9, 2)), LinFrac::frac(rat(50, 43), rat(-249, 43)),
                        LinFrac::frac(rat(2, 3), rat(-217, 75))}) {
    EXPECT_NE(std::find(th.begin(), th.end(), e), th.end()) << e.str();
  }
  const double t = 7.0 / 64.0;
  const double abc[4][3] = {{1, 2, 4.5}, {1, 2.5, 4}, {1 + 2 * t, 2.5 - 3 * t, 3.5 - t}, {1 + 2 * t, 2 - 3 * t, 4 - t}};
  for (int k = 0; k < 4; ++k) {
    for (double w : {0.0, 0.01, 0.03, 0.045}) {
      EXPECT_NEAR(static_cast<double>(th[k](Rational(w))), threshold_oracle(abc[k][0], abc[k][1], abc[k][2], w), 1e-12);
    }
  }
}

TEST(Tii, ThetaZeroAndDomain) {
  const auto th = tii_thresholds(rat(0));
  EXPECT_EQ(th[0], LinFrac::frac(1, rat(-9, 2)));
  EXPECT_EQ(th[1], LinFrac::frac(rat(2, 3), rat(-8, 3)));
  EXPECT_THROW(tii_thresholds(rat(1, 3)), domain_error);
  EXPECT_THROW(tii_thresholds(rat(-1, 10)), domain_error);
}

TEST(Tii, SmallerThetaIsNoWorseOnTheMinimum) {
  // A smaller subconvexity exponent never lowers the binding threshold.
  const Rational lo = 0, hi = rat(50, 1093);
  for (int a = 0; a <= 7; ++a) {
    EXPECT_TRUE(min_dominates(tii_thresholds(rat(a, 64)), tii_thresholds(rat(7, 64)), lo, hi)) << a;
  }
  EXPECT_FALSE(min_dominates({LinFrac::frac(0, 0)}, tii_thresholds(rat(7, 64)), lo, hi));
}

TEST(Eta, ReductionMatchesTheSurvivingTerms) {
  const Rational th = rat(7, 64);
  const auto& surv = theta_table();
  const std::array<Rational, 3> r0 = reduce_eta(at_theta(eta_table()[0], th));
  EXPECT_EQ(r0, at_theta(surv[0], th));
  const auto r2 = reduce_eta(at_theta(eta_table()[2], th));
  EXPECT_EQ(r2, at_theta(surv[2], th));
  const auto r3 = reduce_eta(at_theta(eta_table()[3], th));
  EXPECT_EQ(r3, at_theta(surv[3], th));
  // Hand reduction of the first term: Q^1 N^{3-1} Y^{-1/2+1+max(0,1/2)+max(0,7/2,7/2)}.
  EXPECT_EQ(r0[1], rat(2));
  EXPECT_EQ(r0[2], rat(9, 2));
}

TEST(Majorization, LpAgreesWithSampling) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Rational th = rat(7, 64);
  const auto e1 = at_theta(eta_table()[0], th);
  for (int k = 1; k <= 6; ++k) {
    const auto r = majorization_check(k, th);
    const auto ek = at_theta(eta_table()[k - 1], th);
    auto diff = [&](const std::vector<double>& x) {
      double s = 0.0;
      for (int i = 0; i < 6; ++i) s += static_cast<double>(ek[i] - e1[i]) * x[i];
      return s;
    };
    double best = -1e300;
    for (int trial = 0; trial < 20000; ++trial) {
      std::vector<double> x(6);
      for (auto& v : x) v = u(rng);
      // Push into the cone: Q₀ <= Y, D + D₁ <= Y.
      x[5] = std::min(x[5], x[2]);
      const double dd = x[3] + x[4];
      if (dd > x[2]) {
        x[3] *= x[2] / dd;
        x[4] *= x[2] / dd;
      }
      best = std::max(best, diff(x));
    }
    if (r.majorized) {
      EXPECT_LE(best, 1e-12) << k;
    } else {
      EXPECT_GT(best, 0.0) << k;
      ASSERT_EQ(r.witness.size(), 6u);
      std::vector<double> w(6);
      for (int i = 0; i < 6; ++i) w[i] = static_cast<double>(r.witness[i]);
      EXPECT_GT(diff(w), 0.0);
      EXPECT_LE(w[5], w[2] + 1e-15);
      EXPECT_LE(w[3] + w[4], w[2] + 1e-15);
    }
  }
  EXPECT_TRUE(majorization_check(1).majorized);
  EXPECT_THROW(majorization_check(7), domain_error);
}

TEST(KFunction, PositiveAndMonotone) {
  const double a = k_function(1, 2, 3, 4, 5, 6, rat(7, 64));
  const double b = k_function(1, 2, 3, 4, 5, 7, rat(7, 64));
  EXPECT_GT(a, 0.0);
  EXPECT_GT(b, a);
  EXPECT_THROW(k_function(0, 2, 3, 4, 5, 6, rat(7, 64)), domain_error);
  EXPECT_NEAR(k_function(1, 1, 1, 1, 1, 1, rat(0)), std::sqrt(4.0 + 2.0 + 1.0), 1e-15);
  // C^{1+4θ}((RS+N)R)^{1-2θ} falls as θ falls iff C² >= (RS+N)R.
  EXPECT_LE(k_function(100, 10, 10, 10, 10, 2, rat(7, 64)), k_function(100, 10, 10, 10, 10, 2, rat(1, 4)));
  EXPECT_GT(k_function(10, 10, 10, 10, 10, 2, rat(7, 64)), k_function(10, 10, 10, 10, 10, 2, rat(1, 4)));
}

TEST(Nonvanishing, BoundAndLimit) {
  EXPECT_EQ(nonvanishing_bound(rat(1, 25)), rat(26, 51));
  EXPECT_EQ(nonvanishing_limit(), rat(1143, 2236));
  EXPECT_EQ(nonvanishing_limit(), rat(1, 2) + rat(25, 2236));
  EXPECT_GT(nonvanishing_limit(), parse_rational("0.51118"));
  EXPECT_THROW(nonvanishing_bound(rat(50, 1093)), domain_error);
  EXPECT_THROW(nonvanishing_bound(rat(0)), domain_error);
  // Increasing in κ.
  EXPECT_LT(nonvanishing_bound(rat(1, 100)), nonvanishing_bound(rat(1, 25)));
  const Rational tiny = rat(1, 1000000);
  EXPECT_EQ(nonvanishing_bound(tiny), (1 + tiny) / (2 + tiny));
  EXPECT_EQ(to_string(nonvanishing_bound(tiny)), "1000001/2000001");
  EXPECT_NE(nonvanishing_note().find("2235"), std::string::npos);
}
