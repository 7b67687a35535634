#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>

#include "zeroscope/bandlimited.hpp"

using namespace zeroscope;

namespace {

constexpr double pi = std::numbers::pi;

/// ∫_{-ν}^{ν} φ̂(t) e(zt) dt by Gauss–Kronrod on both halves.
cplx inverse_transform(const FejerKernel& k, cplx z) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto part = [&](bool imag) {
    auto f = [&](double t) {
      const cplx v = k.hat(t) * std::exp(cplx(0.0, 2.0 * pi) * z * t);
      return imag ? v.imag() : v.real();
    };
    return GK::integrate(f, -k.nu, 0.0, 15, 1e-14) + GK::integrate(f, 0.0, k.nu, 15, 1e-14);
  };
  return {part(false), part(true)};
}

}  // namespace

TEST(Fejer, Values) {
  const FejerKernel k{2.0};
  EXPECT_DOUBLE_EQ(fejer_eval(k, 0.0).real(), 1.0);
  EXPECT_NEAR(std::abs(fejer_eval(k, 0.5)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(fejer_hat(k, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(fejer_hat(k, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(fejer_hat(k, 1.0), 0.25);
  EXPECT_DOUBLE_EQ(fejer_hat(k, -3.0), 0.0);
}

TEST(Fejer, ComplexArgumentMatchesInversion) {
  const FejerKernel k{2.0};
  const cplx z(0.1, 0.2);
  EXPECT_LT(std::abs(fejer_eval(k, z) - inverse_transform(k, z)), 1e-8);
  for (double nu : {0.5, 1.0, 2.0 + 50.0 / 1093.0}) {
    const FejerKernel kk{nu};
    for (cplx w : {cplx(0.003, 0.0), cplx(0.3, -0.1), cplx(1.7, 0.05), cplx(-2.2, 0.4)}) {
      EXPECT_LT(std::abs(fejer_eval(kk, w) - inverse_transform(kk, w)), 1e-8) << nu << " " << w;
    }
  }
}

TEST(Fejer, SeriesBranchIsContinuous) {
  const FejerKernel k{1.3};
  for (double x : {0.002, 0.0024, 0.00245, 0.0025, 0.003}) {
    const double w = pi * 1.3 * x;
    const double closed = std::pow(std::sin(w) / w, 2);
    EXPECT_NEAR(k(x), closed, 1e-14);
  }
}

TEST(Fejer, NonNegativeOnTheLine) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (double nu : {0.5, 1.0, 2.05}) {
    const FejerKernel k{nu};
    for (int i = 0; i < 2000; ++i) ASSERT_GE(k(u(rng)), 0.0);
  }
}

TEST(Fejer, FourierPairWithTailCorrection) {
  for (double nu : {1.0, 2.0}) {
    const FejerKernel k{nu};
    for (double t : {0.0, 0.3, 1.0, 1.7, 2.5}) {
      EXPECT_NEAR(fejer_fourier_check(k, t), k.hat(t), 1e-6) << nu << " " << t;
    }
  }
}

TEST(Bump, FamilyWeight) {
  const auto Phi = make_bump({0.75, 2.25}, {0.875, 2.0});
  EXPECT_EQ(Phi(1.0), 1.0);
  EXPECT_EQ(Phi(0.5), 0.0);
  EXPECT_GT(Phi(0.8), 0.0);
  EXPECT_LT(Phi(0.8), 1.0);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = Phi(0.75 + 0.125 * i / 100.0);
    ASSERT_GE(v, prev);
    prev = v;
  }
  EXPECT_THROW(make_bump({1.0, 1.0}, {1.0, 1.0}), domain_error);
  EXPECT_THROW(make_bump({0.0, 1.0}, {0.0, 0.5}), domain_error);
}

TEST(Bump, DerivativesBounded) {
  // Finite differences of the analytic first derivative up to fourth order
  // stay bounded on the rising edge.
  const auto b = make_bump({0.0, 1.0}, {0.25, 0.75});
  const double h = 1e-3;
  for (int order = 1; order <= 3; ++order) {
    double sup = 0.0;
    for (int i = 0; i <= 2500; ++i) {
      const double x = 0.25 * i / 2500.0;
      double d = 0.0;
      for (int k = 0; k <= order; ++k) {
        const double c = std::tgamma(order + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(order - k + 1.0));
        d += ((order - k) % 2 ? -1.0 : 1.0) * c * b.derivative(x + (k - 0.5 * order) * h);
      }
      sup = std::max(sup, std::abs(d / std::pow(h, order)));
    }
    EXPECT_TRUE(std::isfinite(sup));
    EXPECT_LT(sup, 1e8) << order;  // ramp width 1/8: derivatives scale like 8^k
  }
}

TEST(Bump, DerivativeMatchesDifferenceQuotient) {
  const auto b = make_bump({1.0, 2.0});
  for (double x : {1.03, 1.07, 1.1, 1.9, 1.95}) {
    const double h = 1e-6;
    EXPECT_NEAR(b.derivative(x), (b(x + h) - b(x - h)) / (2 * h), 1e-5);
  }
}

TEST(Dyadic, PartitionOfUnity) {
  for (double x : {0.001, 1.0, pi, 1e6}) {
    double s = 0.0;
    for (int j = -60; j <= 60; ++j) s += dyadic_piece(j, x);
    EXPECT_NEAR(s, 1.0, 1e-12) << x;
  }
  EXPECT_EQ(dyadic_partition_value(3.0), 0.0);
  for (int j = -60; j <= 60; ++j) {
    if (j != -1 && j != 0) EXPECT_EQ(dyadic_piece(j, 1.0), 0.0) << j;
  }
  EXPECT_THROW(dyadic_partition_value(0.0), domain_error);
}

TEST(FourierQuadrature, Oracles) {
  EXPECT_EQ(fourier_quadrature([](double) { return 0.0; }, 1.3, {0.0, 1.0}), cplx(0.0));
  const auto b = make_bump({1.0, 2.0});
  // Midpoint rule, refined until stable, as the oracle for ∫ f.
  double mid = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) mid += b(1.0 + (i + 0.5) / n);
  mid /= n;
  EXPECT_NEAR(fourier_quadrature([&](double x) { return b(x); }, 0.0, b.support).real(), mid, 1e-10);
  const FejerKernel k{1.0};
  const cplx body = fourier_quadrature([&](double x) { return k(x); }, 0.0, {-50.0, 50.0});
  // Each tail beyond 50 carries about 1/(2π²·50).
  EXPECT_NEAR(body.real(), 1.0 - 1.0 / (50.0 * pi * pi), 1e-5);
  EXPECT_NEAR(body.real() + 2.0 * fejer_cos_tail(k, 0.0, 50.0), 1.0, 1e-9);
}

TEST(TestFunction, FejerAndBumpAgreeWithTransforms) {
  const auto f = TestFunction::fejer(1.5, 2.0);
  EXPECT_DOUBLE_EQ(f(0.0), 2.0);
  EXPECT_DOUBLE_EQ(f.hat(0.0), 2.0 / 1.5);
  const auto g = TestFunction::bump({-1.0, 1.0});
  for (double x : {0.0, 0.4, 1.3, 3.0}) {
    const double direct = 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                    [&](double t) { return g.hat(t) * std::cos(2.0 * pi * x * t); }, 0.0, 1.0, 15,
                                    1e-14);
    EXPECT_NEAR(g(x), direct, 1e-10) << x;
  }
  EXPECT_THROW(TestFunction::bump({-1.0, 2.0}), domain_error);
  EXPECT_THROW(TestFunction::fejer(0.0), domain_error);
}

TEST(TestFunction, DecayConstantBoundsTheKernel) {
  for (const auto& f : {TestFunction::fejer(1.0), TestFunction::fejer(2.2), TestFunction::bump({-1.0, 1.0})}) {
    const double c = f.decay_constant();
    for (double x = 0.5; x < 40.0; x += 0.37) ASSERT_LE(std::abs(f(x)), c / (x * x) + 1e-15) << f.descriptor();
  }
}
