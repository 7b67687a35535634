#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zeroscope/arith.hpp"

using namespace zeroscope;
using namespace zeroscope::arith;

TEST(Sieve, SmallValues) {
  const auto s = build_sieve(100);
  EXPECT_DOUBLE_EQ(s.lambda[8], std::log(2.0));
  EXPECT_EQ(s.lambda[12], 0.0);
  EXPECT_EQ(s.mobius[30], -1);
  EXPECT_EQ(s.mobius[12], 0);
  EXPECT_EQ(s.phi[12], 4);
  EXPECT_EQ(s.phi[1], 1);
}

TEST(Sieve, MatchesTrialDivision) {
  const i64 N = 3000;
  const auto s = build_sieve(N);
  for (i64 n = 1; n <= N; ++n) {
    i64 count = 0;
    for (i64 a = 1; a <= n; ++a) count += std::gcd(a, n) == 1;
    ASSERT_EQ(s.phi[n], count) << n;
    ASSERT_EQ(s.phi[n], euler_phi(n));
    ASSERT_EQ(s.mobius[n], mobius(n));
    const auto f = factorize(n);
    const double lam = f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
    ASSERT_DOUBLE_EQ(s.lambda[n], lam) << n;
  }
}

TEST(Sieve, MobiusSumsOverDivisors) {
  const auto s = build_sieve(2000);
  for (i64 n = 1; n <= 2000; ++n) {
    i64 m = 0, p = 0;
    for (i64 d : divisors(n)) {
      m += s.mobius[d];
      p += s.phi[d];
    }
    ASSERT_EQ(m, n == 1 ? 1 : 0);
    ASSERT_EQ(p, n);
  }
}

TEST(Sieve, RejectsOverBudget) {
  EXPECT_THROW(build_sieve(1000000, 1024), resource_error);
  EXPECT_THROW(build_sieve(0), domain_error);
}

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(3, 7), 5);
  EXPECT_EQ(mod_inverse(1, 13), 1);
  EXPECT_THROW(mod_inverse(2, 4), domain_error);
  for (i64 m = 2; m < 200; ++m) {
    for (i64 a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      ASSERT_EQ(mulmod(a, mod_inverse(a, m), m), 1 % m);
    }
  }
}

TEST(PrimitiveRoot, Examples) {
  EXPECT_EQ(primitive_root(7), 3);
  EXPECT_EQ(primitive_root(4), 3);
  EXPECT_THROW(primitive_root(8), domain_error);
  EXPECT_THROW(primitive_root(15), domain_error);
}

TEST(PrimitiveRoot, GeneratesTheGroup) {
  for (i64 q : {2, 3, 4, 5, 9, 25, 27, 49, 81, 121, 125, 243, 343, 625, 1331}) {
    const i64 g = primitive_root(q);
    EXPECT_EQ(multiplicative_order(g, q, euler_phi(q)), euler_phi(q)) << q;
  }
}

TEST(Divisors, SortedAndComplete) {
  for (i64 n = 1; n <= 500; ++n) {
    const auto d = divisors(n);
    ASSERT_TRUE(std::is_sorted(d.begin(), d.end()));
    i64 brute = 0;
    for (i64 k = 1; k <= n; ++k) brute += n % k == 0;
    ASSERT_EQ(static_cast<i64>(d.size()), brute);
    ASSERT_EQ(tau(n), brute);
  }
}
