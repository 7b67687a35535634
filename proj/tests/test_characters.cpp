#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <map>
#include <set>

#include "zeroscope/characters.hpp"

using namespace zeroscope;
using arith::i64;

namespace {

cplx direct_gauss(const DirichletCharacter& chi) {
  cplx s = 0.0;
  const i64 q = chi.modulus();
  for (i64 a = 1; a <= q; ++a) s += chi(a) * std::polar(1.0, 2.0 * std::numbers::pi * a / q);
  return s;
}

}  // namespace

TEST(Enumerate, TrivialModulus) {
  const auto c = enumerate_characters(1);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].conductor(), 1);
  EXPECT_TRUE(c[0].is_principal());
}

TEST(Enumerate, ModFiveOrders) {
  const auto c = enumerate_characters(5);
  std::multiset<i64> orders;
  for (const auto& chi : c) orders.insert(chi.order());
  EXPECT_EQ(orders, (std::multiset<i64>{1, 2, 4, 4}));
}

TEST(Enumerate, ModEightHasTwoPrimitive) {
  const auto c = enumerate_characters(8);
  EXPECT_EQ(c.size(), 4u);
  EXPECT_EQ(primitive_characters(8).size(), 2u);
  EXPECT_EQ(primitive_count(8), 2);
}

TEST(Characters, MultiplicativeAndPeriodic) {
  for (i64 q = 1; q <= 60; ++q) {
    for (const auto& chi : enumerate_characters(q)) {
      for (i64 m = 0; m < q; ++m) {
        for (i64 n = 0; n < q; ++n) {
          ASSERT_LT(std::abs(chi(m * n) - chi(m) * chi(n)), 1e-12);
        }
        if (std::gcd(m, q) != 1 && q > 1) {
          ASSERT_EQ(chi(m), cplx(0.0));
        } else {
          ASSERT_LT(std::abs(std::pow(chi(m), static_cast<double>(chi.order())) - 1.0), 1e-9);
        }
        ASSERT_LT(std::abs(chi(m) - chi(m + 7 * q)), 1e-12);
      }
    }
  }
}

TEST(Characters, OrthogonalityOfRows) {
  for (i64 q = 2; q <= 40; ++q) {
    const auto chars = enumerate_characters(q);
    ASSERT_EQ(static_cast<i64>(chars.size()), arith::euler_phi(q));
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::size_t j = 0; j < chars.size(); ++j) {
        cplx s = 0.0;
        for (i64 n = 0; n < q; ++n) s += chars[i](n) * std::conj(chars[j](n));
        const double expect = i == j ? static_cast<double>(arith::euler_phi(q)) : 0.0;
        ASSERT_LT(std::abs(s - expect), 1e-9);
      }
    }
  }
}

TEST(Conductor, Examples) {
  EXPECT_EQ(conductor(enumerate_characters(12).front()), 1);
  const auto m4 = character_from_id("4:1");
  EXPECT_EQ(conductor(m4), 4);
  EXPECT_LT(std::abs(m4(3) - cplx(-1.0, 0.0)), 1e-15);
  const auto m9 = character_from_id("9:3");  // cube of a generator: quadratic, from mod 3
  EXPECT_EQ(m9.order(), 2);
  EXPECT_EQ(conductor(m9), 3);
}

TEST(Conductor, DividesModulusAndIsConstantOnKernel) {
  for (i64 q = 1; q <= 120; ++q) {
    for (const auto& chi : enumerate_characters(q)) {
      const i64 d = chi.conductor();
      ASSERT_EQ(q % d, 0);
      for (i64 n = 1; n < q; n += d) {
        if (std::gcd(n, q) == 1) ASSERT_LT(std::abs(chi(n) - 1.0), 1e-12);
      }
    }
  }
}

TEST(IdRoundTrip, ParsesWhatItPrints) {
  for (i64 q : {3, 8, 15, 16, 24, 97, 120}) {
    for (const auto& chi : enumerate_characters(q)) {
      ASSERT_EQ(character_from_id(chi.id()), chi);
    }
  }
  EXPECT_THROW(character_from_id("garbage"), domain_error);
}

TEST(GaussSum, QuadraticExamples) {
  const auto c3 = character_from_id("3:1");
  const auto g3 = gauss_sum(c3);
  EXPECT_NEAR(g3.real(), 0.0, 1e-12);
  EXPECT_NEAR(g3.imag(), std::sqrt(3.0), 1e-12);
  const auto c5 = character_from_id("5:2");
  ASSERT_EQ(c5.order(), 2);
  const auto g5 = gauss_sum(c5);
  EXPECT_NEAR(g5.real(), std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(g5.imag(), 0.0, 1e-12);
}

TEST(GaussSum, AbsoluteValueAndDirectSum) {
  for (i64 q = 3; q <= 150; ++q) {
    for (const auto& chi : primitive_characters(q)) {
      const auto g = gauss_sum(chi);
      ASSERT_NEAR(std::abs(g), std::sqrt(static_cast<double>(q)), 1e-10) << chi.id();
      ASSERT_LT(std::abs(g - direct_gauss(chi)), 1e-9) << chi.id();
    }
  }
  // Principal character mod 4 is not primitive; τ = μ(4) = 0.
  EXPECT_LT(std::abs(gauss_sum(enumerate_characters(4).front())), 1e-12);
}

TEST(PrimitiveSum, Examples) {
  EXPECT_EQ(primitive_character_sum(5, 1), 3);
  EXPECT_EQ(primitive_character_sum(5, 2), -1);
  cplx brute = 0.0;
  for (const auto& chi : primitive_characters(8)) brute += chi(3);
  EXPECT_NEAR(static_cast<double>(primitive_character_sum(8, 3)), brute.real(), 1e-12);
  EXPECT_THROW(primitive_character_sum(6, 2), domain_error);
}

TEST(PrimitiveSum, MatchesEnumeration) {
  for (i64 q = 1; q <= 120; ++q) {
    const auto prim = primitive_characters(q);
    ASSERT_EQ(static_cast<i64>(prim.size()), primitive_count(q));
    for (i64 n = 0; n < q; ++n) {
      if (q > 1 && std::gcd(n, q) != 1) continue;
      cplx s = 0.0;
      for (const auto& chi : prim) s += chi(n);
      ASSERT_NEAR(s.real(), static_cast<double>(primitive_character_sum(q, n)), 1e-9);
      ASSERT_NEAR(s.imag(), 0.0, 1e-9);
    }
  }
}

TEST(UR, Examples) {
  EXPECT_DOUBLE_EQ(u_R(11, 5, 1), 0.75);
  EXPECT_DOUBLE_EQ(u_R(2, 5, 5), 0.0);
  EXPECT_DOUBLE_EQ(u_R(10, 5, 3), 0.0);
  EXPECT_TRUE(check_trivial_bound(11, 5, 1));
  EXPECT_TRUE(check_trivial_bound(2, 5, 5));
}

TEST(UR, TrivialBoundSweep) {
  for (i64 w = 1; w <= 50; ++w) {
    for (i64 R = 1; R <= w; ++R) {
      for (i64 n = 1; n <= 1000; ++n) ASSERT_TRUE(check_trivial_bound(n, w, R)) << n << " " << w << " " << R;
    }
  }
}

TEST(UR, FullOrthogonalityWhenRCoversW) {
  for (i64 w = 1; w <= 40; ++w) {
    for (i64 n = 1; n <= 200; ++n) {
      if (std::gcd(n, w) != 1) continue;
      // Every character has conductor <= w, so orthogonality cancels exactly.
      ASSERT_EQ(u_R(n, w, w), 0.0);
      const double principal_only = ((n - 1) % w == 0 ? 1.0 : 0.0) - 1.0 / arith::euler_phi(w);
      ASSERT_NEAR(u_R(n, w, 1), principal_only, 1e-12);
    }
  }
}

TEST(Family, MembersArePrimitiveWithDivisorCounts) {
  const auto fam = build_family(10, 40, [](i64 q) { return q % 3 == 0 ? 0.0 : 1.0; });
  std::map<i64, i64> count;
  for (const auto& m : fam.members) {
    ASSERT_TRUE(m.chi.is_primitive());
    ++count[m.q];
  }
  for (const auto& [q, w] : fam.weights) {
    EXPECT_NE(q % 3, 0);
    EXPECT_EQ(count[q], primitive_count(q));
  }
}
