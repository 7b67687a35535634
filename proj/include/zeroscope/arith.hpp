#pragma once

// Integer arithmetic shared by every module: sieves for Λ, μ, φ and the
// smallest prime factor, modular inverses, primitive roots, factorization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "zeroscope/errors.hpp"

namespace zeroscope::arith {

using i64 = std::int64_t;

/// Sieve tables indexed 1..limit; index 0 is unused.
struct SieveTable {
  i64 limit = 0;
  std::vector<double> lambda;
  std::vector<std::int8_t> mobius;
  std::vector<i64> phi;
  std::vector<i64> smallest_prime_factor;

  bool is_prime(i64 n) const { return n >= 2 && smallest_prime_factor[n] == n; }
};

/// Bytes a sieve of the given limit occupies.
inline std::size_t sieve_bytes(i64 limit) {
  return static_cast<std::size_t>(limit + 1) *
         (sizeof(double) + sizeof(std::int8_t) + 2 * sizeof(i64));
}

inline constexpr std::size_t default_sieve_budget = std::size_t{1} << 31;

/// Linear sieve. O(limit) time.
inline SieveTable build_sieve(i64 limit, std::size_t memory_budget = default_sieve_budget) {
  if (limit < 2) throw domain_error("build_sieve: limit must be >= 2");
  if (sieve_bytes(limit) > memory_budget) {
    throw resource_error("build_sieve: limit " + std::to_string(limit) +
                         " exceeds the memory budget");
  }
  SieveTable t;
  t.limit = limit;
  const auto size = static_cast<std::size_t>(limit + 1);
  t.lambda.assign(size, 0.0);
  t.mobius.assign(size, 0);
  t.phi.assign(size, 0);
  t.smallest_prime_factor.assign(size, 0);
  std::vector<i64> primes;
  t.mobius[1] = 1;
  t.phi[1] = 1;
  t.smallest_prime_factor[1] = 1;
  for (i64 n = 2; n <= limit; ++n) {
    if (t.smallest_prime_factor[n] == 0) {
      t.smallest_prime_factor[n] = n;
      t.mobius[n] = -1;
      t.phi[n] = n - 1;
      primes.push_back(n);
    }
    for (i64 p : primes) {
      const i64 m = p * n;
      if (p > t.smallest_prime_factor[n] || m > limit) break;
      t.smallest_prime_factor[m] = p;
      if (p == t.smallest_prime_factor[n]) {
        t.mobius[m] = 0;
        t.phi[m] = t.phi[n] * p;
      } else {
        t.mobius[m] = static_cast<std::int8_t>(-t.mobius[n]);
        t.phi[m] = t.phi[n] * (p - 1);
      }
    }
  }
  for (i64 p : primes) {
    const double lp = std::log(static_cast<double>(p));
    for (i64 pk = p; pk <= limit; pk *= p) {
      t.lambda[pk] = lp;
      if (pk > limit / p) break;
    }
  }
  return t;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<__int128>(a) * b % m);
}

inline i64 powmod(i64 base, i64 exp, i64 m) {
  if (m == 1) return 0;
  i64 result = 1;
  base %= m;
  if (base < 0) base += m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline i64 positive_mod(i64 a, i64 m) {
  const i64 r = a % m;
  return r < 0 ? r + m : r;
}

/// b with a·b ≡ 1 (mod m), 0 <= b < m.
inline i64 mod_inverse(i64 a, i64 m) {
  if (m < 1) throw domain_error("mod_inverse: modulus must be positive");
  i64 old_r = positive_mod(a, m), r = m;
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 quotient = old_r / r;
    old_r = std::exchange(r, old_r - quotient * r);
    old_s = std::exchange(s, old_s - quotient * s);
  }
  if (old_r != 1 && m != 1) {
    throw domain_error("mod_inverse: gcd(" + std::to_string(a) + ", " + std::to_string(m) +
                       ") > 1");
  }
  return positive_mod(old_s, m);
}

using Factorization = std::vector<std::pair<i64, int>>;

/// Trial division; primes in increasing order.
inline Factorization factorize(i64 n) {
  if (n < 1) throw domain_error("factorize: n must be positive");
  Factorization f;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    f.emplace_back(p, k);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

inline i64 euler_phi(i64 n) {
  i64 result = n;
  for (auto [p, k] : factorize(n)) result = result / p * (p - 1);
  return result;
}

inline int mobius(i64 n) {
  int sign = 1;
  for (auto [p, k] : factorize(n)) {
    if (k > 1) return 0;
    sign = -sign;
  }
  return sign;
}

/// Sorted divisors.
inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> d{1};
  for (auto [p, k] : factorize(n)) {
    const std::size_t base = d.size();
    i64 pk = 1;
    for (int e = 1; e <= k; ++e) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

inline i64 tau(i64 n) {
  i64 t = 1;
  for (auto [p, k] : factorize(n)) t *= (k + 1);
  return t;
}

/// Multiplicative order of a modulo m (gcd(a, m) = 1 assumed).
inline i64 multiplicative_order(i64 a, i64 m, i64 group_order) {
  i64 order = group_order;
  for (auto [p, k] : factorize(group_order)) {
    for (int e = 0; e < k; ++e) {
      if (powmod(a, order / p, m) == 1) {
        order /= p;
      } else {
        break;
      }
    }
  }
  return order;
}

/// Smallest generator of (Z/q)^* for q ∈ {2, 4} or an odd prime power.
inline i64 primitive_root(i64 q) {
  if (q == 1 || q == 2) return 1;
  if (q == 4) return 3;
  const auto f = factorize(q);
  if (f.size() != 1 || f[0].first == 2) {
    throw domain_error("primitive_root: (Z/" + std::to_string(q) +
                       ")^* is not cyclic or q is not a prime power");
  }
  const i64 order = euler_phi(q);
  for (i64 g = 2; g < q; ++g) {
    if (std::gcd(g, q) != 1) continue;
    if (multiplicative_order(g, q, order) == order) return g;
  }
  throw invariant_violation("primitive_root: no generator found");
}

}  // namespace zeroscope::arith
