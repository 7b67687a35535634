#pragma once

// Sums over primes in progressions and the combinatorics behind them:
// Δ(w), T_κ, a large-sieve diagnostic, Kloosterman sums, a Poisson
// summation check, the three-way classifier of exponent tuples and the
// Heath-Brown identity.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zeroscope/arith.hpp"
#include "zeroscope/bandlimited.hpp"
#include "zeroscope/characters.hpp"
#include "zeroscope/errors.hpp"
#include "zeroscope/parallel.hpp"

namespace zeroscope::dispersion {

using arith::i64;
using arith::SieveTable;

struct DispersionParams {
  double Q = 0.0;
  double X = 0.0;
  i64 R = 1;
  i64 b = 1;
  double W = 1.0;
  double varpi = 0.0;

  /// X = Q^{2+ϖ}.
  static DispersionParams from_level(double Q, double varpi, i64 R) {
    DispersionParams p;
    p.Q = Q;
    p.varpi = varpi;
    p.X = std::pow(Q, 2.0 + varpi);
    p.R = R;
    return p;
  }

  bool consistent() const {
    return Q > 1.0 && X > 1.0 && std::abs(std::log(X) / std::log(Q) - (2.0 + varpi)) < 1e-12;
  }
};

namespace detail {

// Σ_{χ mod w, cond χ <= R} χ(n) depends on n only through its residues
// modulo the divisors r <= R of w; tabulate those once per w.
class LowConductorSum {
 public:
  LowConductorSum(i64 w, i64 R) : w_(w), phi_w_(arith::euler_phi(w)) {
    for (i64 r : arith::divisors(w)) {
      if (r > R) break;
      std::vector<i64> t(static_cast<std::size_t>(r), 0);
      for (i64 a = 0; a < r; ++a) {
        if (std::gcd(a, r) == 1 || r == 1) t[static_cast<std::size_t>(a)] = primitive_character_sum(r, a);
      }
      tables_.emplace_back(r, std::move(t));
    }
  }

  /// φ(w)·u_R(n, w).
  i64 scaled_u(i64 n) const {
    if (w_ > 1 && std::gcd(n % w_, w_) != 1) return 0;
    i64 s = (n - 1) % w_ == 0 ? phi_w_ : 0;
    for (const auto& [r, t] : tables_) s -= t[static_cast<std::size_t>(n % r)];
    return s;
  }

  i64 phi_w() const { return phi_w_; }

 private:
  i64 w_;
  i64 phi_w_;
  std::vector<std::pair<i64, std::vector<i64>>> tables_;
};

inline void require_sieve(const SieveTable& sieve, double X) {
  if (!(X > 0.0)) throw domain_error("X must be positive");
  if (3.0 * X > static_cast<double>(sieve.limit)) {
    throw resource_error("sieve limit " + std::to_string(sieve.limit) + " is below 3X = " +
                         std::to_string(3.0 * X));
  }
}

}  // namespace detail

/// Δ(w) = Σ_n Λ(n) f(n/X) u_R(n, w), over X/2 <= n <= 3X.
inline double delta_w(i64 w, double X, i64 R, const SmoothBump& f, const SieveTable& sieve) {
  if (w < 1 || R < 1) throw domain_error("delta_w: w and R must be positive");
  detail::require_sieve(sieve, X);
  const detail::LowConductorSum u(w, R);
  const i64 lo = std::max<i64>(2, static_cast<i64>(std::ceil(X / 2.0)));
  const i64 hi = static_cast<i64>(std::floor(3.0 * X));
  double sum = 0.0;
  for (i64 n = lo; n <= hi; ++n) {
    const double lam = sieve.lambda[static_cast<std::size_t>(n)];
    if (lam == 0.0) continue;
    const i64 s = u.scaled_u(n);
    if (s == 0) continue;
    const double fx = f(static_cast<double>(n) / X);
    if (fx == 0.0) continue;
    sum += lam * fx * static_cast<double>(s);
  }
  return sum / static_cast<double>(u.phi_w());
}

/// T_κ(Q, X, R) = Σ_{v,w} Ψ(vw/Q) (μ(v)/v)(φ(w)/w) Δ(w).
inline double t_kappa(const DispersionParams& p, const SmoothBump& Psi, const SmoothBump& f,
                      const SieveTable& sieve) {
  if (!(static_cast<double>(p.R) < p.Q / 2.0)) throw domain_error("t_kappa: need R < Q/2");
  detail::require_sieve(sieve, p.X);
  if (Psi.amplitude == 0.0) return 0.0;
  const i64 top = static_cast<i64>(std::floor(Psi.support.hi * p.Q));
  std::vector<double> per_w(static_cast<std::size_t>(top + 1), 0.0);
  parallel_for(static_cast<std::size_t>(top), [&](std::size_t idx) {
    const i64 w = static_cast<i64>(idx) + 1;
    double weight = 0.0;
    for (i64 v = 1; v * w <= top; ++v) {
      const int mu = arith::mobius(v);
      if (mu == 0) continue;
      const double psi = Psi(static_cast<double>(v * w) / p.Q);
      if (psi != 0.0) weight += psi * mu / static_cast<double>(v);
    }
    if (weight == 0.0) return;
    const double phi_ratio = static_cast<double>(arith::euler_phi(w)) / static_cast<double>(w);
    per_w[idx] = weight * phi_ratio * delta_w(w, p.X, p.R, f, sieve);
  });
  return tree_sum(per_w);
}

/// Σ_{q <= Q} |Δ(q)| / [Q √X (1 + √X/(RQ) + X^{3/8}/Q)].
inline double large_sieve_ratio(i64 Q, double X, i64 R, const SmoothBump& f, const SieveTable& sieve) {
  if (Q < 1 || R < 1) throw domain_error("large_sieve_ratio: Q and R must be positive");
  if (!(X >= 1.0)) throw domain_error("large_sieve_ratio: empty range of n");
  detail::require_sieve(sieve, X);
  std::vector<double> d(static_cast<std::size_t>(Q), 0.0);
  parallel_for(d.size(), [&](std::size_t i) {
    d[i] = std::abs(delta_w(static_cast<i64>(i) + 1, X, R, f, sieve));
  });
  const double q = static_cast<double>(Q);
  const double sx = std::sqrt(X);
  const double scale = q * sx * (1.0 + sx / (static_cast<double>(R) * q) + std::pow(X, 0.375) / q);
  return tree_sum(d) / scale;
}

// ---------------------------------------------------------------------------

namespace detail {

struct KloostermanTable {
  i64 c;
  std::vector<i64> units;
  std::vector<i64> inverses;
  std::vector<double> cosines;  // cos(2πk/c)

  explicit KloostermanTable(i64 c_) : c(c_), cosines(static_cast<std::size_t>(c_)) {
    for (i64 x = 0; x < c; ++x) {
      if (std::gcd(x, c) == 1 || c == 1) {
        units.push_back(x);
        inverses.push_back(c == 1 ? 0 : arith::mod_inverse(x, c));
      }
      cosines[static_cast<std::size_t>(x)] =
          std::cos(2.0 * std::numbers::pi * static_cast<double>(x) / static_cast<double>(c));
    }
  }

  double operator()(i64 m, i64 n) const {
    const i64 mm = arith::positive_mod(m, c);
    const i64 nn = arith::positive_mod(n, c);
    double s = 0.0;
    for (std::size_t i = 0; i < units.size(); ++i) {
      s += cosines[static_cast<std::size_t>((mm * units[i] + nn * inverses[i]) % c)];
    }
    return s;
  }
};

}  // namespace detail

/// S(m, n; c) = Σ_{x mod c, (x,c)=1} e((mx + n x̄)/c). Real since x ↦ -x
/// pairs each term with its conjugate.
inline double kloosterman(i64 m, i64 n, i64 c) {
  if (c < 1) throw domain_error("kloosterman: c must be positive");
  return detail::KloostermanTable(c)(m, n);
}

/// τ(c) √gcd(m, n, c) √c.
inline double weil_bound(i64 m, i64 n, i64 c) {
  const i64 g = std::gcd(std::gcd(std::abs(m), std::abs(n)), c);
  return static_cast<double>(arith::tau(c)) * std::sqrt(static_cast<double>(g)) *
         std::sqrt(static_cast<double>(c));
}

struct WeilReport {
  long long checked = 0;
  long long violations = 0;
  double worst_ratio = 0.0;  // max |S| / bound
};

/// Every (m, n, c) with c <= c_max and |m|, |n| <= mn_max.
inline WeilReport weil_sweep(i64 c_max, i64 mn_max) {
  std::vector<WeilReport> per_c(static_cast<std::size_t>(c_max));
  parallel_for(per_c.size(), [&](std::size_t idx) {
    const i64 c = static_cast<i64>(idx) + 1;
    const detail::KloostermanTable table(c);
    WeilReport r;
    for (i64 m = -mn_max; m <= mn_max; ++m) {
      for (i64 n = -mn_max; n <= mn_max; ++n) {
        const double s = std::abs(table(m, n));
        const double bound = weil_bound(m, n, c);
        ++r.checked;
        if (s > bound * (1.0 + 1e-12) + 1e-9) ++r.violations;
        r.worst_ratio = std::max(r.worst_ratio, s / bound);
      }
    }
    per_c[idx] = r;
  });
  WeilReport total;
  for (const auto& r : per_c) {
    total.checked += r.checked;
    total.violations += r.violations;
    total.worst_ratio = std::max(total.worst_ratio, r.worst_ratio);
  }
  return total;
}

// ---------------------------------------------------------------------------

struct PoissonResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// Σ_{n ≡ μ (q)} g(n/N) against (N/q) Σ_{|h| <= H} ĝ(hN/q) e(μh/q).
inline PoissonResult poisson_check(const SmoothBump& g, double N, i64 q, i64 mu, i64 H) {
  if (q < 1 || !(N > 0.0) || H < 0) throw domain_error("poisson_check: bad arguments");
  if (std::gcd(arith::positive_mod(mu, q), q) != 1 && q != 1) {
    throw domain_error("poisson_check: gcd(mu, q) > 1");
  }
  PoissonResult r;
  if (g.amplitude == 0.0) return r;
  const double qd = static_cast<double>(q);
  const i64 m0 = arith::positive_mod(mu, q);
  const i64 k_lo = static_cast<i64>(std::floor((g.support.lo * N - static_cast<double>(m0)) / qd));
  const i64 k_hi = static_cast<i64>(std::ceil((g.support.hi * N - static_cast<double>(m0)) / qd));
  std::vector<double> terms;
  for (i64 k = k_lo; k <= k_hi; ++k) {
    terms.push_back(g(static_cast<double>(m0 + k * q) / N));
  }
  r.lhs = tree_sum(terms);

  auto ghat = [&](double xi) {
    return fourier_quadrature([&](double x) { return g(x); }, xi, g.support);
  };
  double s = ghat(0.0).real();
  for (i64 h = 1; h <= H; ++h) {
    const cplx gh = ghat(static_cast<double>(h) * N / qd);
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(arith::positive_mod(mu * h, q)) / qd;
    // h and -h together: 2 Re(ĝ(ξ) e(μh/q)) since g is real.
    s += 2.0 * (gh * std::polar(1.0, ang)).real();
  }
  r.rhs = N / qd * s;
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

// ---------------------------------------------------------------------------
// Exponent tuples and the three-way classifier.

struct ExponentTuple {
  std::vector<double> t;
  double lambda = 0.0;
  double sigma = 0.0;
  double delta = 0.0;

  /// Empty when the tuple satisfies every hypothesis, else the first failure.
  std::string violation() const {
    if (t.empty()) return "t is empty";
    double sum = 0.0;
    for (double v : t) {
      if (!(v >= 0.0)) return "t has a negative entry";
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) return "t does not sum to 1";
    if (!(lambda >= 0.0 && sigma >= 0.0 && delta >= 0.0)) return "lambda, sigma, delta must be >= 0";
    if (!(delta < 1.0 / 12.0)) return "need delta < 1/12";
    if (!(sigma <= 1.0 / 6.0 - delta / 2.0)) return "need sigma <= 1/6 - delta/2";
    if (!(2.0 * lambda + sigma < 1.0 / 3.0)) return "need 2 lambda + sigma < 1/3";
    return {};
  }
};

enum class CaseType { d1, d2, ii };

inline const char* name(CaseType c) {
  switch (c) {
    case CaseType::d1: return "d1";
    case CaseType::d2: return "d2";
    case CaseType::ii: return "II";
  }
  return "?";
}

struct Case {
  CaseType type = CaseType::d1;
  std::vector<std::size_t> indices;  // 0-based, increasing
  bool greedy = false;               // type II found by the greedy step
};

/// Whether the witness satisfies the inequalities defining its case.
inline bool witness_valid(const ExponentTuple& x, const Case& c) {
  const double third = 1.0 / 3.0;
  if (c.indices.empty()) return false;
  for (std::size_t i : c.indices) {
    if (i >= x.t.size()) return false;
  }
  switch (c.type) {
    case CaseType::d1:
      return c.indices.size() == 1 && x.t[c.indices[0]] >= third + x.lambda;
    case CaseType::ii: {
      double s = 0.0;
      for (std::size_t i : c.indices) s += x.t[i];
      return x.sigma <= s && s <= third - x.delta;
    }
    case CaseType::d2: {
      if (c.indices.size() != 3) return false;
      double rest = 0.0;
      for (std::size_t i = 0; i < x.t.size(); ++i) {
        const bool chosen = std::find(c.indices.begin(), c.indices.end(), i) != c.indices.end();
        if (chosen) {
          if (!(third - x.delta < x.t[i] && x.t[i] < third + x.lambda)) return false;
        } else {
          rest += x.t[i];
        }
      }
      return rest < x.sigma;
    }
  }
  return false;
}

inline constexpr std::size_t exhaustive_limit = 20;

/// Returns the first case that holds in the order d1, II, d2. With
/// `enforce_hypotheses` off, tuples outside the hypotheses are still searched
/// but a case is no longer guaranteed to exist.
inline Case classify(const ExponentTuple& x, bool enforce_hypotheses = true) {
  if (const auto v = x.violation(); !v.empty() && enforce_hypotheses) {
    throw domain_error("classify: " + v);
  }
  const double third = 1.0 / 3.0;
  const std::size_t J = x.t.size();

  for (std::size_t j = 0; j < J; ++j) {
    if (x.t[j] >= third + x.lambda) return Case{CaseType::d1, {j}, false};
  }
  for (std::size_t j = 0; j < J; ++j) {
    if (x.sigma <= x.t[j] && x.t[j] <= third - x.delta) return Case{CaseType::ii, {j}, false};
  }
  // Everything below σ, largest first, until the running sum reaches σ; it
  // then lies below 2σ <= 1/3 - δ.
  std::vector<std::size_t> small;
  for (std::size_t j = 0; j < J; ++j) {
    if (x.t[j] < x.sigma) small.push_back(j);
  }
  std::stable_sort(small.begin(), small.end(),
                   [&](std::size_t a, std::size_t b) { return x.t[a] > x.t[b]; });
  {
    Case c{CaseType::ii, {}, true};
    double s = 0.0;
    for (std::size_t j : small) {
      c.indices.push_back(j);
      s += x.t[j];
      if (s >= x.sigma) {
        std::sort(c.indices.begin(), c.indices.end());
        if (witness_valid(x, c)) return c;
        break;
      }
    }
  }
  if (J <= exhaustive_limit) {
    for (unsigned long mask = 1; mask < (1UL << J); ++mask) {
      Case c{CaseType::ii, {}, false};
      for (std::size_t j = 0; j < J; ++j) {
        if (mask & (1UL << j)) c.indices.push_back(j);
      }
      if (witness_valid(x, c)) return c;
    }
  }
  Case c{CaseType::d2, {}, false};
  for (std::size_t j = 0; j < J; ++j) {
    if (third - x.delta < x.t[j] && x.t[j] < third + x.lambda) c.indices.push_back(j);
  }
  if (witness_valid(x, c)) return c;
  throw invariant_violation("classify: no case applies");
}

/// A tuple satisfying the hypotheses: t from a flat Dirichlet draw (with
/// some entries zeroed or pushed to the case boundaries), then δ, σ, λ
/// uniform in their admissible ranges.
template <class Rng>
ExponentTuple random_instance(Rng& rng, std::size_t max_j) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ExponentTuple x;
  x.delta = u(rng) / 12.0 * (1.0 - 1e-12);
  x.sigma = u(rng) * (1.0 / 6.0 - x.delta / 2.0);
  x.lambda = u(rng) * (1.0 / 3.0 - x.sigma) / 2.0 * (1.0 - 1e-12);
  const std::size_t J = 1 + static_cast<std::size_t>(u(rng) * static_cast<double>(max_j)) % max_j;
  std::exponential_distribution<double> e(1.0);
  x.t.resize(J);
  double sum = 0.0;
  for (auto& v : x.t) {
    const double r = u(rng);
    if (r < 0.1) v = 0.0;
    else if (r < 0.15) v = 1.0 / 3.0 - x.delta;
    else if (r < 0.2) v = x.sigma;
    else v = e(rng);
    sum += v;
  }
  if (sum == 0.0) {
    x.t.assign(J, 0.0);
    x.t[0] = 1.0;
    return x;
  }
  for (auto& v : x.t) v /= sum;
  // Put the rounding residue on the largest entry so Σt = 1 to the last bit
  // the hypotheses check can see.
  const auto big = std::max_element(x.t.begin(), x.t.end());
  double rest = 0.0;
  for (auto it = x.t.begin(); it != x.t.end(); ++it) {
    if (it != big) rest += *it;
  }
  *big = 1.0 - rest;
  return x;
}

struct FuzzReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::size_t by_type[3] = {0, 0, 0};  // d1, d2, II
  std::string first_failure;
};

/// Classifies `count` random tuples with J <= max_j and checks each witness.
/// Tuples are drawn sequentially from one mt19937_64 so a seed replays.
inline FuzzReport fuzz_classifier(std::size_t count, std::uint64_t seed, std::size_t max_j) {
  if (max_j < 1) throw domain_error("fuzz_classifier: max_j must be positive");
  std::mt19937_64 rng(seed);
  FuzzReport rep;
  for (std::size_t i = 0; i < count; ++i) {
    const auto x = random_instance(rng, max_j);
    ++rep.checked;
    std::string problem;
    if (const auto v = x.violation(); !v.empty()) {
      problem = "generator produced an invalid tuple: " + v;
    } else {
      try {
        const auto c = classify(x);
        if (!witness_valid(x, c)) problem = std::string("invalid ") + name(c.type) + " witness";
        ++rep.by_type[c.type == CaseType::d1 ? 0 : c.type == CaseType::d2 ? 1 : 2];
      } catch (const invariant_violation& err) {
        problem = err.what();
      }
    }
    if (!problem.empty()) {
      if (rep.failures++ == 0) {
        rep.first_failure = "instance " + std::to_string(i) + ": " + problem;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

inline double mangoldt(i64 n) {
  if (n < 2) return 0.0;
  const auto f = arith::factorize(n);
  return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

struct HeathBrownResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool equal = false;
};

/// Λ(n) against Σ_{j<=J} (-1)^{j-1} C(J,j) (μ_{<=z}^{*j} * 1^{*(j-1)} * log)(n).
inline HeathBrownResult heath_brown_check(i64 n, int J, i64 z) {
  if (n < 1 || J < 1 || z < 1) throw domain_error("heath_brown_check: arguments must be positive");
  double zJ = 1.0;
  for (int j = 0; j < J; ++j) zJ *= static_cast<double>(z);
  if (static_cast<double>(n) > zJ) throw domain_error("heath_brown_check: need n <= z^J");

  const auto divs = arith::divisors(n);
  const std::size_t m = divs.size();
  std::map<i64, std::size_t> index;
  for (std::size_t i = 0; i < m; ++i) index[divs[i]] = i;
  using Fn = std::vector<double>;
  auto convolve = [&](const Fn& f, const Fn& g) {
    Fn h(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t e = 0; e <= i; ++e) {
        if (divs[i] % divs[e] != 0) continue;
        h[i] += f[e] * g[index.at(divs[i] / divs[e])];
      }
    }
    return h;
  };
  Fn mu_z(m), one(m, 1.0), log_fn(m);
  for (std::size_t i = 0; i < m; ++i) {
    mu_z[i] = divs[i] <= z ? arith::mobius(divs[i]) : 0;
    log_fn[i] = std::log(static_cast<double>(divs[i]));
  }
  double rhs = 0.0;
  Fn mu_power = mu_z;  // μ_z^{*j}
  Fn one_power = log_fn;  // 1^{*(j-1)} * log
  double binom = 1.0;
  for (int j = 1; j <= J; ++j) {
    binom = binom * (J - j + 1) / j;
    const double term = convolve(mu_power, one_power)[m - 1];
    rhs += (j % 2 == 1 ? 1.0 : -1.0) * binom * term;
    mu_power = convolve(mu_power, mu_z);
    one_power = convolve(one_power, one);
  }
  HeathBrownResult r;
  r.lhs = mangoldt(n);
  r.rhs = rhs;
  r.equal = std::abs(r.lhs - r.rhs) <= 1e-9;
  return r;
}

}  // namespace zeroscope::dispersion
