#pragma once

// Low-lying zero statistics of the family of primitive characters: the
// weighted 1-level density, the explicit formula for a single character,
// the prime sum S_κ computed by two routes, and central non-vanishing.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "zeroscope/arith.hpp"
#include "zeroscope/bandlimited.hpp"
#include "zeroscope/characters.hpp"
#include "zeroscope/errors.hpp"
#include "zeroscope/lfunc.hpp"
#include "zeroscope/parallel.hpp"

namespace zeroscope::density {

using arith::i64;
using arith::SieveTable;
inline constexpr double pi = std::numbers::pi;

/// Family weight Φ: support [3/4, 9/4], plateau [7/8, 2].
inline SmoothBump default_family_weight() { return make_bump({0.75, 2.25}, {0.875, 2.0}); }

/// A weight on q/Q together with the interval outside which it vanishes.
struct Weight {
  std::function<double(double)> fn;
  Interval support;
  std::string descriptor;

  double operator()(double x) const { return fn ? fn(x) : 0.0; }
  static Weight zero() { return {nullptr, {1.0, 1.0}, "zero"}; }
};

/// Ψ(x) = Φ(x)/x.
inline Weight default_psi() {
  const auto phi = default_family_weight();
  return {[phi](double x) { return phi(x) / x; }, phi.support, "Phi(x)/x"};
}

inline std::string describe(const SmoothBump& b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "bump support=[%.17g,%.17g] plateau=[%.17g,%.17g]", b.support.lo,
                b.support.hi, b.plateau.lo, b.plateau.hi);
  return buf;
}

namespace detail {

inline SieveTable sieve_for(double Q, double nu, const SieveTable* given) {
  const i64 limit = std::max<i64>(2, static_cast<i64>(std::floor(std::pow(Q, nu) * (1.0 + 1e-12))));
  if (given) {
    if (given->limit < limit) {
      throw resource_error("prime sum needs a sieve to " + std::to_string(limit) + ", have " +
                           std::to_string(given->limit));
    }
    return *given;
  }
  return arith::build_sieve(limit);
}

inline void require_primitive(const DirichletCharacter& chi) {
  if (chi.modulus() <= 1 || !chi.is_primitive()) {
    throw domain_error("explicit formula: character " + chi.id() + " is not primitive with q > 1");
  }
}

/// Σ_{n <= Q^ν} (χ(n)+χ̄(n)) Λ(n)/√n φ̂(log n / L).
inline double prime_sum(const DirichletCharacter& chi, double L, const TestFunction& phi,
                        const SieveTable& sieve) {
  const double top = std::exp(phi.nu() * L);
  const i64 q = chi.modulus();
  const auto table = chi.value_table();
  double s = 0.0;
  for (i64 n = 2; n <= sieve.limit && static_cast<double>(n) <= top; ++n) {
    const double lam = sieve.lambda[static_cast<std::size_t>(n)];
    if (lam == 0.0) continue;
    const double w = phi.hat(std::log(static_cast<double>(n)) / L);
    if (w == 0.0) continue;
    s += 2.0 * table[static_cast<std::size_t>(n % q)].real() * lam / std::sqrt(static_cast<double>(n)) * w;
  }
  return s;
}

/// Upper bound for Σ_{|γ|>T} γ^{-2} over the zeros of one L(s, χ) mod q,
/// from |N(t,χ) - (t/π) log(qt/2πe)| <= 0.22737ℓ + 2 log(1+ℓ) - 0.5 with
/// ℓ = log(q(t+2)/2π), valid for t >= 1.
inline double inverse_square_tail(i64 q, double T) {
  if (!(T >= 1.0)) throw domain_error("zero tail bound: T must be at least 1");
  const double qd = static_cast<double>(q);
  const auto err = [qd](double t) {
    const double ell = std::log(qd * (t + 2.0) / (2.0 * pi));
    return std::max(0.0, 0.22737 * ell + 2.0 * std::log1p(ell) - 0.5);
  };
  const auto main = [qd](double t) { return t / pi * std::log(qd * t / (2.0 * pi * std::numbers::e)); };
  // ∫_T^∞ t^{-2} dN = -N(T)/T² + 2∫_T^∞ N(t) t^{-3} dt.
  const double main_part = 2.0 / pi * (std::log(qd * T / (2.0 * pi * std::numbers::e)) + 1.0) / T;
  // t = T/u turns ∫_T^∞ E(t) t^{-3} dt into ∫_0^1 E(T/u) u du / T².
  const double err_part =
      2.0 / (T * T) *
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double u) { return u <= 0.0 ? 0.0 : err(T / u) * u; }, 0.0, 1.0, 10, 1e-10);
  const double n_lo = std::max(0.0, main(T) - err(T));
  return std::max(0.0, main_part + err_part - n_lo / (T * T));
}

/// Bound for Σ_{|γ|>T} |φ(Lγ/2π)| over one character mod q.
inline double zero_tail(const TestFunction& phi, double L, i64 q, double T) {
  return phi.decay_constant() * 4.0 * pi * pi / (L * L) * inverse_square_tail(q, T);
}

inline double zero_sum(const std::vector<double>& gammas, const TestFunction& phi, double L) {
  std::vector<double> v;
  v.reserve(gammas.size());
  for (double g : gammas) v.push_back(phi(L * g / (2.0 * pi)));
  return tree_sum(v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Explicit formula.

/// φ̂(0) log q / L - (1/L) Σ_{n <= Q^ν} (χ(n)+χ̄(n)) Λ(n)/√n φ̂(log n / L), L = log Q.
inline double explicit_prime_side(const DirichletCharacter& chi, double Q, const TestFunction& phi,
                                  const SieveTable* sieve = nullptr) {
  detail::require_primitive(chi);
  if (!(Q > 1.0)) throw domain_error("explicit_prime_side: Q must exceed 1");
  const double L = std::log(Q);
  const auto table = detail::sieve_for(Q, phi.nu(), sieve);
  return phi.hat(0.0) * std::log(static_cast<double>(chi.modulus())) / L -
         detail::prime_sum(chi, L, phi, table) / L;
}

/// Archimedean term of the explicit formula for parity a:
///   (1/2π) ∫ h(r) Re ψ(1/4 + a/2 + ir/2) dr
///   = g(0) ψ(b/2) + 2 ∫_0^∞ (g(0) - g(x)) e^{-bx} / (1 - e^{-2x}) dx,
/// with b = 1/2 + a, g(x) = φ̂(x/L)/L and h(r) = φ(Lr/2π).
inline double archimedean_term(int a, double L, const TestFunction& phi) {
  const double b = 0.5 + a;
  const double g0 = phi.hat(0.0) / L;
  const double cut = phi.nu() * L;  // g vanishes beyond
  const auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    return (g0 - phi.hat(x / L) / L) * std::exp(-b * x) / -std::expm1(-2.0 * x);
  };
  double err = 0.0;
  const double body = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, cut, 15, 1e-13, &err);
  double tail = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double term = std::exp(-(b + 2.0 * k) * cut) / (b + 2.0 * k);
    tail += term;
    if (term < 1e-18 * std::abs(tail)) break;
  }
  return g0 * boost::math::digamma(b / 2.0) + 2.0 * body + 2.0 * g0 * tail;
}

enum class BalanceMode { approximate, exact };

struct ExplicitBalance {
  std::string char_id;
  double Q = 0.0;
  double T = 0.0;
  BalanceMode mode = BalanceMode::exact;
  double zero_side = 0.0;
  double prime_side = 0.0;
  double residual = 0.0;
  double tail = 0.0;
  double budget = 0.0;  // |residual| is expected below this
  std::size_t zeros_used = 0;
  bool within_budget() const { return std::abs(residual) <= budget; }
};

inline constexpr double default_c_expl = 5.0;
inline constexpr double exact_tolerance = 1e-3;

/// Zero side against prime side for one primitive character. In exact mode
/// the prime side also carries log(1/π)φ̂(0)/L and the archimedean term, so
/// only the truncation at T separates the two.
inline ExplicitBalance explicit_balance(const DirichletCharacter& chi, double Q, const TestFunction& phi,
                                        double T, BalanceMode mode, const SieveTable* sieve = nullptr,
                                        double c_expl = default_c_expl,
                                        const std::optional<lfunc::ZeroSet>& zeros = std::nullopt) {
  detail::require_primitive(chi);
  if (!(Q > 1.0)) throw domain_error("explicit_balance: Q must exceed 1");
  const double L = std::log(Q);
  const lfunc::ZeroSet zs = zeros ? *zeros : lfunc::find_zeros(lfunc::make_context(chi), T);
  if (!zs.certificate.matched) {
    throw completeness_error("explicit_balance: zero set of " + chi.id() + " is not certified",
                             zs.certificate.off_line_suspect);
  }
  ExplicitBalance r;
  r.char_id = chi.id();
  r.Q = Q;
  r.T = T;
  r.mode = mode;
  std::vector<double> inside;
  for (double g : zs.ordinates) {
    if (std::abs(g) <= T) inside.push_back(g);
  }
  r.zeros_used = inside.size();
  r.zero_side = detail::zero_sum(inside, phi, L);
  r.prime_side = explicit_prime_side(chi, Q, phi, sieve);
  if (mode == BalanceMode::exact) {
    r.prime_side += -phi.hat(0.0) * std::log(pi) / L + archimedean_term(chi.parity(), L, phi);
  }
  r.residual = r.zero_side - r.prime_side;
  r.tail = detail::zero_tail(phi, L, chi.modulus(), T);
  r.budget = (mode == BalanceMode::exact ? exact_tolerance : c_expl / L) + r.tail;
  return r;
}

// ---------------------------------------------------------------------------
// 1-level density.

struct ModulusRow {
  i64 q = 0;
  std::size_t n_primitive = 0;
  double weight = 0.0;
  double lhs_q = 0.0;
  double tail_q = 0.0;
};

struct DensityReport {
  double Q = 0.0;
  std::string test_function;
  std::string family_weight;
  double T = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double tail = 0.0;
  std::vector<ModulusRow> rows;
  std::vector<std::string> excluded;  // uncertified characters, non-strict mode only
};

struct DensityOptions {
  bool strict = true;
  unsigned threads = 0;
  lfunc::ZeroSearchOptions search{};
};

/// Moduli with Φ(q/Q) != 0.
inline std::vector<i64> family_moduli(double Q, const SmoothBump& Phi) {
  std::vector<i64> out;
  const i64 lo = std::max<i64>(2, static_cast<i64>(std::floor(Phi.support.lo * Q)));
  const i64 hi = static_cast<i64>(std::ceil(Phi.support.hi * Q));
  for (i64 q = lo; q <= hi; ++q) {
    if (Phi(static_cast<double>(q) / Q) != 0.0) out.push_back(q);
  }
  return out;
}

/// φ̂(0) Σ_q Φ(q/Q) φ*(q) with φ*(q) from the divisor formula.
inline double density_main_term(double Q, const TestFunction& phi, const SmoothBump& Phi) {
  std::vector<double> v;
  for (i64 q : family_moduli(Q, Phi)) {
    v.push_back(Phi(static_cast<double>(q) / Q) * static_cast<double>(primitive_count(q)));
  }
  return phi.hat(0.0) * tree_sum(v);
}

/// Σ_q Φ(q/Q) Σ_{χ primitive mod q} Σ_{|γ|<=T} φ((log Q/2π)γ) against
/// φ̂(0) Σ_q Φ(q/Q) φ*(q).
inline DensityReport one_level_density(double Q, const TestFunction& phi, const SmoothBump& Phi,
                                       double T, const DensityOptions& opt = {}) {
  if (!(Q > 1.0)) throw domain_error("one_level_density: Q must exceed 1");
  if (!(T >= 1.0)) throw domain_error("one_level_density: T must be at least 1");
  const double L = std::log(Q);
  const auto moduli = family_moduli(Q, Phi);
  if (moduli.empty()) throw domain_error("one_level_density: empty family");

  std::vector<ModulusRow> rows(moduli.size());
  std::vector<std::vector<std::string>> dropped(moduli.size());
  parallel_for(
      moduli.size(),
      [&](std::size_t i) {
        const i64 q = moduli[i];
        const auto sets = lfunc::zeros_for_modulus(q, T, opt.search);
        std::vector<double> per_char;
        for (const auto& zs : sets) {
          if (!zs.certificate.matched) {
            if (opt.strict) {
              throw completeness_error("one_level_density: q=" + std::to_string(q) + " character " +
                                           zs.char_id + " has an uncertified zero set",
                                       zs.certificate.off_line_suspect);
            }
            dropped[i].push_back(zs.char_id);
            continue;
          }
          per_char.push_back(detail::zero_sum(zs.ordinates, phi, L));
        }
        ModulusRow& row = rows[i];
        row.q = q;
        row.n_primitive = sets.size();
        row.weight = Phi(static_cast<double>(q) / Q);
        row.lhs_q = tree_sum(per_char);
        row.tail_q = static_cast<double>(per_char.size()) * detail::zero_tail(phi, L, q, T);
      },
      opt.threads);

  DensityReport rep;
  rep.Q = Q;
  rep.test_function = phi.descriptor();
  rep.family_weight = describe(Phi);
  rep.T = T;
  std::vector<double> lhs, rhs, tail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lhs.push_back(rows[i].weight * rows[i].lhs_q);
    rhs.push_back(rows[i].weight * static_cast<double>(rows[i].n_primitive));
    tail.push_back(std::abs(rows[i].weight) * rows[i].tail_q);
    for (auto& id : dropped[i]) rep.excluded.push_back(std::move(id));
  }
  rep.rows = std::move(rows);
  rep.lhs = tree_sum(lhs);
  rep.rhs = phi.hat(0.0) * tree_sum(rhs);
  rep.tail = tree_sum(tail);
  rep.ratio = rep.rhs != 0.0 ? rep.lhs / rep.rhs : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

// ---------------------------------------------------------------------------
// S_κ two ways.

struct SKappa {
  double direct = 0.0;
  double orthog = 0.0;
  double difference = 0.0;
  // The orthogonality form read without the condition (n, v) = 1; differs
  // from `direct` by prime powers dividing the modulus.
  double orthog_unrestricted = 0.0;
};

/// Σ_q (1/q)Ψ(q/Q) Σ_{χ primitive mod q} (1/L) Σ_n (χ(n)+χ̄(n)) Λ(n)/√n φ̂(log n/L),
/// once by enumerating characters and once through
///   Σ_{χ primitive mod vw} χ(n) = Σ_{vw=q} μ(v)φ(w) 1_{n≡1 (w)},  (n, q) = 1.
inline SKappa s_kappa_two_ways(double Q, const TestFunction& phi, const Weight& Psi,
                               const SieveTable* sieve = nullptr, unsigned threads = 0) {
  if (!(Q > 1.0)) throw domain_error("s_kappa: Q must exceed 1");
  SKappa out;
  if (!Psi.fn) return out;
  const double L = std::log(Q);
  const auto table = detail::sieve_for(Q, phi.nu(), sieve);
  const double top = std::exp(phi.nu() * L);

  struct Term {
    i64 n;
    double w;  // Λ(n)/√n φ̂(log n/L)
  };
  std::vector<Term> terms;
  for (i64 n = 2; n <= table.limit && static_cast<double>(n) <= top; ++n) {
    const double lam = table.lambda[static_cast<std::size_t>(n)];
    if (lam == 0.0) continue;
    const double h = phi.hat(std::log(static_cast<double>(n)) / L);
    if (h != 0.0) terms.push_back({n, lam / std::sqrt(static_cast<double>(n)) * h});
  }

  std::vector<i64> moduli;
  const i64 lo = std::max<i64>(2, static_cast<i64>(std::floor(Psi.support.lo * Q)));
  const i64 hi = static_cast<i64>(std::ceil(Psi.support.hi * Q));
  for (i64 q = lo; q <= hi; ++q) {
    if (Psi(static_cast<double>(q) / Q) != 0.0) moduli.push_back(q);
  }

  std::vector<double> direct(moduli.size()), orth(moduli.size()), loose(moduli.size());
  parallel_for(
      moduli.size(),
      [&](std::size_t i) {
        const i64 q = moduli[i];
        const double pref = Psi(static_cast<double>(q) / Q) / static_cast<double>(q);
        double d = 0.0;
        for (const auto& chi : primitive_characters(q)) {
          const auto vals = chi.value_table();
          double s = 0.0;
          for (const auto& t : terms) s += 2.0 * vals[static_cast<std::size_t>(t.n % q)].real() * t.w;
          d += s;
        }
        direct[i] = pref * d;

        double o = 0.0, u = 0.0;
        for (i64 w : arith::divisors(q)) {
          const i64 v = q / w;
          const int mu = arith::mobius(v);
          if (mu == 0) continue;
          const double c = static_cast<double>(mu) * static_cast<double>(arith::euler_phi(w));
          double s = 0.0, s_loose = 0.0;
          for (const auto& t : terms) {
            if ((t.n - 1) % w != 0) continue;
            s_loose += t.w;
            if (std::gcd(t.n, v) == 1) s += t.w;
          }
          o += c * s;
          u += c * s_loose;
        }
        orth[i] = 2.0 * pref * o;
        loose[i] = 2.0 * pref * u;
      },
      threads);
  out.direct = tree_sum(direct) / L;
  out.orthog = tree_sum(orth) / L;
  out.orthog_unrestricted = tree_sum(loose) / L;
  out.difference = out.direct - out.orthog;
  return out;
}

// ---------------------------------------------------------------------------
// Central non-vanishing.

struct NonvanishingReport {
  double Q = 0.0;
  double threshold = 0.0;
  double kappa = 0.0;
  double T = 0.0;
  std::size_t count = 0;
  std::size_t total = 0;
  double proportion = 0.0;
  double density_bound = 0.0;  // Σ_χ max(0, 1 - Σ_γ φ((log Q/2π)γ)) / total
  double min_abs_central = std::numeric_limits<double>::infinity();
};

/// Primitive χ with q in [Q/2, Q]: the share with |L(½, χ)| > threshold and
/// the lower bound from 1 - Σ_γ φ((log Q/2π)γ) <= 1(L(½,χ) != 0), Fejér
/// ν = 2 + κ. Truncating at |γ| <= T keeps the per-character inequality:
/// a central zero is inside the window and contributes φ(0) = 1 on its own.
inline NonvanishingReport nonvanishing_proportion(double Q, double threshold, double kappa = 1.0 / 25.0,
                                                  double T = 20.0, unsigned threads = 0,
                                                  const lfunc::ZeroSearchOptions& search = {}) {
  if (!(Q >= 4.0)) throw domain_error("nonvanishing_proportion: Q must be at least 4");
  if (!(kappa >= 0.0)) throw domain_error("nonvanishing_proportion: kappa must be non-negative");
  const double L = std::log(Q);
  const auto phi = TestFunction::fejer(2.0 + kappa);
  std::vector<i64> moduli;
  for (i64 q = std::max<i64>(3, static_cast<i64>(std::ceil(Q / 2.0))); q <= static_cast<i64>(std::floor(Q)); ++q) {
    moduli.push_back(q);
  }
  struct Slot {
    std::size_t count = 0, total = 0;
    std::vector<double> bound;
    double min_abs = std::numeric_limits<double>::infinity();
  };
  std::vector<Slot> slots(moduli.size());
  parallel_for(
      moduli.size(),
      [&](std::size_t i) {
        const i64 q = moduli[i];
        const auto chars = primitive_characters(q);
        const auto sets = lfunc::zeros_for_modulus(q, T, search);
        Slot& s = slots[i];
        for (std::size_t k = 0; k < chars.size(); ++k) {
          if (!sets[k].certificate.matched) {
            throw completeness_error("nonvanishing_proportion: " + sets[k].char_id + " is uncertified",
                                     sets[k].certificate.off_line_suspect);
          }
          const double v = std::abs(lfunc::l_eval(lfunc::make_context(chars[k]), {0.5, 0.0}));
          s.min_abs = std::min(s.min_abs, v);
          if (v > threshold) ++s.count;
          ++s.total;
          s.bound.push_back(std::max(0.0, 1.0 - detail::zero_sum(sets[k].ordinates, phi, L)));
        }
      },
      threads);
  NonvanishingReport r;
  r.Q = Q;
  r.threshold = threshold;
  r.kappa = kappa;
  r.T = T;
  std::vector<double> bounds;
  for (const auto& s : slots) {
    r.count += s.count;
    r.total += s.total;
    r.min_abs_central = std::min(r.min_abs_central, s.min_abs);
    bounds.push_back(tree_sum(s.bound));
  }
  if (r.total > 0) {
    r.proportion = static_cast<double>(r.count) / static_cast<double>(r.total);
    r.density_bound = tree_sum(bounds) / static_cast<double>(r.total);
  }
  return r;
}

}  // namespace zeroscope::density
