#pragma once

// Complex special functions used by the L-function and band-limited layers:
// log-gamma, the rotated upper incomplete gamma that carries the weights of
// the approximate functional equation, and the sine/cosine integrals used for
// analytic Fourier tails.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "zeroscope/errors.hpp"

namespace zeroscope::special {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;

/// log Γ(z) modulo 2πi. Shifts to Re z >= 15 and applies the Stirling series,
/// which is accurate to a few ulps there.
inline cplx lgamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    throw domain_error("lgamma: pole at non-positive integer");
  }
  cplx shift = 1.0;
  while (z.real() < 15.0) {
    shift *= z;
    z += 1.0;
  }
  static constexpr std::array<double, 8> stirling = {
      1.0 / 12.0,          -1.0 / 360.0,  1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0};
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx corr = 0.0;
  cplx power = inv;
  for (double c : stirling) {
    corr += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + corr - std::log(shift);
}

inline cplx gamma(cplx z) { return std::exp(lgamma(z)); }

/// e^w - 1 without cancellation for small |w|.
inline cplx expm1(cplx w) {
  const double x = w.real();
  const double y = w.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

namespace detail {

// ζ(k) for 2 <= k < 40, by direct summation plus an Euler–Maclaurin tail.
inline const std::array<double, 40>& zeta_table() {
  static const std::array<double, 40> table = [] {
    std::array<double, 40> t{};
    for (int k = 2; k < 40; ++k) {
      const double n0 = 12.0;
      double sum = 0.0;
      for (int n = 11; n >= 1; --n) sum += std::pow(n, -k);
      const double s = k;
      sum += std::pow(n0, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n0, -s) +
             s / 12.0 * std::pow(n0, -s - 1.0) -
             s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(n0, -s - 3.0) +
             s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 *
                 std::pow(n0, -s - 5.0);
      t[static_cast<std::size_t>(k)] = sum;
    }
    return t;
  }();
  return table;
}

// (Γ(1+u) - 1)/u for |u| < 1/4 via the Taylor series of log Γ(1+u).
inline cplx gamma1p_m1_over_u(cplx u) {
  const auto& zeta = zeta_table();
  cplx lg = -euler_gamma * u;
  cplx power = -u;
  for (int k = 2; k < 40; ++k) {
    power *= -u;
    const cplx term = zeta[static_cast<std::size_t>(k)] * power / static_cast<double>(k);
    lg += term;
    if (std::abs(term) < 1e-18 * std::abs(lg)) break;
  }
  // expm1(lg)/u with lg = u * (stuff): divide after expm1 keeps relative accuracy.
  return expm1(lg) / u;
}

inline cplx expm1_over_u(cplx u, cplx log_z) {
  const cplx w = u * log_z;
  if (std::abs(w) < 1e-300) return log_z;
  return expm1(w) / u;
}

}  // namespace detail

/// x^{-u} Γ(u, x e^{iφ}) for x > 0 and |φ| < π/2.
///
/// This is the weight of the n-th term in the rotated approximate functional
/// equation, where x = π n² / q. Computing the product directly keeps the
/// factor δ^u = e^{iφu} exact instead of dividing two huge quantities.
inline cplx rotated_upper_gamma(cplx u, double x, double phi) {
  // Γ(u, z) is entire in u; at u = 0 the small-u formulas below divide by u.
  if (std::abs(u) < 1e-13) u = cplx(1e-13, 0.0);
  const cplx delta_log(0.0, phi);
  const cplx z = std::polar(x, phi);
  const double az = std::abs(z);
  const double au = std::abs(u);
  const cplx log_x(std::log(x), 0.0);
  const cplx log_z = log_x + delta_log;

  // Legendre continued fraction, modified Lentz.
  auto continued_fraction = [&] {
    constexpr double tiny = 1e-300;
    cplx b = z + 1.0 - u;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 20000; ++i) {
      const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - u);
      b += 2.0;
      d = an * d + b;
      if (std::abs(d) < tiny) d = tiny;
      c = b + an / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const cplx delta = d * c;
      h *= delta;
      if (std::abs(delta - 1.0) < 1e-16) {
        return std::exp(u * delta_log - z) * h;
      }
    }
    throw numeric_error("rotated_upper_gamma: continued fraction did not converge");
  };

  if (az > au + 2.0 + 0.5 * std::sqrt(au) || az > 60.0) return continued_fraction();

  if (au < 0.25) {
    // Γ(u) - z^u/u handled through (Γ(1+u) - 1)/u - (z^u - 1)/u.
    const cplx zu = std::exp(u * log_z);
    cplx tail = 0.0;
    cplx power = 1.0;
    for (int k = 1; k < 400; ++k) {
      power *= -z / static_cast<double>(k);
      const cplx term = power / (u + static_cast<double>(k));
      tail += term;
      if (std::abs(term) < 1e-18 * (std::abs(tail) + 1.0) && k > az) break;
    }
    const cplx head = detail::gamma1p_m1_over_u(u) - detail::expm1_over_u(u, log_z);
    return std::exp(-u * log_x) * (head - zu * tail);
  }

  // Γ(u) - γ(u, z), with γ(u, z) = z^u e^{-z} Σ z^k / (u)_{k+1}.
  cplx term = 1.0 / u;
  cplx sum = term;
  for (int k = 1; k < 2000; ++k) {
    term *= z / (u + static_cast<double>(k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > az - au) {
      return std::exp(lgamma(u) - u * log_x) - std::exp(u * delta_log - z) * sum;
    }
  }
  throw numeric_error("rotated_upper_gamma: series did not converge");
}

/// Upper incomplete gamma Γ(u, z) for complex u and z off the negative axis.
inline cplx upper_gamma(cplx u, cplx z) {
  const double x = std::abs(z);
  const double phi = std::arg(z);
  if (std::abs(phi) >= 0.5 * pi) throw domain_error("upper_gamma: |arg z| must be < pi/2");
  return std::exp(u * std::log(x)) * rotated_upper_gamma(u, x, phi);
}

/// Sine and cosine integrals Si(x), Ci(x) for x > 0.
struct SiCi {
  double si;
  double ci;
};

inline SiCi sici(double x) {
  if (!(x > 0.0)) throw domain_error("sici: argument must be positive");
  if (x > 2.0) {
    // E1(ix) by continued fraction; Ci + i(Si - π/2) = -E1(ix).
    constexpr double tiny = 1e-300;
    cplx b(1.0, x);
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 100000; ++i) {
      const double a = -static_cast<double>(i) * i;
      b += 2.0;
      d = 1.0 / (a * d + b);
      c = b + a / c;
      const cplx del = c * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
    }
    h *= cplx(std::cos(x), -std::sin(x));
    return {0.5 * pi + h.imag(), -h.real()};
  }
  // Power series.
  double si = 0.0;
  double ci = 0.0;
  double term = x;
  for (int k = 0; k < 60; ++k) {
    // term = (-1)^k x^{2k+1}/(2k+1)!
    si += term / (2.0 * k + 1.0);
    const double next_c = -term * x / (2.0 * k + 2.0);  // (-1)^{k+1} x^{2k+2}/(2k+2)!
    ci += next_c / (2.0 * k + 2.0);
    term = next_c * x / (2.0 * k + 3.0);
    if (std::abs(term) < 1e-18) break;
  }
  ci += euler_gamma + std::log(x);
  return {si, ci};
}

/// ∫_X^∞ cos(ω x) / x² dx for X > 0, ω >= 0.
inline double cos_over_x2_tail(double omega, double X) {
  if (omega == 0.0) return 1.0 / X;
  const double y = omega * X;
  return std::cos(y) / X - omega * (0.5 * pi - sici(y).si);
}

}  // namespace zeroscope::special
