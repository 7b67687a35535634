#pragma once

// Test functions: the Fejér kernel, whose Fourier transform is a triangle,
// smooth compactly supported bumps built from the mollifier exp(-1/(1-u²)),
// the dyadic partition of unity, and quadrature Fourier transforms.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "zeroscope/errors.hpp"
#include "zeroscope/special.hpp"

namespace zeroscope {

using cplx = std::complex<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// φ(x) = (sin πνx / πνx)², φ̂(t) = (1/ν) max(0, 1 - |t|/ν).
struct FejerKernel {
  double nu = 1.0;

  cplx operator()(cplx z) const {
    const cplx w = std::numbers::pi * nu * z;
    if (std::abs(w) < 1e-2) {
      const cplx w2 = w * w;
      return 1.0 + w2 * (-1.0 / 3.0 + w2 * (2.0 / 45.0 + w2 * (-1.0 / 315.0 + w2 * 2.0 / 14175.0)));
    }
    const cplx s = std::sin(w) / w;
    return s * s;
  }

  double operator()(double x) const { return (*this)(cplx(x, 0.0)).real(); }

  double hat(double t) const {
    const double a = std::abs(t);
    return a >= nu ? 0.0 : (1.0 - a / nu) / nu;
  }
};

inline cplx fejer_eval(const FejerKernel& k, cplx z) { return k(z); }
inline double fejer_hat(const FejerKernel& k, double t) { return k.hat(t); }

namespace detail {

inline double mollifier(double v) {
  const double d = 1.0 - v * v;
  return d <= 0.0 ? 0.0 : std::exp(-1.0 / d);
}

// Smooth step: 0 at u <= 0, 1 at u >= 1, the normalized integral of the
// mollifier in between. A cumulative table on 512 cells plus a 20-point
// Gauss rule inside the last cell keeps it accurate to a few ulps.
class SmoothStep {
 public:
  static const SmoothStep& instance() {
    static const SmoothStep s;
    return s;
  }

  double operator()(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double pos = u * cells;
    auto i = static_cast<std::size_t>(pos);
    if (i >= cells) i = cells - 1;
    const double a = static_cast<double>(i) / cells;
    return (cumulative_[i] + piece(a, u)) / cumulative_[cells];
  }

  /// d/du of the step.
  double derivative(double u) const {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return 2.0 * mollifier(2.0 * u - 1.0) / cumulative_[cells];
  }

 private:
  static constexpr std::size_t cells = 512;

  SmoothStep() {
    cumulative_[0] = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = static_cast<double>(i) / cells;
      const double b = static_cast<double>(i + 1) / cells;
      cumulative_[i + 1] = cumulative_[i] + piece(a, b);
    }
  }

  static double piece(double a, double b) {
    if (b <= a) return 0.0;
    return boost::math::quadrature::gauss<double, 20>::integrate(
        [](double u) { return 2.0 * mollifier(2.0 * u - 1.0); }, a, b);
  }

  std::array<double, cells + 1> cumulative_{};
};

}  // namespace detail

/// Smooth function equal to `amplitude` on the plateau and 0 off the support.
struct SmoothBump {
  Interval support;
  Interval plateau;
  double amplitude = 1.0;

  double operator()(double x) const {
    if (amplitude == 0.0 || x <= support.lo || x >= support.hi) return 0.0;
    if (x >= plateau.lo && x <= plateau.hi) return amplitude;
    const auto& step = detail::SmoothStep::instance();
    if (x < plateau.lo) return amplitude * step((x - support.lo) / (plateau.lo - support.lo));
    return amplitude * step((support.hi - x) / (support.hi - plateau.hi));
  }

  double derivative(double x) const {
    if (amplitude == 0.0 || x <= support.lo || x >= support.hi) return 0.0;
    if (x >= plateau.lo && x <= plateau.hi) return 0.0;
    const auto& step = detail::SmoothStep::instance();
    if (x < plateau.lo) {
      const double w = plateau.lo - support.lo;
      return amplitude * step.derivative((x - support.lo) / w) / w;
    }
    const double w = support.hi - plateau.hi;
    return -amplitude * step.derivative((support.hi - x) / w) / w;
  }

  SmoothBump scaled(double c) const {
    SmoothBump b = *this;
    b.amplitude *= c;
    return b;
  }

  static SmoothBump zero() { return SmoothBump{{0.0, 1.0}, {0.25, 0.75}, 0.0}; }
};

inline SmoothBump make_bump(Interval support, Interval plateau) {
  if (!(support.lo < support.hi)) throw domain_error("make_bump: degenerate support");
  if (!(plateau.lo <= plateau.hi)) throw domain_error("make_bump: degenerate plateau");
  if (!(support.lo < plateau.lo && plateau.hi < support.hi)) {
    throw domain_error("make_bump: plateau must lie strictly inside the support");
  }
  return SmoothBump{support, plateau, 1.0};
}

/// Bump with transitions of 1/8 of the support length on each side.
inline SmoothBump make_bump(Interval support) {
  const double w = support.length() / 8.0;
  return make_bump(support, {support.lo + w, support.hi - w});
}

/// H = 1 on (0, 1], 0 on [2, ∞).
inline double dyadic_cutoff(double x) {
  return 1.0 - detail::SmoothStep::instance()(x - 1.0);
}

/// V(x) = H(x) - H(2x), supported in [1/2, 2].
inline double dyadic_partition_value(double x) {
  if (!(x > 0.0)) throw domain_error("dyadic_partition_value: x must be positive");
  return dyadic_cutoff(x) - dyadic_cutoff(2.0 * x);
}

/// V(x / 2^j).
inline double dyadic_piece(int j, double x) {
  return dyadic_partition_value(std::ldexp(x, -j));
}

/// ∫ f(x) e(-xt) dx over the given interval. Composite Gauss–Kronrod on
/// uniform panels, doubled until either the summed Kronrod error estimate or
/// the change between successive levels is below `tol` (absolute). The
/// second test matters at high frequency, where rounding in the phase puts a
/// floor under every per-panel estimate.
inline cplx fourier_quadrature(const std::function<double(double)>& f, double t, Interval support,
                               double tol = 1e-10) {
  if (!(support.lo < support.hi)) throw domain_error("fourier_quadrature: empty interval");
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double w = 2.0 * std::numbers::pi * t;
  constexpr int max_doublings = 8;
  int panels = std::max(4, static_cast<int>(std::ceil(4.0 * std::abs(t) * support.length())));
  cplx previous;
  double change = 0.0;
  for (int level = 0; level <= max_doublings; ++level, panels *= 2) {
    const double h = support.length() / panels;
    double re = 0.0, im = 0.0, err_total = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double a = support.lo + i * h;
      const double b = i + 1 == panels ? support.hi : a + h;
      double err = 0.0;
      re += GK::integrate([&](double x) { return f(x) * std::cos(w * x); }, a, b, 0, 0.0, &err);
      err_total += err;
      im -= GK::integrate([&](double x) { return f(x) * std::sin(w * x); }, a, b, 0, 0.0, &err);
      err_total += err;
    }
    const cplx value{re, im};
    if (err_total <= tol) return value;
    if (level > 0) {
      change = std::abs(value - previous);
      if (change <= tol) return value;
    }
    previous = value;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", change);
  throw numeric_error(std::string("fourier_quadrature: refinement did not reach tolerance (change ") +
                      buf + ")");
}

/// ∫_X^∞ φ(x) cos(2πtx) dx for the Fejér kernel, exactly via Si.
inline double fejer_cos_tail(const FejerKernel& k, double t, double X) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double w = two_pi * std::abs(t);
  const double b = two_pi * k.nu;
  using special::cos_over_x2_tail;
  const double inner = cos_over_x2_tail(w, X) - 0.5 * cos_over_x2_tail(w + b, X) -
                       0.5 * cos_over_x2_tail(std::abs(w - b), X);
  return inner / (2.0 * std::numbers::pi * std::numbers::pi * k.nu * k.nu);
}

/// ∫_R φ(x) e(-xt) dx for the Fejér kernel: Gauss panels on [0, X] plus the
/// exact tail beyond X.
inline double fejer_fourier_check(const FejerKernel& k, double t, double X = 50.0) {
  const double w = 2.0 * std::numbers::pi * t;
  double body = 0.0;
  const int panels = static_cast<int>(std::ceil(X * 2.0 * std::max(1.0, k.nu + std::abs(t))));
  const double h = X / panels;
  for (int i = 0; i < panels; ++i) {
    body += boost::math::quadrature::gauss<double, 30>::integrate(
        [&](double x) { return k(x) * std::cos(w * x); }, i * h, (i + 1) * h);
  }
  return 2.0 * (body + fejer_cos_tail(k, t, X));
}

/// An even test function φ with φ̂ supported in [-ν, ν]. Either the Fejér
/// kernel or φ̂ = a smooth bump symmetric about 0, in which case φ is
/// evaluated by quadrature of φ̂.
class TestFunction {
 public:
  static TestFunction fejer(double nu, double scale = 1.0) {
    if (!(nu > 0.0)) throw domain_error("fejer: nu must be positive");
    TestFunction f;
    f.fejer_ = FejerKernel{nu};
    f.nu_ = nu;
    f.scale_ = scale;
    f.descriptor_ = "fejer nu=" + format(nu);
    return f;
  }

  static TestFunction bump(Interval hat_support, double scale = 1.0) {
    if (std::abs(hat_support.lo + hat_support.hi) > 1e-12 || !(hat_support.hi > 0.0)) {
      throw domain_error("bump test function: support must be symmetric, [-a, a] with a > 0");
    }
    TestFunction f;
    f.is_bump_ = true;
    f.hat_bump_ = make_bump(hat_support);
    f.nu_ = hat_support.hi;
    f.scale_ = scale;
    f.descriptor_ = "bump support=" + format(hat_support.lo) + "," + format(hat_support.hi);
    return f;
  }

  double nu() const { return nu_; }
  bool is_fejer() const { return !is_bump_; }
  const std::string& descriptor() const { return descriptor_; }
  double scale() const { return scale_; }

  TestFunction scaled(double c) const {
    TestFunction f = *this;
    f.scale_ *= c;
    return f;
  }

  double hat(double t) const {
    return scale_ * (is_bump_ ? hat_bump_(t) : fejer_.hat(t));
  }

  double operator()(double x) const { return (*this)(cplx(x, 0.0)).real(); }

  cplx operator()(cplx z) const {
    if (!is_bump_) return scale_ * fejer_(z);
    // φ(z) = 2 ∫_0^ν φ̂(t) cos(2πzt) dt.
    // Panels split at the plateau edge, where φ̂ stops being constant.
    const double a = nu_;
    const double edge = hat_bump_.plateau.hi;
    const double per_unit = std::max(8.0, std::ceil(4.0 * (1.0 + std::abs(z))));
    const int n_flat = static_cast<int>(std::ceil(per_unit * edge));
    const int n_ramp = static_cast<int>(std::ceil(2.0 * per_unit * (a - edge))) + 4;
    cplx sum = 0.0;
    for (int i = 0; i < n_flat + n_ramp; ++i) {
      const double lo = i < n_flat ? edge * i / n_flat : edge + (a - edge) * (i - n_flat) / n_ramp;
      const double hi = i < n_flat ? edge * (i + 1) / n_flat : edge + (a - edge) * (i + 1 - n_flat) / n_ramp;
      const double re = boost::math::quadrature::gauss<double, 20>::integrate(
          [&](double t) { return hat_bump_(t) * std::cos(2.0 * std::numbers::pi * z * t).real(); },
          lo, hi);
      const double im = z.imag() == 0.0
                            ? 0.0
                            : boost::math::quadrature::gauss<double, 20>::integrate(
                                  [&](double t) {
                                    return hat_bump_(t) *
                                           std::cos(2.0 * std::numbers::pi * z * t).imag();
                                  },
                                  lo, hi);
      sum += cplx(re, im);
    }
    return 2.0 * scale_ * sum;
  }

  /// c with |φ(x)| <= c / x² for real x. For the bump this is ‖φ̂''‖₁ / 4π²,
  /// with ‖φ̂''‖₁ taken as the total variation of φ̂' on a fine grid plus 5%.
  double decay_constant() const {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    if (!is_bump_) return std::abs(scale_) / (pi2 * nu_ * nu_);
    const int n = 20000;
    const double h = 2.0 * nu_ / n;
    double tv = 0.0;
    double prev = hat_bump_.derivative(-nu_);
    for (int i = 1; i <= n; ++i) {
      const double d = hat_bump_.derivative(-nu_ + i * h);
      tv += std::abs(d - prev);
      prev = d;
    }
    return std::abs(scale_) * 1.05 * tv / (4.0 * pi2);
  }

 private:
  static std::string format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  bool is_bump_ = false;
  FejerKernel fejer_{};
  SmoothBump hat_bump_{};
  double nu_ = 1.0;
  double scale_ = 1.0;
  std::string descriptor_;
};

}  // namespace zeroscope
