#pragma once

// Dirichlet L-functions of primitive characters through the rotated smoothed
// approximate functional equation, the Hardy Z-function, and certified
// localization of critical-line zeros.
//
// With u = (s+a)/2, u' = (1-s+a)/2 and δ = e^{iφ}, |φ| < π/2,
//
//   Λ(s, χ) = Σ χ(n) n^a (πn²/q)^{-u} Γ(u, πn²δ/q)
//           + ε(χ) Σ χ̄(n) n^a (πn²/q)^{-u'} Γ(u', πn²δ̄/q).
//
// The identity holds for every such φ. Choosing φ ≈ sign(t)·π/2 keeps each
// term of the size of Λ itself instead of e^{π|t|/4} times larger.

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "zeroscope/characters.hpp"
#include "zeroscope/errors.hpp"
#include "zeroscope/special.hpp"

namespace zeroscope::lfunc {

using special::cplx;
inline constexpr double pi = std::numbers::pi;

struct TruncationPolicy {
  double factor = 3.0;        // N_terms = ceil(factor·√(q(|t|+5)/2π))
  double max_height = 400.0;  // beyond this Λ leaves the double range
};

inline int n_terms(i64 q, double t, const TruncationPolicy& policy = {}) {
  return static_cast<int>(
      std::ceil(policy.factor * std::sqrt(static_cast<double>(q) * (std::abs(t) + 5.0) / (2.0 * pi))));
}

/// Rotation angle φ(t) of the theta-integral contour.
inline double rotation_angle(double t) {
  if (t == 0.0) return 0.0;
  const double eta = std::min(0.5 * pi, 10.0 / (std::abs(t) + 5.0));
  return std::copysign(0.5 * pi - eta, t);
}

struct CompletedLContext {
  DirichletCharacter chi;
  i64 q = 0;
  int a = 0;
  cplx root_number;       // ε(χ) = τ(χ) / (i^a √q)
  cplx root_number_sqrt;  // principal square root of ε
  std::vector<cplx> residues;  // χ(r) for r mod q
  TruncationPolicy policy;

  cplx coefficient(i64 n) const { return residues[static_cast<std::size_t>(n % q)]; }
};

inline CompletedLContext make_context(const DirichletCharacter& chi, TruncationPolicy policy = {}) {
  if (chi.modulus() <= 1) throw domain_error("L-function context: modulus must exceed 1");
  if (!chi.is_primitive()) {
    throw domain_error("L-function context: character " + chi.id() +
                       " is not primitive; the functional equation does not apply");
  }
  CompletedLContext ctx{chi, chi.modulus(), chi.parity(), {}, {}, chi.value_table(), policy};
  const cplx i_a = ctx.a ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
  ctx.root_number = gauss_sum(chi) / (i_a * std::sqrt(static_cast<double>(ctx.q)));
  ctx.root_number_sqrt = std::sqrt(ctx.root_number);
  return ctx;
}

/// Weights of the two sums at s for n = 1..N.
inline void afe_weights(i64 q, int a, cplx s, int N, cplx* w1, cplx* w2) {
  const cplx u = 0.5 * (s + static_cast<double>(a));
  const cplx u2 = 0.5 * (1.0 - s + static_cast<double>(a));
  const double phi = rotation_angle(s.imag());
  const double scale = pi / static_cast<double>(q);
  for (int n = 1; n <= N; ++n) {
    const double x = scale * n * n;
    const double na = a ? static_cast<double>(n) : 1.0;
    w1[n - 1] = na * special::rotated_upper_gamma(u, x, phi);
    w2[n - 1] = na * special::rotated_upper_gamma(u2, x, -phi);
  }
}

inline void check_height(const CompletedLContext& ctx, cplx s) {
  if (std::abs(s.imag()) > ctx.policy.max_height) {
    throw range_error("L-function: |Im s| = " + std::to_string(std::abs(s.imag())) +
                      " exceeds the policy maximum " + std::to_string(ctx.policy.max_height));
  }
}

/// Λ(s, χ) with an explicit number of terms.
inline cplx completed_l(const CompletedLContext& ctx, cplx s, int N) {
  check_height(ctx, s);
  std::vector<cplx> w1(static_cast<std::size_t>(N)), w2(static_cast<std::size_t>(N));
  afe_weights(ctx.q, ctx.a, s, N, w1.data(), w2.data());
  cplx s1 = 0.0, s2 = 0.0;
  for (int n = N; n >= 1; --n) {
    const cplx c = ctx.coefficient(n);
    s1 += c * w1[static_cast<std::size_t>(n - 1)];
    s2 += std::conj(c) * w2[static_cast<std::size_t>(n - 1)];
  }
  return s1 + ctx.root_number * s2;
}

inline cplx completed_l(const CompletedLContext& ctx, cplx s) {
  return completed_l(ctx, s, n_terms(ctx.q, s.imag(), ctx.policy));
}

/// log of the gamma factor (q/π)^{(s+a)/2} Γ((s+a)/2).
inline cplx log_gamma_factor(i64 q, int a, cplx s) {
  const cplx u = 0.5 * (s + static_cast<double>(a));
  return u * std::log(static_cast<double>(q) / pi) + special::lgamma(u);
}

/// L(s, χ).
inline cplx l_eval(const CompletedLContext& ctx, cplx s) {
  return completed_l(ctx, s) * std::exp(-log_gamma_factor(ctx.q, ctx.a, s));
}

/// Positive normalizer making |Z(t)| = |L(½ + it)|.
inline double hardy_norm(i64 q, int a, double t) {
  return std::exp(-log_gamma_factor(q, a, cplx(0.5, t)).real());
}

/// ε^{-1/2} Λ(½ + it) scaled by hardy_norm; the imaginary part is the
/// evaluation residual.
inline cplx hardy_z_complex(const CompletedLContext& ctx, double t) {
  return completed_l(ctx, cplx(0.5, t)) / ctx.root_number_sqrt * hardy_norm(ctx.q, ctx.a, t);
}

inline double checked_real(cplx z, double t) {
  if (!(std::abs(z.imag()) <= 1e-6 * std::max(1.0, std::abs(z.real())))) {
    throw numeric_error("hardy_z: imaginary residual " + std::to_string(z.imag()) + " at t = " +
                        std::to_string(t));
  }
  return z.real();
}

/// Hardy Z-function, real on the real line; sign changes mark zeros.
inline double hardy_z(const CompletedLContext& ctx, double t) {
  return checked_real(hardy_z_complex(ctx, t), t);
}

// ---------------------------------------------------------------------------
// Chebyshev interpolation on blocks.

struct ChebBlock {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> coeffs;
  std::vector<double> dcoeffs;  // derivative series, in t

  /// Coefficients from values at t_j = mid - half·cos(πj/n), j = 0..n.
  static ChebBlock from_values(double lo, double hi, const std::vector<double>& values) {
    ChebBlock b{lo, hi, {}};
    const std::size_t n = values.size() - 1;
    b.coeffs.assign(n + 1, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k <= n; ++k) {
        // Node k in the standard ordering x_k = cos(πk/n) is values[n - k].
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        sum += w * values[n - k] * std::cos(pi * static_cast<double>(j * k) / static_cast<double>(n));
      }
      b.coeffs[j] = 2.0 * sum / static_cast<double>(n);
    }
    b.coeffs[0] *= 0.5;
    b.coeffs[n] *= 0.5;
    b.dcoeffs.assign(n + 1, 0.0);
    for (std::size_t k = n; k >= 1; --k) {
      const double after = k + 1 <= n ? b.dcoeffs[k + 1] : 0.0;
      b.dcoeffs[k - 1] = after + 2.0 * static_cast<double>(k) * b.coeffs[k];
    }
    b.dcoeffs[0] *= 0.5;
    for (double& d : b.dcoeffs) d *= 2.0 / (hi - lo);
    return b;
  }

  static double node(double lo, double hi, std::size_t j, std::size_t n) {
    if (j == 0) return lo;
    if (j == n) return hi;
    return 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(pi * static_cast<double>(j) / static_cast<double>(n));
  }

  static double clenshaw(const std::vector<double>& c, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
      const double b0 = c[k] + 2.0 * x * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return c[0] + x * b1 - b2;
  }

  double operator()(double t) const { return clenshaw(coeffs, (2.0 * t - lo - hi) / (hi - lo)); }
  double derivative(double t) const { return clenshaw(dcoeffs, (2.0 * t - lo - hi) / (hi - lo)); }

  /// Size of the last coefficients relative to the largest, or absolute
  /// where |Z| < 1: evaluation noise sets an absolute floor, and an absolute
  /// error is what bounds the error in an ordinate.
  double tail() const {
    double big = 0.0;
    for (double c : coeffs) big = std::max(big, std::abs(c));
    const std::size_t n = coeffs.size();
    const double last = std::max(std::abs(coeffs[n - 1]), std::abs(coeffs[n - 2]));
    return last / std::max(big, 1.0);
  }

  /// True when the upper half of the series is flat rather than decaying,
  /// which is what evaluation noise looks like; splitting cannot help then.
  bool noise_plateau() const {
    const std::size_t n = coeffs.size();
    double mid = 0.0, top = 0.0;
    for (std::size_t k = n / 2; k < n / 2 + 4; ++k) mid = std::max(mid, std::abs(coeffs[k]));
    for (std::size_t k = n - 4; k < n; ++k) top = std::max(top, std::abs(coeffs[k]));
    return top >= 0.05 * mid;
  }
};

/// Piecewise Chebyshev interpolant of Z on [-T, T].
struct ZInterpolant {
  std::vector<ChebBlock> blocks;

  const ChebBlock& block(double t) const {
    auto it = std::upper_bound(blocks.begin(), blocks.end(), t,
                               [](double v, const ChebBlock& b) { return v < b.hi; });
    if (it == blocks.end()) --it;
    return *it;
  }
  double operator()(double t) const { return block(t)(t); }
  double derivative(double t) const { return block(t).derivative(t); }
};

// ---------------------------------------------------------------------------
// Zero sets.

struct Certificate {
  int sign_change_count = 0;
  int winding_count = 0;
  bool matched = false;
  bool off_line_suspect = false;
  double grid_step = 0.0;
  int grid_halvings = 0;
};

struct ZeroSet {
  std::string char_id;
  i64 q = 0;
  double T = 0.0;
  std::vector<double> ordinates;
  Certificate certificate;

  /// Zero set of the conjugate character: ordinates negate.
  ZeroSet conjugated(std::string conj_id) const {
    ZeroSet z = *this;
    z.char_id = std::move(conj_id);
    z.ordinates.clear();
    for (auto it = ordinates.rbegin(); it != ordinates.rend(); ++it) z.ordinates.push_back(-*it);
    return z;
  }
};

struct ZeroSearchOptions {
  double block_length = 1.5;
  std::size_t cheb_degree = 32;
  double cheb_tail_tolerance = 1e-12;
  double cheb_noise_floor = 1e-9;  // accepted tail once coefficients stop decaying
  double bracket_width = 1e-12;
  int grid_halvings = 2;
  double grid_step = 0.0;  // 0: min(0.25, π / log(q(T+3)))
  double vertical_step = 0.2;
  double horizontal_step = 0.05;
  double near_contour = 1e-6;
  double nudge = 1e-3;
  int nudge_retries = 5;
};

inline double default_grid_step(i64 q, double T) {
  return std::min(0.25, pi / std::log(static_cast<double>(q) * (T + 3.0)));
}

namespace detail {

// Sign changes of f on the grid -T = t_0 < ... < t_K = T, each refined to a
// bracket narrower than `width`. Between two grid points of equal sign, an
// interior extremum that crosses zero (found from df) yields two brackets.
template <class F, class DF>
std::vector<double> scan_and_refine(const F& f, const DF& df, double T, double step, double width) {
  const auto K = static_cast<std::size_t>(std::ceil(2.0 * T / step));
  std::vector<double> roots;
  auto tol = [width](double a, double b) { return std::abs(b - a) < width; };
  auto refine = [&](double a, double b, double fa, double fb) {
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    roots.push_back(0.5 * (r.first + r.second));
  };
  double t_prev = -T;
  double f_prev = f(t_prev);
  double d_prev = df(t_prev);
  for (std::size_t k = 1; k <= K; ++k) {
    const double t = (k == K) ? T : -T + 2.0 * T * static_cast<double>(k) / static_cast<double>(K);
    const double ft = f(t);
    const double dt = df(t);
    if ((f_prev < 0.0) != (ft < 0.0)) {
      refine(t_prev, t, f_prev, ft);
    } else if ((d_prev < 0.0) != (dt < 0.0) && (f_prev < 0.0) != (d_prev < 0.0)) {
      // f moves toward zero at t_prev and away at t: locate the extremum.
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(df, t_prev, t, d_prev, dt, tol, iters);
      const double te = 0.5 * (r.first + r.second);
      const double fe = f(te);
      if ((fe < 0.0) != (ft < 0.0)) {
        refine(t_prev, te, f_prev, fe);
        refine(te, t, fe, ft);
      }
    }
    t_prev = t;
    f_prev = ft;
    d_prev = dt;
  }
  return roots;
}

// Rectangle Re s ∈ [-1, 2], |Im s| <= T, counterclockwise from 2 - iT.
inline std::vector<cplx> contour_nodes(double T, const ZeroSearchOptions& opt) {
  std::vector<cplx> pts;
  auto vertical = static_cast<std::size_t>(std::ceil(2.0 * T / opt.vertical_step));
  if (vertical % 2 == 0) ++vertical;  // keeps t = 0, where u or u' vanishes, off the grid
  const auto horizontal = static_cast<std::size_t>(std::ceil(3.0 / opt.horizontal_step));
  for (std::size_t j = 0; j < vertical; ++j) {
    pts.emplace_back(2.0, -T + 2.0 * T * static_cast<double>(j) / static_cast<double>(vertical));
  }
  for (std::size_t j = 0; j < horizontal; ++j) {
    pts.emplace_back(2.0 - 3.0 * static_cast<double>(j) / static_cast<double>(horizontal), T);
  }
  for (std::size_t j = 0; j < vertical; ++j) {
    pts.emplace_back(-1.0, T - 2.0 * T * static_cast<double>(j) / static_cast<double>(vertical));
  }
  for (std::size_t j = 0; j < horizontal; ++j) {
    pts.emplace_back(-1.0 + 3.0 * static_cast<double>(j) / static_cast<double>(horizontal), -T);
  }
  pts.emplace_back(2.0, -T);
  return pts;
}

// Phase change from s_a to s_b, bisecting until every step turns by less than π/2.
inline double phase_step(const CompletedLContext& ctx, cplx sa, cplx sb, cplx fa, cplx fb,
                         int depth) {
  const double d = std::arg(fb / fa);
  if (std::abs(d) < 0.5 * pi) return d;
  if (depth > 30) {
    throw numeric_error("zero_count: phase tracking failed near s = " +
                        std::to_string(sa.real()) + " + " + std::to_string(sa.imag()) + "i");
  }
  const cplx sm = 0.5 * (sa + sb);
  const cplx fm = completed_l(ctx, sm);
  return phase_step(ctx, sa, sm, fa, fm, depth + 1) + phase_step(ctx, sm, sb, fm, fb, depth + 1);
}

inline int winding_from_values(const CompletedLContext& ctx, const std::vector<cplx>& pts,
                               const std::vector<cplx>& values) {
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    total += phase_step(ctx, pts[j], pts[j + 1], values[j], values[j + 1], 0);
  }
  const double turns = total / (2.0 * pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-3) {
    throw numeric_error("zero_count: winding number " + std::to_string(turns) +
                        " is not close to an integer");
  }
  return static_cast<int>(rounded);
}

}  // namespace detail

/// Argument-principle count of zeros of Λ with |Im| <= T, using direct
/// evaluation on the rectangle Re s ∈ [-1, 2].
inline int zero_count(const CompletedLContext& ctx, double T, const ZeroSearchOptions& opt = {}) {
  if (!(T > 0.0)) throw domain_error("zero_count: T must be positive");
  for (int attempt = 0; attempt <= opt.nudge_retries; ++attempt) {
    const double height = T + attempt * opt.nudge;
    if (std::abs(hardy_z(ctx, height)) < opt.near_contour ||
        std::abs(hardy_z(ctx, -height)) < opt.near_contour) {
      continue;
    }
    const auto pts = detail::contour_nodes(height, opt);
    std::vector<cplx> values(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) values[j] = completed_l(ctx, pts[j]);
    return detail::winding_from_values(ctx, pts, values);
  }
  throw numeric_error("zero_count: a zero stays within the contour tolerance after nudging T");
}

/// Zero search for many primitive characters of one modulus. AFE weights
/// depend only on (q, parity, s), so they are computed once per node and the
/// per-character sums become one complex matrix product.
class ModulusZeroEngine {
 public:
  explicit ModulusZeroEngine(ZeroSearchOptions opt = {}) : opt_(opt) {}

  std::vector<ZeroSet> run(const std::vector<const CompletedLContext*>& ctxs, double T) const {
    if (!(T > 0.0)) throw domain_error("find_zeros: T must be positive");
    std::vector<ZeroSet> out(ctxs.size());
    for (int a = 0; a <= 1; ++a) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < ctxs.size(); ++i) {
        if (ctxs[i]->a == a) idx.push_back(i);
      }
      if (idx.empty()) continue;
      std::vector<const CompletedLContext*> group;
      for (std::size_t i : idx) group.push_back(ctxs[i]);
      auto sets = run_parity(group, T);
      for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = std::move(sets[k]);
    }
    return out;
  }

 private:
  using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

  // Λ at the given points for every context (all sharing q and parity).
  static Matrix batch_completed_l(const std::vector<const CompletedLContext*>& ctxs,
                                  const std::vector<cplx>& pts) {
    const CompletedLContext& first = *ctxs.front();
    int N = 0;
    for (const cplx& s : pts) {
      check_height(first, s);
      N = std::max(N, n_terms(first.q, s.imag(), first.policy));
    }
    const auto P = static_cast<Eigen::Index>(pts.size());
    const auto m = static_cast<Eigen::Index>(ctxs.size());
    Matrix W1 = Matrix::Zero(P, N), W2 = Matrix::Zero(P, N);
    std::vector<cplx> w1(static_cast<std::size_t>(N)), w2(static_cast<std::size_t>(N));
    for (Eigen::Index p = 0; p < P; ++p) {
      const cplx s = pts[static_cast<std::size_t>(p)];
      const int n = n_terms(first.q, s.imag(), first.policy);
      afe_weights(first.q, first.a, s, n, w1.data(), w2.data());
      for (int k = 0; k < n; ++k) {
        W1(p, k) = w1[static_cast<std::size_t>(k)];
        W2(p, k) = w2[static_cast<std::size_t>(k)];
      }
    }
    Matrix C(N, m);
    for (Eigen::Index c = 0; c < m; ++c) {
      for (int k = 0; k < N; ++k) C(k, c) = ctxs[static_cast<std::size_t>(c)]->coefficient(k + 1);
    }
    Matrix S1 = W1 * C;
    Matrix S2 = W2 * C.conjugate();
    for (Eigen::Index c = 0; c < m; ++c) {
      S1.col(c) += ctxs[static_cast<std::size_t>(c)]->root_number * S2.col(c);
    }
    return S1;
  }

  // Interpolant for one block from direct evaluation, splitting when the
  // Chebyshev tail is too large.
  void direct_blocks(const CompletedLContext& ctx, double lo, double hi, int depth,
                     std::vector<ChebBlock>& out) const {
    const std::size_t n = opt_.cheb_degree;
    std::vector<double> values(n + 1);
    for (std::size_t j = 0; j <= n; ++j) values[j] = hardy_z(ctx, ChebBlock::node(lo, hi, j, n));
    auto block = ChebBlock::from_values(lo, hi, values);
    const bool noisy = block.noise_plateau() && block.tail() <= opt_.cheb_noise_floor;
    if (block.tail() > opt_.cheb_tail_tolerance && !noisy && depth < 6) {
      const double mid = 0.5 * (lo + hi);
      direct_blocks(ctx, lo, mid, depth + 1, out);
      direct_blocks(ctx, mid, hi, depth + 1, out);
      return;
    }
    if (block.tail() > opt_.cheb_tail_tolerance && !noisy) {
      throw numeric_error("find_zeros: Z interpolation did not converge on [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    out.push_back(std::move(block));
  }

  std::vector<ZeroSet> run_parity(const std::vector<const CompletedLContext*>& ctxs,
                                  double T) const {
    const CompletedLContext& first = *ctxs.front();
    const i64 q = first.q;
    const std::size_t n = opt_.cheb_degree;
    const auto nblocks = static_cast<std::size_t>(std::ceil(2.0 * T / opt_.block_length));
    const double h = 2.0 * T / static_cast<double>(nblocks);
    auto block_lo = [&](std::size_t b) { return -T + h * static_cast<double>(b); };
    auto block_hi = [&](std::size_t b) { return b + 1 == nblocks ? T : -T + h * static_cast<double>(b + 1); };

    std::vector<cplx> line_pts;
    std::vector<double> line_t;
    for (std::size_t b = 0; b < nblocks; ++b) {
      for (std::size_t j = (b == 0 ? 0 : 1); j <= n; ++j) {
        const double t = ChebBlock::node(block_lo(b), block_hi(b), j, n);
        line_t.push_back(t);
        line_pts.emplace_back(0.5, t);
      }
    }
    const Matrix line = batch_completed_l(ctxs, line_pts);
    const auto contour = detail::contour_nodes(T, opt_);
    const Matrix ring = batch_completed_l(ctxs, contour);

    std::vector<double> norms(line_t.size());
    for (std::size_t j = 0; j < line_t.size(); ++j) norms[j] = hardy_norm(q, first.a, line_t[j]);

    std::vector<ZeroSet> out;
    for (std::size_t c = 0; c < ctxs.size(); ++c) {
      const CompletedLContext& ctx = *ctxs[c];
      ZInterpolant interp;
      for (std::size_t b = 0; b < nblocks; ++b) {
        std::vector<double> values(n + 1);
        for (std::size_t j = 0; j <= n; ++j) {
          const std::size_t g = b * n + j;
          const cplx z = line(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(c)) /
                         ctx.root_number_sqrt * norms[g];
          values[j] = checked_real(z, line_t[g]);
        }
        auto block = ChebBlock::from_values(block_lo(b), block_hi(b), values);
        if (block.tail() > opt_.cheb_tail_tolerance &&
            !(block.noise_plateau() && block.tail() <= opt_.cheb_noise_floor)) {
          direct_blocks(ctx, block_lo(b), block_hi(b), 1, interp.blocks);
        } else {
          interp.blocks.push_back(std::move(block));
        }
      }

      std::vector<cplx> ring_values(contour.size());
      for (std::size_t j = 0; j < contour.size(); ++j) {
        ring_values[j] = ring(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
      }
      const int winding = detail::winding_from_values(ctx, contour, ring_values);

      ZeroSet zs;
      zs.char_id = ctx.chi.id();
      zs.q = q;
      zs.T = T;
      const double base_step = opt_.grid_step > 0.0 ? opt_.grid_step : default_grid_step(q, T);
      for (int halving = 0; halving <= opt_.grid_halvings; ++halving) {
        const double step = std::ldexp(base_step, -halving);
        zs.ordinates = detail::scan_and_refine(
            interp, [&](double t) { return interp.derivative(t); }, T, step, opt_.bracket_width);
        zs.certificate.sign_change_count = static_cast<int>(zs.ordinates.size());
        zs.certificate.winding_count = winding;
        zs.certificate.grid_step = step;
        zs.certificate.grid_halvings = halving;
        zs.certificate.matched = (zs.certificate.sign_change_count == winding);
        if (zs.certificate.matched) break;
      }
      zs.certificate.off_line_suspect =
          !zs.certificate.matched && winding > zs.certificate.sign_change_count;

      const bool near_edge = std::any_of(zs.ordinates.begin(), zs.ordinates.end(), [&](double g) {
        return std::abs(std::abs(g) - T) < opt_.near_contour;
      });
      if (near_edge) zs = nudged(ctx, T);
      out.push_back(std::move(zs));
    }
    return out;
  }

  ZeroSet nudged(const CompletedLContext& ctx, double T) const {
    for (int attempt = 1; attempt <= opt_.nudge_retries; ++attempt) {
      const double height = T + attempt * opt_.nudge;
      auto zs = run_parity({&ctx}, height);
      const bool near_edge = std::any_of(zs[0].ordinates.begin(), zs[0].ordinates.end(),
                                         [&](double g) { return std::abs(std::abs(g) - height) < opt_.near_contour; });
      if (!near_edge) return zs[0];
    }
    throw numeric_error("find_zeros: a zero stays within the contour tolerance after nudging T");
  }

  ZeroSearchOptions opt_;
};

/// All critical-line zeros with |γ| <= T plus the argument-principle certificate.
/// A mismatch raises completeness_error unless `allow_unmatched`.
inline ZeroSet find_zeros(const CompletedLContext& ctx, double T, const ZeroSearchOptions& opt = {},
                          bool allow_unmatched = false) {
  auto zs = ModulusZeroEngine(opt).run({&ctx}, T).front();
  if (!zs.certificate.matched && !allow_unmatched) {
    throw completeness_error("find_zeros: " + zs.char_id + " has " +
                                 std::to_string(zs.certificate.sign_change_count) +
                                 " sign changes but winding count " +
                                 std::to_string(zs.certificate.winding_count),
                             zs.certificate.off_line_suspect);
  }
  return zs;
}

/// Zero sets for every primitive character mod q, in enumeration order. Only
/// one character of each conjugate pair is searched; the other reuses its
/// zeros with γ -> -γ.
inline std::vector<ZeroSet> zeros_for_modulus(i64 q, double T, const ZeroSearchOptions& opt = {},
                                              TruncationPolicy policy = {}) {
  const auto chars = primitive_characters(q);
  std::vector<CompletedLContext> ctxs;
  ctxs.reserve(chars.size());
  for (const auto& chi : chars) ctxs.push_back(make_context(chi, policy));
  std::vector<int> partner(chars.size(), -1);
  std::vector<const CompletedLContext*> todo;
  std::vector<std::size_t> todo_index;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const auto cj = chars[i].conj();
    for (std::size_t j = 0; j < i; ++j) {
      if (chars[j] == cj) partner[i] = static_cast<int>(j);
    }
    if (partner[i] < 0) {
      todo.push_back(&ctxs[i]);
      todo_index.push_back(i);
    }
  }
  auto sets = ModulusZeroEngine(opt).run(todo, T);
  std::vector<ZeroSet> out(chars.size());
  for (std::size_t k = 0; k < todo.size(); ++k) out[todo_index[k]] = std::move(sets[k]);
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (partner[i] >= 0) out[i] = out[static_cast<std::size_t>(partner[i])].conjugated(chars[i].id());
  }
  return out;
}

}  // namespace zeroscope::lfunc
