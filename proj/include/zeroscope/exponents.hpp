#pragma once

// Exact exponent bookkeeping for the equidistribution estimate.
//
// The parameters are λ, δ, ρ, σ and the level ϖ with X = Q^{2+ϖ}. Every
// bound is a rational-coefficient linear form in the parameters compared with
// a function of ϖ of the shape n(ϖ)/(2+ϖ), n a polynomial of degree <= 2.
// Since 2+ϖ > 0 everything reduces to sign questions for n, solved exactly.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "zeroscope/errors.hpp"

namespace zeroscope::exponents {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long p, long long q = 1) { return Rational(p, q); }

/// "p/q" with an explicit denominator, also for integers.
inline std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// Parses "p/q", "p" or a terminating decimal such as "0.05".
inline Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const Integer p(s.substr(0, slash));
      const Integer q(s.substr(slash + 1));
      if (q == 0) throw domain_error("zero denominator in '" + s + "'");
      return Rational(p, q);
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(Integer(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+") throw domain_error("empty number");
    // A leading 0 would make the integer parser read octal.
    const std::size_t sign = digits[0] == '-' || digits[0] == '+' ? 1 : 0;
    const auto first = digits.find_first_not_of('0', sign);
    digits.erase(sign, first == std::string::npos ? digits.size() - sign - 1 : first - sign);
    Integer scale = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) scale *= 10;
    return Rational(Integer(digits), scale);
  } catch (const domain_error&) {
    throw;
  } catch (const std::exception&) {
    throw domain_error("not a rational number: '" + s + "'");
  }
}

inline int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

// ---------------------------------------------------------------------------
// Quadratic irrationals a + b√d, enough to hold every boundary point.

struct Surd {
  Rational a = 0;
  Rational b = 0;
  Integer d = 0;  // squarefree > 1 when b != 0

  bool is_rational() const { return b == 0; }
  double to_double() const {
    return static_cast<double>(a) + static_cast<double>(b) * std::sqrt(static_cast<double>(d));
  }

  std::string str() const {
    if (is_rational()) return to_string(a);
    return to_string(a) + (b < 0 ? " - " : " + ") + to_string(b < 0 ? Rational(-b) : b) +
           "*sqrt(" + d.str() + ")";
  }
};

/// sign(u + v√d), exactly.
inline int surd_sign(const Rational& u, const Rational& v, const Integer& d) {
  if (v == 0 || d == 0) return sign(u);
  const int su = sign(u);
  const int sv = sign(v);
  if (su == 0) return sv;
  if (su == sv) return su;
  const Rational lhs = u * u;
  const Rational rhs = v * v * Rational(d);
  if (lhs > rhs) return su;
  if (lhs < rhs) return sv;
  return 0;
}

inline int compare(const Surd& x, const Surd& y) {
  const Rational u = x.a - y.a;
  if (y.b == 0) return surd_sign(u, x.b, x.d);
  if (x.b == 0) return surd_sign(u, -y.b, y.d);
  if (x.d == y.d) return surd_sign(u, x.b - y.b, x.d);
  // u + v1√d1 + w√d2 with distinct radicands.
  const int sa = surd_sign(u, x.b, x.d);
  const int sb = -sign(y.b);
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  const Rational w = -y.b;
  const int s = surd_sign(u * u + x.b * x.b * Rational(x.d) - w * w * Rational(y.d),
                          2 * u * x.b, x.d);
  if (s > 0) return sa;
  if (s < 0) return sb;
  return 0;
}

inline bool operator<(const Surd& x, const Surd& y) { return compare(x, y) < 0; }
inline bool operator==(const Surd& x, const Surd& y) { return compare(x, y) == 0; }

// ---------------------------------------------------------------------------
// Polynomials of degree <= 2 in ϖ.

using Poly = std::array<Rational, 3>;

inline Rational poly_eval(const Poly& p, const Rational& w) { return p[0] + w * (p[1] + w * p[2]); }

inline int poly_sign(const Poly& p, const Surd& x) {
  if (x.is_rational()) return sign(poly_eval(p, x.a));
  const Rational rd(x.d);
  const Rational u = p[0] + p[1] * x.a + p[2] * (x.a * x.a + x.b * x.b * rd);
  const Rational v = p[1] * x.b + 2 * p[2] * x.a * x.b;
  return surd_sign(u, v, x.d);
}

/// Sign of p on (x, x + ε) for small ε > 0.
inline int poly_sign_right(const Poly& p, const Surd& x) {
  if (int s = poly_sign(p, x)) return s;
  if (int s = poly_sign(Poly{p[1], 2 * p[2], 0}, x)) return s;
  return sign(p[2]);
}

namespace detail {

inline std::pair<Integer, Integer> split_square(Integer m) {
  Integer outside = 1;
  Integer inside = 1;
  for (Integer f = 2; f * f <= m; ++f) {
    while (m % (f * f) == 0) {
      m /= f * f;
      outside *= f;
    }
    if (m % f == 0) {
      m /= f;
      inside *= f;
    }
  }
  return {outside, inside * m};
}

}  // namespace detail

/// Real roots, increasing; empty for the zero polynomial.
inline std::vector<Surd> poly_roots(const Poly& p) {
  std::vector<Surd> out;
  if (p[2] == 0) {
    if (p[1] != 0) out.push_back(Surd{-p[0] / p[1], 0, 0});
    return out;
  }
  const Rational disc = p[1] * p[1] - 4 * p[2] * p[0];
  if (disc < 0) return out;
  const Rational centre = -p[1] / (2 * p[2]);
  if (disc == 0) {
    out.push_back(Surd{centre, 0, 0});
    return out;
  }
  const Integer num = boost::multiprecision::numerator(disc);
  const Integer den = boost::multiprecision::denominator(disc);
  // √(num/den) = √(num·den)/den = s√f/den.
  const auto [s, f] = detail::split_square(num * den);
  const Rational half_width = Rational(s, den) / (2 * p[2]);
  if (f == 1) {
    out.push_back(Surd{centre - half_width, 0, 0});
    out.push_back(Surd{centre + half_width, 0, 0});
  } else {
    out.push_back(Surd{centre, -half_width, f});
    out.push_back(Surd{centre, half_width, f});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// LinFrac: n(ϖ)/(2+ϖ).

class LinFrac {
 public:
  LinFrac() = default;

  /// (a + bϖ)/(2+ϖ).
  static LinFrac frac(const Rational& a, const Rational& b) { return LinFrac(Poly{a, b, 0}); }
  static LinFrac constant(const Rational& c) { return LinFrac(Poly{2 * c, c, 0}); }
  /// a + bϖ, without a denominator.
  static LinFrac affine(const Rational& a, const Rational& b) {
    return LinFrac(Poly{2 * a, a + 2 * b, b});
  }
  static LinFrac from_numerator(const Poly& n) { return LinFrac(n); }

  const Poly& numerator() const { return n_; }

  Rational operator()(const Rational& w) const {
    if (w <= -2) throw domain_error("LinFrac: evaluation at varpi <= -2");
    return poly_eval(n_, w) / (2 + w);
  }

  /// True when the value is (a + bϖ)/(2+ϖ) with constant a, b.
  bool is_linear() const { return n_[2] == 0; }

  LinFrac operator+(const LinFrac& o) const {
    return LinFrac(Poly{n_[0] + o.n_[0], n_[1] + o.n_[1], n_[2] + o.n_[2]});
  }
  LinFrac operator-(const LinFrac& o) const { return *this + o * Rational(-1); }
  LinFrac operator*(const Rational& c) const { return LinFrac(Poly{n_[0] * c, n_[1] * c, n_[2] * c}); }
  LinFrac operator/(const Rational& c) const { return *this * (Rational(1) / c); }
  bool operator==(const LinFrac& o) const { return n_ == o.n_; }
  bool operator!=(const LinFrac& o) const { return !(*this == o); }

  /// Readable form with integer coefficients, e.g. "(50-249w)/(43(2+w))".
  std::string str() const {
    Integer l = 1;
    for (const auto& c : n_) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(c));
    std::array<Integer, 3> k;
    for (int i = 0; i < 3; ++i) k[i] = boost::multiprecision::numerator(n_[i] * Rational(l));
    Integer g = 0;
    for (const auto& v : k) g = boost::multiprecision::gcd(g, v);
    if (g == 0) return "0";
    Integer denom = l;
    const Integer h = boost::multiprecision::gcd(g, denom);
    for (auto& v : k) v /= h;
    denom /= h;
    std::string num;
    const char* names[3] = {"", "w", "w^2"};
    for (int i = 0; i < 3; ++i) {
      if (k[i] == 0) continue;
      const bool neg = k[i] < 0;
      const Integer mag = neg ? Integer(-k[i]) : k[i];
      if (!num.empty() || neg) num += neg ? "-" : "+";
      if (!(i > 0 && mag == 1)) num += mag.str();
      num += names[i];
    }
    const bool single = (k[0] == 0) + (k[1] == 0) + (k[2] == 0) == 2;
    const std::string top = single ? num : "(" + num + ")";
    if (denom == 1) return top + "/(2+w)";
    return top + "/(" + denom.str() + "(2+w))";
  }

 private:
  explicit LinFrac(Poly n) : n_(std::move(n)) {}
  Poly n_{0, 0, 0};
};

// ---------------------------------------------------------------------------
// Constraint systems in (λ, δ, ρ, σ).

enum class Param : int { lambda = 0, delta = 1, rho = 2, sigma = 3 };

inline constexpr std::array<const char*, 4> param_names{"lambda", "delta", "rho", "sigma"};

inline const char* name(Param p) { return param_names[static_cast<int>(p)]; }

inline Param parse_param(const std::string& s) {
  for (int i = 0; i < 4; ++i) {
    if (s == param_names[i]) return static_cast<Param>(i);
  }
  throw domain_error("unknown parameter '" + s + "'");
}

/// Which estimate a bound comes from.
enum class Source { type_d1, type_d2, type_ii, decomposition };

inline const char* name(Source s) {
  switch (s) {
    case Source::type_d1: return "type-d1";
    case Source::type_d2: return "type-d2";
    case Source::type_ii: return "type-II";
    case Source::decomposition: return "decomposition";
  }
  return "?";
}

/// Σ coef[i]·x_i < rhs(ϖ), or <= when not strict.
struct ExponentConstraint {
  std::array<Rational, 4> coef{0, 0, 0, 0};
  LinFrac rhs;
  bool strict = true;
  Source source = Source::decomposition;
  std::string label;

  bool involves(Param p) const { return coef[static_cast<int>(p)] != 0; }

  bool holds(const std::array<Rational, 4>& x, const Rational& w) const {
    Rational lhs = 0;
    for (int i = 0; i < 4; ++i) lhs += coef[i] * x[i];
    const Rational r = rhs(w);
    return strict ? lhs < r : lhs <= r;
  }
};

namespace detail {

inline ExponentConstraint upper(Param p, LinFrac bound, Source src, std::string label,
                                bool strict = true) {
  ExponentConstraint c;
  c.coef[static_cast<int>(p)] = 1;
  c.rhs = std::move(bound);
  c.strict = strict;
  c.source = src;
  c.label = std::move(label);
  return c;
}

inline ExponentConstraint lower(Param p, const LinFrac& bound, Source src, std::string label,
                                bool strict = true) {
  ExponentConstraint c = upper(p, bound * Rational(-1), src, std::move(label), strict);
  c.coef[static_cast<int>(p)] = -1;
  return c;
}

}  // namespace detail

/// R = X^ρ with R^5 N <= Q^2, N <= X^{1/3} and Q = X^{1/(2+ϖ)}.
inline LinFrac rho_upper_from_size() {
  return (LinFrac::frac(2, 0) - LinFrac::constant(rat(1, 3))) / 5;
}

/// R >= X^{1/2} Q^{-1}.
inline LinFrac rho_lower_from_main_term() {
  return LinFrac::constant(rat(1, 2)) - LinFrac::frac(1, 0);
}

/// Exponent of X in the type-d1 size condition N >> X^{e + 3ρ/2}: the
/// displayed value ϖ/(2+ϖ), or ϖ/(2(2+ϖ)) from computing X^{1/2}R^{3/2}/Q.
enum class D1Variant { displayed, direct };

struct ConstraintSystem {
  std::vector<ExponentConstraint> constraints;

  /// Keeps only the constraints that involve p.
  ConstraintSystem restricted_to(Param p) const {
    ConstraintSystem s;
    for (const auto& c : constraints) {
      if (c.involves(p)) s.constraints.push_back(c);
    }
    return s;
  }

  ConstraintSystem without(const std::string& label) const {
    ConstraintSystem s;
    for (const auto& c : constraints) {
      if (c.label != label) s.constraints.push_back(c);
    }
    return s;
  }
};

/// The full system: the three estimates plus the decomposition hypotheses.
inline ConstraintSystem full_system(D1Variant variant = D1Variant::displayed,
                                    bool include_coupling = true) {
  using detail::lower;
  using detail::upper;
  using L = LinFrac;
  const auto P_l = Param::lambda, P_d = Param::delta, P_r = Param::rho, P_s = Param::sigma;
  ConstraintSystem s;
  auto& v = s.constraints;

  v.push_back(lower(P_l, L::frac(0, rat(1, 3)), Source::type_d1, "d1:lambda-lower"));
  v.push_back(upper(P_r, L::frac(rat(4, 9), rat(-2, 9)), Source::type_d1, "d1:rho-upper"));
  {
    // 3ρ/2 - λ < 1/3 - e.
    ExponentConstraint c;
    c.coef = {-1, 0, rat(3, 2), 0};
    const L e = variant == D1Variant::displayed ? L::frac(0, 1) : L::frac(0, rat(1, 2));
    c.rhs = L::constant(rat(1, 3)) - e;
    c.source = Source::type_d1;
    c.label = variant == D1Variant::displayed ? "d1:coupling-displayed" : "d1:coupling-direct";
    v.push_back(c);
  }

  v.push_back(upper(P_d, L::constant(rat(1, 12)) - L::frac(0, rat(1, 2)), Source::type_d2,
                    "d2:delta-upper"));
  v.push_back(upper(P_l, L::constant(rat(1, 6)) - L::frac(0, rat(1, 2)), Source::type_d2,
                    "d2:lambda-upper"));
  v.push_back(upper(P_r, L::constant(rat(1, 6)), Source::type_d2, "d2:rho-upper"));

  {
    ExponentConstraint c;
    c.rhs = L::affine(rat(1, 8), -1);  // 0 < 1/8 - ϖ
    c.source = Source::type_ii;
    c.label = "II:level";
    v.push_back(c);
  }
  // ϖ < σ becomes ϖ <= σ once σ is pinned to ϖ.
  v.push_back(lower(P_s, L::affine(0, 1), Source::type_ii, "II:sigma-lower", false));
  {
    ExponentConstraint c;
    c.coef = {0, 1, 0, 1};
    c.rhs = L::constant(rat(1, 3));
    c.source = Source::type_ii;
    c.label = "II:sigma-delta";
    v.push_back(c);
  }
  v.push_back(lower(P_d, L::frac(0, rat(242, 75)), Source::type_ii, "II:delta-lower"));
  v.push_back(lower(P_r, rho_lower_from_main_term(), Source::type_ii, "II:rho-lower"));
  v.push_back(upper(P_r, L::constant(rat(1, 9)) - L::frac(0, rat(4, 9)), Source::type_ii,
                    "II:rho-upper"));
  v.push_back(upper(P_r, rho_upper_from_size(), Source::type_ii, "II:rho-size"));
  if (include_coupling) {
    ExponentConstraint c;
    c.coef = {rat(-2, 3), 0, 1, 0};
    c.rhs = L::frac(rat(2, 9), rat(-2, 9));
    c.source = Source::type_ii;
    c.label = "II:rho-lambda";
    v.push_back(c);
  }

  v.push_back(upper(P_d, L::constant(rat(1, 12)), Source::decomposition, "dec:delta"));
  {
    ExponentConstraint c;
    c.coef = {0, rat(1, 2), 0, 1};
    c.rhs = L::constant(rat(1, 6));
    c.strict = false;
    c.source = Source::decomposition;
    c.label = "dec:sigma-delta";
    v.push_back(c);
  }
  {
    ExponentConstraint c;
    c.coef = {2, 0, 0, 1};
    c.rhs = L::constant(rat(1, 3));
    c.source = Source::decomposition;
    c.label = "dec:lambda-sigma";
    v.push_back(c);
  }
  v.push_back(lower(P_l, L::constant(0), Source::decomposition, "dec:lambda-nonneg", false));
  v.push_back(lower(P_d, L::constant(0), Source::decomposition, "dec:delta-nonneg", false));
  v.push_back(lower(P_s, L::constant(0), Source::decomposition, "dec:sigma-nonneg", false));
  return s;
}

namespace detail {

// Fourier–Motzkin over λ, δ, ρ with σ replaced by ϖ. R is LinFrac while ϖ is
// symbolic and Rational once it is fixed.
template <class R>
struct Row {
  std::array<Rational, 3> coef{0, 0, 0};
  R rhs{};
  bool strict = true;
  std::set<std::size_t> parents;
  int eliminated_at = -1;  // parameter whose elimination produced the row
};

template <class R>
R sigma_term(const Rational& c, const std::optional<Rational>& w) {
  if constexpr (std::is_same_v<R, Rational>) {
    return c * *w;
  } else {
    return LinFrac::affine(0, c);
  }
}

template <class R>
std::vector<Row<R>> rows_of(const ConstraintSystem& sys, const std::optional<Rational>& w) {
  std::vector<Row<R>> rows;
  for (std::size_t i = 0; i < sys.constraints.size(); ++i) {
    const auto& c = sys.constraints[i];
    Row<R> r;
    for (int k = 0; k < 3; ++k) r.coef[k] = c.coef[k];
    if constexpr (std::is_same_v<R, Rational>) {
      r.rhs = c.rhs(*w);
    } else {
      r.rhs = c.rhs;
    }
    r.rhs = r.rhs - sigma_term<R>(c.coef[3], w);
    r.strict = c.strict;
    r.parents = {i};
    rows.push_back(std::move(r));
  }
  return rows;
}

template <class R>
std::vector<Row<R>> eliminate(const std::vector<Row<R>>& rows, int k) {
  std::vector<Row<R>> out, pos, neg;
  for (const auto& r : rows) {
    if (r.coef[k] > 0) {
      pos.push_back(r);
    } else if (r.coef[k] < 0) {
      neg.push_back(r);
    } else {
      out.push_back(r);
    }
  }
  for (const auto& p : pos) {
    for (const auto& n : neg) {
      const Rational a = Rational(1) / p.coef[k];
      const Rational b = Rational(-1) / n.coef[k];
      Row<R> r;
      for (int j = 0; j < 3; ++j) r.coef[j] = p.coef[j] * a + n.coef[j] * b;
      r.coef[k] = 0;
      r.rhs = p.rhs * a + n.rhs * b;
      r.strict = p.strict || n.strict;
      r.parents = p.parents;
      r.parents.insert(n.parents.begin(), n.parents.end());
      r.eliminated_at = k;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Intervals at a fixed level.

struct ParamInterval {
  Rational lo = 0;
  Rational hi = 0;
  bool empty = false;
};

/// Projection of the feasible set onto p at the given ϖ, with σ = ϖ. lo and hi
/// are the tightest bounds on p after eliminating the other parameters;
/// `empty` also covers infeasibility elsewhere in the system.
inline ParamInterval interval_for(Param p, const Rational& varpi,
                                  const ConstraintSystem& sys = full_system()) {
  if (p == Param::sigma) throw domain_error("interval_for: sigma is pinned to varpi");
  if (varpi < 0 || varpi >= rat(1, 8)) {
    throw domain_error("interval_for: varpi must lie in [0, 1/8)");
  }
  auto rows = detail::rows_of<Rational>(sys, varpi);
  const int target = static_cast<int>(p);
  for (int k = 0; k < 3; ++k) {
    if (k != target) rows = detail::eliminate(rows, k);
  }
  ParamInterval out;
  std::optional<Rational> lo, hi;
  bool lo_strict = false, hi_strict = false;
  bool consistent = true;
  for (const auto& r : rows) {
    const Rational& c = r.coef[target];
    if (c == 0) {
      if (r.strict ? !(0 < r.rhs) : !(0 <= r.rhs)) consistent = false;
      continue;
    }
    const Rational bound = r.rhs / c;
    if (c > 0) {
      if (!hi || bound < *hi || (bound == *hi && r.strict)) {
        hi_strict = (hi && bound == *hi) ? (hi_strict || r.strict) : r.strict;
        hi = bound;
      }
    } else {
      if (!lo || bound > *lo || (bound == *lo && r.strict)) {
        lo_strict = (lo && bound == *lo) ? (lo_strict || r.strict) : r.strict;
        lo = bound;
      }
    }
  }
  if (!lo || !hi) throw inconsistency_error("interval_for: parameter is unbounded");
  out.lo = *lo;
  out.hi = *hi;
  out.empty = !consistent || out.lo > out.hi || (out.lo == out.hi && (lo_strict || hi_strict));
  return out;
}

/// Whether every constraint can hold at once at the given ϖ.
inline bool feasible_at(const Rational& varpi, const ConstraintSystem& sys = full_system()) {
  auto rows = detail::rows_of<Rational>(sys, varpi);
  for (int k = 0; k < 3; ++k) rows = detail::eliminate(rows, k);
  for (const auto& r : rows) {
    if (r.strict ? !(0 < r.rhs) : !(0 <= r.rhs)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Supremum of the feasible levels.

struct SupResult {
  Surd value;
  bool at_search_bound = false;
  std::string binding;                      // parameter(s) whose interval closes
  std::vector<std::string> binding_labels;  // the constraints involved
};

inline constexpr long long sup_search_bound = 1;

/// Exact supremum of ϖ in [0, 1] at which the system is feasible with σ = ϖ.
/// Conditions after elimination are polynomial signs in ϖ; the supremum is
/// found by walking the cells between their real roots.
inline SupResult sup_varpi(const ConstraintSystem& sys = full_system()) {
  auto rows = detail::rows_of<LinFrac>(sys, std::nullopt);
  for (int k : {2, 0, 1}) rows = detail::eliminate(rows, k);

  auto ok_at = [&](const Surd& x) {
    for (const auto& r : rows) {
      const int s = poly_sign(r.rhs.numerator(), x);
      if (r.strict ? s <= 0 : s < 0) return false;
    }
    return true;
  };
  auto ok_right = [&](const Surd& x) {
    for (const auto& r : rows) {
      const int s = poly_sign_right(r.rhs.numerator(), x);
      if (r.strict ? s <= 0 : s < 0) return false;
    }
    return true;
  };

  const Surd zero{0, 0, 0};
  const Surd top{Rational(sup_search_bound), 0, 0};
  if (!ok_at(zero)) throw inconsistency_error("sup_varpi: system is infeasible at varpi = 0");

  std::vector<Surd> points{zero, top};
  for (const auto& r : rows) {
    for (const auto& x : poly_roots(r.rhs.numerator())) {
      if (zero < x && x < top) points.push_back(x);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  SupResult res;
  for (std::size_t i = points.size() - 1; i-- > 0;) {
    if (ok_right(points[i])) {
      res.value = points[i + 1];
      res.at_search_bound = i + 2 == points.size();
      break;
    }
    if (ok_at(points[i])) {
      res.value = points[i];
      break;
    }
  }
  if (res.at_search_bound) return res;

  std::set<std::string> vars;
  std::set<std::string> labels;
  for (const auto& r : rows) {
    const int s = poly_sign_right(r.rhs.numerator(), res.value);
    const bool violated = r.strict ? s <= 0 : s < 0;
    if (!violated || poly_sign(r.rhs.numerator(), res.value) != 0) continue;
    if (r.eliminated_at >= 0) vars.insert(param_names[r.eliminated_at]);
    for (auto p : r.parents) labels.insert(sys.constraints[p].label);
  }
  for (const auto& v : vars) res.binding += (res.binding.empty() ? "" : ",") + v;
  res.binding_labels.assign(labels.begin(), labels.end());
  return res;
}

// ---------------------------------------------------------------------------
// Exponent vectors of the bilinear error terms.

/// c0 + c1·θ.
struct AffineTheta {
  Rational c0 = 0;
  Rational c1 = 0;
  Rational operator()(const Rational& theta) const { return c0 + c1 * theta; }
};

/// Exponents of (Q, N, Y, D, D₁, Q₀).
using ExponentVector = std::array<AffineTheta, 6>;

/// The six terms before summing over d, d₁, q₀.
inline const std::array<ExponentVector, 6>& eta_table() {
  using A = AffineTheta;
  static const std::array<ExponentVector, 6> t{{
      {A{1, 0}, A{3, 0}, A{rat(-1, 2), 0}, A{rat(1, 2), 0}, A{rat(3, 2), 0}, A{rat(-3, 2), 0}},
      {A{1, 0}, A{rat(7, 2), 0}, A{rat(-1, 2), 0}, A{0, 0}, A{rat(3, 2), 0}, A{-2, 0}},
      {A{1, 2}, A{3, -3}, A{rat(-1, 2), 0}, A{0, 1}, A{1, -1}, A{rat(-3, 2), -2}},
      {A{1, 2}, A{rat(7, 2), -3}, A{rat(-1, 2), 0}, A{rat(-1, 2), 1}, A{1, -1}, A{-2, -2}},
      {A{1, 0}, A{rat(5, 2), 0}, A{-1, 0}, A{rat(1, 2), 0}, A{rat(3, 2), 0}, A{rat(-5, 2), 0}},
      {A{1, 0}, A{3, 0}, A{-1, 0}, A{0, 0}, A{rat(3, 2), 0}, A{-3, 0}},
  }};
  return t;
}

/// Exponents of (Q, N, Y) for the four surviving terms, valid for 0 <= θ <= 1/4.
inline const std::array<std::array<AffineTheta, 3>, 4>& theta_table() {
  using A = AffineTheta;
  static const std::array<std::array<AffineTheta, 3>, 4> t{{
      {A{1, 0}, A{2, 0}, A{rat(9, 2), 0}},
      {A{1, 0}, A{rat(5, 2), 0}, A{4, 0}},
      {A{1, 2}, A{2, -3}, A{4, -1}},
      {A{1, 2}, A{rat(5, 2), -3}, A{rat(7, 2), -1}},
  }};
  return t;
}

template <std::size_t N>
std::array<Rational, N> at_theta(const std::array<AffineTheta, N>& v, const Rational& theta) {
  std::array<Rational, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = v[i](theta);
  return out;
}

/// (Q, N, Y) exponents after multiplying by N^{-1} Y Q₀ D² D₁², summing over
/// d, d₁, q₀ and then dyadically over Q₀ + DD₁ <= Y.
inline std::array<Rational, 3> reduce_eta(const std::array<Rational, 6>& eta) {
  using std::max;
  const Rational zero = 0;
  const Rational q0 = eta[5] + 2;
  const Rational d = eta[3] + 3;
  const Rational d1 = eta[4] + 2;
  const Rational y = eta[2] + 1 + max(zero, q0) + max({zero, d, d1});
  return {eta[0], eta[1] - 1, y};
}

/// Exponents of X bounding N, one per surviving term, from
/// Q^a N^b Y^c <= Q² N with Q = X^{1/(2+ϖ)} and Y = X^{ϖ/(2+ϖ)}. Ordered
/// QY^{-9/2}, Q^{2/3}Y^{-8/3}, Q^{2/3}Y^{-(7-2θ)/(3(1-2θ))},
/// Q^{(1-2θ)/(1-3θ)}Y^{-(4-θ)/(1-3θ)}.
inline std::vector<LinFrac> tii_thresholds(const Rational& theta) {
  if (theta < 0 || theta >= rat(1, 3)) throw domain_error("tii_thresholds: need 0 <= theta < 1/3");
  const auto& t = theta_table();
  std::vector<LinFrac> out;
  for (int k : {0, 1, 3, 2}) {
    const auto v = at_theta(t[k], theta);
    const Rational nb = v[1] - 1;
    out.push_back(LinFrac::frac((2 - v[0]) / nb, -v[2] / nb));
  }
  return out;
}

/// min over a ≥ min over b on [lo, hi], exactly. Both minima are of affine
/// numerators over the same positive denominator, so checking each a against
/// every crossing of the b's suffices.
inline bool min_dominates(const std::vector<LinFrac>& a, const std::vector<LinFrac>& b,
                          const Rational& lo, const Rational& hi) {
  std::vector<Rational> pts{lo, hi};
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      const LinFrac d = b[i] - b[j];
      for (const auto& r : poly_roots(d.numerator())) {
        if (r.is_rational() && r.a > lo && r.a < hi) pts.push_back(r.a);
      }
    }
  }
  for (const auto& w : pts) {
    Rational mb = b.front()(w);
    for (const auto& f : b) mb = std::min(mb, f(w));
    for (const auto& f : a) {
      if (f(w) < mb) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Exact LP, used to compare exponent vectors over a cone.

struct LPResult {
  bool bounded = true;
  Rational value = 0;
  std::vector<Rational> x;
  std::vector<Rational> ray;  // improving direction when unbounded
};

/// max c·x subject to A x <= b, x >= 0, with b >= 0. Dense tableau simplex
/// with Bland's rule, exact arithmetic.
inline LPResult lp_maximize(const std::vector<Rational>& c, const std::vector<std::vector<Rational>>& A,
                            const std::vector<Rational>& b) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  for (const auto& v : b) {
    if (v < 0) throw domain_error("lp_maximize: right-hand side must be nonnegative");
  }
  // Columns: n structural, m slack; last column is the rhs.
  std::vector<std::vector<Rational>> T(m, std::vector<Rational>(n + m + 1, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1;
    T[i][n + m] = b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  std::vector<Rational> cost(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];

  for (int iter = 0; iter < 10000; ++iter) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j) {
      Rational reduced = cost[j];
      for (std::size_t i = 0; i < m; ++i) reduced -= cost[basis[i]] * T[i][j];
      if (reduced > 0) {
        enter = j;
        break;
      }
    }
    if (enter == n + m) break;
    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      const Rational ratio = T[i][n + m] / T[i][enter];
      if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) {
      LPResult r;
      r.bounded = false;
      r.ray.assign(n, Rational(0));
      if (enter < n) r.ray[enter] = 1;
      for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) r.ray[basis[i]] = -T[i][enter];
      }
      return r;
    }
    const Rational piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      const Rational f = T[i][enter];
      for (std::size_t j = 0; j <= n + m; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  LPResult r;
  r.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) r.x[basis[i]] = T[i][n + m];
  }
  for (std::size_t j = 0; j < n; ++j) r.value += c[j] * r.x[j];
  return r;
}

/// The cone of log-sizes (Q, N, Y, D, D₁, Q₀) >= 0 with Q₀ <= Y and D + D₁ <= Y.
struct SizeCone {
  std::vector<std::vector<Rational>> rows{
      {0, 0, -1, 0, 0, 1},
      {0, 0, -1, 1, 1, 0},
  };
};

struct MajorizationResult {
  bool majorized = false;
  std::vector<Rational> witness;  // direction where term k exceeds term 1
};

/// Whether term k is at most term 1 on the whole cone: max (η_k - η_1)·x over
/// the cone cut by Σx <= 1 is <= 0.
inline MajorizationResult majorization_check(int k, const Rational& theta = rat(7, 64),
                                             const SizeCone& cone = {}) {
  if (k < 1 || k > 6) throw domain_error("majorization_check: k must be in 1..6");
  const auto e1 = at_theta(eta_table()[0], theta);
  const auto ek = at_theta(eta_table()[static_cast<std::size_t>(k - 1)], theta);
  std::vector<Rational> c(6);
  for (int i = 0; i < 6; ++i) c[i] = ek[i] - e1[i];
  auto A = cone.rows;
  std::vector<Rational> b(A.size(), Rational(0));
  A.push_back(std::vector<Rational>(6, Rational(1)));
  b.push_back(1);
  const auto lp = lp_maximize(c, A, b);
  if (!lp.bounded) {
    std::string ray;
    for (const auto& v : lp.ray) ray += (ray.empty() ? "" : ",") + to_string(v);
    throw indeterminate_error("majorization_check: unbounded LP, ray (" + ray + ")");
  }
  MajorizationResult r;
  r.majorized = lp.value <= 0;
  if (!r.majorized) r.witness = lp.x;
  return r;
}

// ---------------------------------------------------------------------------

/// K with K² = qCS(RS+N)(C+RD) + C^{1+4θ}DS((RS+N)R)^{1-2θ} + D²NR.
inline double k_function(double C, double D, double N, double R, double S, double q,
                         const Rational& theta) {
  for (double v : {C, D, N, R, S, q}) {
    if (!(v > 0.0)) throw domain_error("k_function: arguments must be positive");
  }
  const double th = static_cast<double>(theta);
  const double rsn = R * S + N;
  const double k2 = q * C * S * rsn * (C + R * D) +
                    std::pow(C, 1.0 + 4.0 * th) * D * S * std::pow(rsn * R, 1.0 - 2.0 * th) +
                    D * D * N * R;
  return std::sqrt(k2);
}

/// 1 - 1/(2+κ) for 0 < κ < 50/1093.
inline Rational nonvanishing_bound(const Rational& kappa) {
  if (kappa <= 0 || kappa >= rat(50, 1093)) {
    throw domain_error("nonvanishing_bound: need 0 < kappa < 50/1093");
  }
  return (1 + kappa) / (2 + kappa);
}

/// The bound at the supremum of the level, (1+ϖ)/(2+ϖ) for ϖ = sup_varpi.
inline Rational nonvanishing_limit() {
  const auto sup = sup_varpi(full_system());
  if (!sup.value.is_rational()) throw invariant_violation("nonvanishing_limit: irrational level");
  return (1 + sup.value.a) / (2 + sup.value.a);
}

inline std::string nonvanishing_note() {
  return "1 - 1/(2 + 50/1093) = 1143/2236 = 1/2 + 25/2236; the form 1/2 + 25/2235 "
         "differs in the last denominator, and both exceed 0.51118";
}

}  // namespace zeroscope::exponents
