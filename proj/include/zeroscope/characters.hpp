#pragma once

// Dirichlet characters stored as exponent vectors on CRT generators.
//
// For each prime power p^k || q the group (Z/p^k)^* is written on fixed
// generators: a primitive root for odd p and for 2, 4; the pair (-1, 5) for
// 2^k with k >= 3. A character is the exponent vector (e_slot) and sends the
// generator of slot i to e(e_i / ord_i).

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zeroscope/arith.hpp"
#include "zeroscope/errors.hpp"

namespace zeroscope {

using cplx = std::complex<double>;
using arith::i64;

/// Generator data and discrete-log tables for (Z/q)^*.
struct ModulusGroup {
  struct Component {
    i64 p = 1;
    int k = 0;
    i64 pk = 1;
    // Slot indices into ModulusGroup::slot_order; one for cyclic components,
    // two (generators -1 then 5) for 2^k with k >= 3.
    std::vector<std::size_t> slots;
    // dlog[r] for r mod pk; -1 when p | r. For the two-generator case the
    // value is a * ord_b + b.
    std::vector<std::int32_t> dlog;
  };

  i64 q = 1;
  std::vector<Component> components;
  std::vector<i64> slot_order;
  i64 exponent = 1;  // lcm of slot orders
  std::vector<cplx> roots;  // roots[j] = e(j / exponent)

  std::size_t slots() const { return slot_order.size(); }

  /// Discrete logs of n on every slot; empty when gcd(n, q) > 1.
  std::optional<std::vector<i64>> logs(i64 n) const {
    std::vector<i64> out(slots(), 0);
    for (const auto& c : components) {
      const auto r = static_cast<std::size_t>(arith::positive_mod(n, c.pk));
      const std::int32_t d = c.dlog[r];
      if (d < 0) return std::nullopt;
      if (c.slots.size() == 1) {
        out[c.slots[0]] = d;
      } else {
        const i64 ord_b = slot_order[c.slots[1]];
        out[c.slots[0]] = d / ord_b;
        out[c.slots[1]] = d % ord_b;
      }
    }
    return out;
  }
};

inline std::shared_ptr<const ModulusGroup> make_group(i64 q) {
  if (q < 1) throw domain_error("modulus must be positive");
  auto g = std::make_shared<ModulusGroup>();
  g->q = q;
  for (auto [p, k] : arith::factorize(q)) {
    ModulusGroup::Component c;
    c.p = p;
    c.k = k;
    c.pk = 1;
    for (int i = 0; i < k; ++i) c.pk *= p;
    c.dlog.assign(static_cast<std::size_t>(c.pk), -1);
    if (p == 2 && k >= 3) {
      const i64 ord_b = c.pk / 4;
      c.slots = {g->slot_order.size(), g->slot_order.size() + 1};
      g->slot_order.push_back(2);
      g->slot_order.push_back(ord_b);
      i64 x = 1;
      for (i64 b = 0; b < ord_b; ++b) {
        c.dlog[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(b);
        c.dlog[static_cast<std::size_t>(c.pk - x)] = static_cast<std::int32_t>(ord_b + b);
        x = x * 5 % c.pk;
      }
    } else {
      const i64 gen = arith::primitive_root(c.pk);
      const i64 order = c.pk / p * (p - 1);
      c.slots = {g->slot_order.size()};
      g->slot_order.push_back(order);
      i64 x = 1 % c.pk;
      for (i64 j = 0; j < order; ++j) {
        c.dlog[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(j);
        x = x * gen % c.pk;
      }
    }
    g->components.push_back(std::move(c));
  }
  i64 e = 1;
  for (i64 o : g->slot_order) e = std::lcm(e, o);
  g->exponent = e;
  g->roots.resize(static_cast<std::size_t>(e));
  for (i64 j = 0; j < e; ++j) {
    g->roots[static_cast<std::size_t>(j)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(e));
  }
  return g;
}

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const ModulusGroup> group, std::vector<i64> exponents)
      : group_(std::move(group)), exps_(std::move(exponents)) {
    if (exps_.size() != group_->slots()) throw domain_error("character: wrong exponent count");
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      exps_[i] = arith::positive_mod(exps_[i], group_->slot_order[i]);
    }
    compute_invariants();
  }

  i64 modulus() const { return group_->q; }
  const std::vector<i64>& exponents() const { return exps_; }
  const ModulusGroup& group() const { return *group_; }
  const std::shared_ptr<const ModulusGroup>& group_ptr() const { return group_; }
  i64 order() const { return order_; }
  int parity() const { return parity_; }
  i64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == group_->q; }
  bool is_principal() const { return order_ == 1; }
  bool is_real() const { return order_ <= 2; }

  /// χ(n) = e(j / exponent) with j returned; nullopt when gcd(n, q) > 1.
  std::optional<i64> log_value(i64 n) const {
    const auto logs = group_->logs(n);
    if (!logs) return std::nullopt;
    i64 j = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      const i64 scale = group_->exponent / group_->slot_order[i];
      j = (j + arith::mulmod(exps_[i] * scale % group_->exponent, (*logs)[i], group_->exponent)) %
          group_->exponent;
    }
    return j;
  }

  /// χ(n) as the reduced fraction num/order of a full turn; nullopt if χ(n) = 0.
  std::optional<std::pair<i64, i64>> value_fraction(i64 n) const {
    const auto j = log_value(n);
    if (!j) return std::nullopt;
    return std::pair<i64, i64>{*j * order_ / group_->exponent, order_};
  }

  cplx operator()(i64 n) const {
    const auto j = log_value(n);
    return j ? group_->roots[static_cast<std::size_t>(*j)] : cplx{0.0, 0.0};
  }

  /// Values χ(0), ..., χ(q-1).
  std::vector<cplx> value_table() const {
    std::vector<cplx> t(static_cast<std::size_t>(group_->q));
    for (i64 n = 0; n < group_->q; ++n) t[static_cast<std::size_t>(n)] = (*this)(n);
    return t;
  }

  DirichletCharacter conj() const {
    std::vector<i64> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = -exps_[i];
    return DirichletCharacter(group_, std::move(e));
  }

  std::string id() const {
    std::ostringstream os;
    os << group_->q << ':';
    for (std::size_t i = 0; i < exps_.size(); ++i) os << (i ? "," : "") << exps_[i];
    return os.str();
  }

  bool operator==(const DirichletCharacter& o) const {
    return group_->q == o.group_->q && exps_ == o.exps_;
  }

 private:
  void compute_invariants() {
    order_ = 1;
    conductor_ = 1;
    for (const auto& c : group_->components) {
      i64 comp_order = 1;
      for (std::size_t s : c.slots) {
        const i64 ord = group_->slot_order[s];
        comp_order = std::lcm(comp_order, ord / std::gcd(exps_[s], ord));
      }
      order_ = std::lcm(order_, comp_order);
      int j = 0;
      if (c.slots.size() == 2) {
        const i64 ord_b = group_->slot_order[c.slots[1]];
        const i64 eb = exps_[c.slots[1]];
        if (eb != 0) {
          i64 ob = ord_b / std::gcd(eb, ord_b);
          j = 2;
          while (ob > 1) {
            ob /= 2;
            ++j;
          }
        } else if (exps_[c.slots[0]] != 0) {
          j = 2;
        }
      } else if (comp_order > 1) {
        // Smallest j >= 1 with comp_order | φ(p^j).
        i64 phi_pj = c.p - 1;
        j = 1;
        while (phi_pj % comp_order != 0) {
          phi_pj *= c.p;
          ++j;
        }
      }
      for (int i = 0; i < j; ++i) conductor_ *= c.p;
    }
    const auto minus_one = log_value(group_->q - 1);
    parity_ = (minus_one && *minus_one != 0) ? 1 : 0;
  }

  std::shared_ptr<const ModulusGroup> group_;
  std::vector<i64> exps_;
  i64 order_ = 1;
  int parity_ = 0;
  i64 conductor_ = 1;
};

inline i64 conductor(const DirichletCharacter& chi) { return chi.conductor(); }

/// All φ(q) characters, lexicographic in the exponent vector.
inline std::vector<DirichletCharacter> enumerate_characters(i64 q) {
  const auto group = make_group(q);
  std::vector<DirichletCharacter> out;
  std::vector<i64> e(group->slots(), 0);
  while (true) {
    out.emplace_back(group, e);
    std::size_t i = e.size();
    while (i > 0) {
      --i;
      if (++e[i] < group->slot_order[i]) break;
      e[i] = 0;
      if (i == 0) return out;
    }
    if (e.empty()) return out;
  }
}

inline std::vector<DirichletCharacter> primitive_characters(i64 q) {
  auto all = enumerate_characters(q);
  std::vector<DirichletCharacter> out;
  for (auto& chi : all) {
    if (chi.is_primitive()) out.push_back(std::move(chi));
  }
  return out;
}

/// Parses "q:e1,e2,...".
inline DirichletCharacter character_from_id(const std::string& id) {
  const auto colon = id.find(':');
  if (colon == std::string::npos) throw domain_error("character id must look like q:e1,e2,...");
  i64 q = 0;
  try {
    q = std::stoll(id.substr(0, colon));
  } catch (const std::exception&) {
    throw domain_error("character id: bad modulus in '" + id + "'");
  }
  auto group = make_group(q);
  std::vector<i64> e;
  std::stringstream rest(id.substr(colon + 1));
  std::string tok;
  while (std::getline(rest, tok, ',')) {
    if (tok.empty()) continue;
    try {
      e.push_back(std::stoll(tok));
    } catch (const std::exception&) {
      throw domain_error("character id: bad exponent in '" + id + "'");
    }
  }
  if (e.size() != group->slots()) {
    throw domain_error("character id '" + id + "' needs " + std::to_string(group->slots()) +
                       " exponents");
  }
  return DirichletCharacter(std::move(group), std::move(e));
}

/// τ(χ) = Σ_{a mod q} χ(a) e(a/q).
inline cplx gauss_sum(const DirichletCharacter& chi) {
  const i64 q = chi.modulus();
  cplx sum = 0.0;
  for (i64 a = 1; a <= q; ++a) {
    const auto j = chi.log_value(a);
    if (!j) continue;
    sum += chi.group().roots[static_cast<std::size_t>(*j)] *
           std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(q));
  }
  return sum;
}

/// Number of primitive characters mod q.
inline i64 primitive_count(i64 q) {
  i64 total = 0;
  for (i64 d : arith::divisors(q)) total += arith::euler_phi(d) * arith::mobius(q / d);
  return total;
}

/// Σ_{χ primitive mod q} χ(n).
inline i64 primitive_character_sum(i64 q, i64 n) {
  if (q < 1) throw domain_error("primitive_character_sum: q must be positive");
  if (std::gcd(arith::positive_mod(n, q), q) != 1 && q != 1) {
    throw domain_error("primitive_character_sum: gcd(n, q) > 1");
  }
  const i64 g = std::gcd(q, arith::positive_mod(n - 1, q));
  i64 total = 0;
  for (i64 d : arith::divisors(g)) {
    total += arith::euler_phi(d) * arith::mobius(q / d);
  }
  return total;
}

/// φ(w)·u_R(n, w) as an exact integer.
inline i64 u_R_scaled(i64 n, i64 w, i64 R) {
  if (w < 1 || R < 1) throw domain_error("u_R: w and R must be positive");
  if (std::gcd(arith::positive_mod(n, w), w) != 1 && w != 1) return 0;
  const i64 phi_w = arith::euler_phi(w);
  const i64 indicator = arith::positive_mod(n - 1, w) == 0 ? 1 : 0;
  i64 chars = 0;
  for (i64 r : arith::divisors(w)) {
    if (r > R) break;
    chars += primitive_character_sum(r, n);
  }
  return indicator * phi_w - chars;
}

/// u_R(n, w) = 1_{n ≡ 1 (w)} - (1/φ(w)) Σ_{χ mod w, cond χ <= R} χ(n).
inline double u_R(i64 n, i64 w, i64 R) {
  return static_cast<double>(u_R_scaled(n, w, R)) / static_cast<double>(arith::euler_phi(w));
}

inline bool check_trivial_bound(i64 n, i64 w, i64 R) {
  const double indicator = arith::positive_mod(n - 1, w) == 0 ? 1.0 : 0.0;
  const double bound = indicator + static_cast<double>(R) * static_cast<double>(arith::tau(w)) /
                                       static_cast<double>(arith::euler_phi(w));
  return std::abs(u_R(n, w, R)) <= bound;
}

/// Primitive characters over a range of moduli with a weight per modulus.
struct PrimitiveFamily {
  i64 q_lo = 0;
  i64 q_hi = 0;
  struct Member {
    i64 q;
    DirichletCharacter chi;
  };
  std::vector<Member> members;
  std::vector<std::pair<i64, double>> weights;  // (q, weight), ascending q
};

inline PrimitiveFamily build_family(i64 q_lo, i64 q_hi, const std::function<double(i64)>& weight) {
  if (q_lo < 1 || q_hi < q_lo) throw domain_error("build_family: empty modulus range");
  PrimitiveFamily fam;
  fam.q_lo = q_lo;
  fam.q_hi = q_hi;
  for (i64 q = std::max<i64>(q_lo, 2); q <= q_hi; ++q) {
    const double w = weight(q);
    if (w == 0.0) continue;
    fam.weights.emplace_back(q, w);
    for (auto& chi : primitive_characters(q)) fam.members.push_back({q, std::move(chi)});
  }
  return fam;
}

}  // namespace zeroscope
