// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion 5   run one; exit status 0 iff it passes
//   acceptance --seed 7        seed for the classifier sweep

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "zeroscope/arith.hpp"
#include "zeroscope/bandlimited.hpp"
#include "zeroscope/characters.hpp"
#include "zeroscope/density.hpp"
#include "zeroscope/dispersion.hpp"
#include "zeroscope/exponents.hpp"
#include "zeroscope/lfunc.hpp"

namespace {

using namespace zeroscope;
namespace ex = zeroscope::exponents;
namespace ds = zeroscope::dispersion;
namespace dn = zeroscope::density;
using arith::i64;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome exponent_synthesis() {
  const auto r = ex::sup_varpi();
  const bool ok = r.value.is_rational() && r.value.a == ex::rat(50, 1093) && r.binding == "delta";
  return {ok, "sup_varpi = " + r.value.str() + ", binding " + r.binding};
}

Outcome nonvanishing_constant() {
  const auto b = ex::nonvanishing_limit();
  const auto note = ex::nonvanishing_note();
  const bool ok = b == ex::rat(1143, 2236) && b > ex::parse_rational("0.51118") &&
                  note.find("2235") != std::string::npos && note.find("2236") != std::string::npos;
  return {ok, "bound = " + ex::to_string(b) + " = " + fmt("%.10f", static_cast<double>(b)) + "; note: " + note};
}

Outcome tii_reproduction() {
  using ex::LinFrac;
  using ex::rat;
  const auto th = ex::tii_thresholds(rat(7, 64));
  const std::vector<LinFrac> expected{
      LinFrac::frac(1, rat(-9, 2)),           // (2-9w)/(2(2+w))
      LinFrac::frac(rat(50, 43), rat(-249, 43)),  // (50-249w)/(43(2+w))
      LinFrac::frac(rat(2, 3), rat(-217, 75)),    // (50-217w)/(75(2+w))
  };
  std::string found;
  bool ok = true;
  for (const auto& e : expected) {
    const bool hit = std::find(th.begin(), th.end(), e) != th.end();
    ok = ok && hit;
    found += (found.empty() ? "" : ", ") + e.str() + (hit ? " ok" : " MISSING");
  }
  const bool rho = ex::rho_upper_from_size() == LinFrac::frac(rat(4, 15), rat(-1, 15));
  ok = ok && rho;
  return {ok, found + "; rho < " + ex::rho_upper_from_size().str() + (rho ? " ok" : " MISMATCH")};
}

Outcome orthogonality_oracle() {
  const auto psi = dn::default_psi();
  bool ok = true;
  std::string detail;
  for (auto [Q, nu] : std::vector<std::pair<double, double>>{{20, 1}, {50, 1}, {50, 1.5}, {100, 1}}) {
    const auto s = dn::s_kappa_two_ways(Q, TestFunction::fejer(nu), psi);
    const double rel = std::abs(s.difference) / std::max(1.0, std::abs(s.direct));
    ok = ok && rel < 1e-9;
    detail += fmt("(Q=%g", Q) + fmt(", nu=%g)", nu) + fmt(" rel=%.2e; ", rel);
  }
  return {ok, detail};
}

Outcome explicit_closure() {
  const auto phi = TestFunction::fejer(1.0);
  std::size_t n = 0, bad = 0;
  double worst = 0.0;
  std::string first;
  for (i64 q = 3; q <= 50; ++q) {
    const auto chars = primitive_characters(q);
    if (chars.empty()) continue;
    const auto sets = lfunc::zeros_for_modulus(q, 50.0);
    for (std::size_t k = 0; k < chars.size(); ++k) {
      const auto b = dn::explicit_balance(chars[k], static_cast<double>(q), phi, 50.0, dn::BalanceMode::exact,
                                          nullptr, dn::default_c_expl, sets[k]);
      ++n;
      worst = std::max(worst, std::abs(b.residual) / b.budget);
      if (!b.within_budget()) {
        if (bad++ == 0) first = b.char_id;
      }
    }
  }
  return {bad == 0, std::to_string(n) + " characters, " + std::to_string(bad) + " outside 1e-3 + tail" +
                        fmt(", worst |residual|/budget %.3f", worst) + (first.empty() ? "" : ", first " + first)};
}

Outcome zero_certification() {
  std::size_t n = 0, unmatched = 0, unstable = 0;
  double worst = 0.0;
  for (i64 q = 3; q <= 50; ++q) {
    const double T = 30.0;
    const auto base = lfunc::zeros_for_modulus(q, T);
    lfunc::ZeroSearchOptions fine;
    fine.grid_step = lfunc::default_grid_step(q, T) / 2.0;
    const auto halved = lfunc::zeros_for_modulus(q, T, fine);
    for (std::size_t k = 0; k < base.size(); ++k) {
      ++n;
      if (!base[k].certificate.matched || !halved[k].certificate.matched) ++unmatched;
      if (base[k].ordinates.size() != halved[k].ordinates.size()) {
        ++unstable;
        continue;
      }
      for (std::size_t i = 0; i < base[k].ordinates.size(); ++i) {
        worst = std::max(worst, std::abs(base[k].ordinates[i] - halved[k].ordinates[i]));
      }
    }
  }
  const bool ok = unmatched == 0 && unstable == 0 && worst <= 1e-9;
  return {ok, std::to_string(n) + " characters, " + std::to_string(unmatched) + " unmatched, " +
                  std::to_string(unstable) + " count changes" + fmt(", max ordinate shift %.2e", worst)};
}

/// Smallest d | q with χ(n) = 1 whenever n ≡ 1 (d) and gcd(n, q) = 1.
i64 brute_conductor(const DirichletCharacter& chi) {
  const i64 q = chi.modulus();
  for (i64 d : arith::divisors(q)) {
    bool induced = true;
    for (i64 n = 1; n < q && induced; n += d) {
      if (std::gcd(n, q) != 1) continue;
      if (std::abs(chi(n) - cplx(1.0, 0.0)) > 1e-9) induced = false;
    }
    if (induced) return d;
  }
  return q;
}

Outcome character_layer() {
  double worst_gauss = 0.0;
  std::size_t sum_mismatch = 0, cond_mismatch = 0;
  for (i64 q = 2; q <= 500; ++q) {
    for (const auto& chi : primitive_characters(q)) {
      worst_gauss = std::max(worst_gauss, std::abs(std::abs(gauss_sum(chi)) - std::sqrt(static_cast<double>(q))));
    }
  }
  for (i64 q = 1; q <= 200; ++q) {
    const auto all = enumerate_characters(q);
    std::vector<cplx> sums(static_cast<std::size_t>(q), cplx{});
    for (const auto& chi : all) {
      if (brute_conductor(chi) != chi.conductor()) ++cond_mismatch;
      if (!chi.is_primitive()) continue;
      for (i64 n = 0; n < q; ++n) sums[static_cast<std::size_t>(n)] += chi(n);
    }
    for (i64 n = 0; n < q; ++n) {
      if (std::gcd(n, q) != 1 && q != 1) continue;
      const double expect = static_cast<double>(primitive_character_sum(q, n));
      if (std::abs(sums[static_cast<std::size_t>(n)] - expect) > 1e-6) ++sum_mismatch;
    }
  }
  const bool ok = worst_gauss <= 1e-10 && sum_mismatch == 0 && cond_mismatch == 0;
  return {ok, fmt("max ||tau| - sqrt q| = %.2e (q <= 500); ", worst_gauss) + std::to_string(sum_mismatch) +
                  " character-sum mismatches, " + std::to_string(cond_mismatch) + " conductor mismatches (q <= 200)"};
}

Outcome bandlimited_layer() {
  double worst_pu = 0.0;
  const int steps = 20000;
  for (int i = 0; i <= steps; ++i) {
    const double x = std::pow(10.0, -3.0 + 9.0 * i / steps);
    double s = 0.0;
    for (int j = -14; j <= 24; ++j) s += dyadic_piece(j, x);
    worst_pu = std::max(worst_pu, std::abs(s - 1.0));
  }
  double worst_fejer = 0.0;
  for (double nu : {0.5, 1.0, 1.5, 2.0, 2.0 + 50.0 / 1093.0}) {
    const FejerKernel k{nu};
    for (double t = -2.5; t <= 2.5; t += 0.05) {
      worst_fejer = std::max(worst_fejer, std::abs(fejer_fourier_check(k, t) - k.hat(t)));
    }
  }
  return {worst_pu <= 1e-12 && worst_fejer <= 1e-6,
          fmt("partition of unity max error %.2e; ", worst_pu) + fmt("Fejér pair max error %.2e", worst_fejer)};
}

Outcome classifier_totality(std::uint64_t seed) {
  const auto r = ds::fuzz_classifier(100000, seed, 12);
  return {r.failures == 0 && r.checked == 100000,
          std::to_string(r.checked) + " instances (seed " + std::to_string(seed) + "), " +
              std::to_string(r.failures) + " failures; d1 " + std::to_string(r.by_type[0]) + ", d2 " +
              std::to_string(r.by_type[1]) + ", II " + std::to_string(r.by_type[2]) +
              (r.first_failure.empty() ? "" : "; " + r.first_failure)};
}

Outcome heath_brown() {
  const auto sieve = arith::build_sieve(5000);
  std::size_t bad = 0;
  double worst = 0.0;
  for (i64 n = 1; n <= 5000; ++n) {
    const auto r = ds::heath_brown_check(n, 3, 18);
    const double err = std::abs(r.rhs - sieve.lambda[static_cast<std::size_t>(n)]);
    worst = std::max(worst, err);
    if (err > 1e-9) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " mismatches for n <= 5000" + fmt(", max error %.2e", worst)};
}

Outcome weil_bound() {
  const auto r = ds::weil_sweep(500, 20);
  return {r.violations == 0 && r.checked == 500LL * 41 * 41,
          std::to_string(r.checked) + " sums, " + std::to_string(r.violations) + " violations" +
              fmt(", max |S|/bound %.4f", r.worst_ratio)};
}

Outcome density_trend() {
  const auto phi = TestFunction::fejer(1.0);
  const auto Phi = dn::default_family_weight();
  const auto a = dn::one_level_density(60.0, phi, Phi, 60.0);
  const auto b = dn::one_level_density(120.0, phi, Phi, 60.0);
  const bool band = a.ratio >= 0.75 && a.ratio <= 1.25;
  const bool trend = std::abs(b.ratio - 1.0) <= 1.5 * std::abs(a.ratio - 1.0);
  return {band && trend, fmt("ratio(Q=60) = %.4f", a.ratio) + fmt(" (tail %.2f", a.tail / a.rhs) +
                             fmt(" of rhs), ratio(Q=120) = %.4f; ", b.ratio) + "band [0.75, 1.25] " +
                             (band ? "met" : "NOT met") + ", trend " + (trend ? "met" : "NOT met")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  std::uint64_t seed = 20240601;
  app.add_option("--criterion", only, "Run a single criterion (1-12)")->check(CLI::Range(1, 12));
  app.add_option("--seed", seed, "Seed for the randomized classifier sweep");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "exponent synthesis", 1, exponent_synthesis},
      {2, "non-vanishing constant", 1, nonvanishing_constant},
      {3, "type II threshold reproduction", 1, tii_reproduction},
      {4, "orthogonality oracle", 60, orthogonality_oracle},
      {5, "explicit-formula closure", 600, explicit_closure},
      {6, "zero certification", 600, zero_certification},
      {7, "character layer", 300, character_layer},
      {8, "band-limited layer", 60, bandlimited_layer},
      {9, "classifier totality", 60, [seed] { return classifier_totality(seed); }},
      {10, "Heath-Brown identity", 300, heath_brown},
      {11, "Weil bound", 60, weil_bound},
      {12, "density sanity trend", 3600, density_trend},
  };

  int failures = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d [%s] %s: %s (%.2fs of %.0fs%s)\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(),
                o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
