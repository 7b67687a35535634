// zeroscope command-line driver.

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "zeroscope/arith.hpp"
#include "zeroscope/bandlimited.hpp"
#include "zeroscope/characters.hpp"
#include "zeroscope/density.hpp"
#include "zeroscope/dispersion.hpp"
#include "zeroscope/errors.hpp"
#include "zeroscope/exponents.hpp"
#include "zeroscope/lfunc.hpp"
#include "zeroscope/parallel.hpp"
#include "zeroscope/report.hpp"

namespace {

using namespace zeroscope;
using report::json;
namespace ex = zeroscope::exponents;
namespace ds = zeroscope::dispersion;
namespace dn = zeroscope::density;

struct TestFunctionFlags {
  std::string kind = "fejer";
  double nu = 1.0;
  std::string support;

  void add(CLI::App* app) {
    app->add_option("--phi", kind, "Test function: fejer or bump")
        ->check(CLI::IsMember({"fejer", "bump"}));
    app->add_option("--nu", nu, "Fejér support parameter");
    app->add_option("--support", support, "Bump support of the transform, -a,a");
  }

  TestFunction build() const {
    if (kind == "fejer") return TestFunction::fejer(nu);
    const auto comma = support.find(',');
    if (comma == std::string::npos) throw domain_error("--support must be of the form -a,a");
    return TestFunction::bump({std::stod(support.substr(0, comma)), std::stod(support.substr(comma + 1))});
  }
};

struct Output {
  std::string out;
  std::string csv;
  std::string plot;
};

void add_output(CLI::App* app, Output& o, bool csv = false, bool plot = false) {
  app->add_option("--out", o.out, "JSON output path (default stdout)");
  if (csv) app->add_option("--csv", o.csv, "CSV output path");
  if (plot) app->add_option("--plot", o.plot, "Whitespace-separated plot data path");
}

std::string rat(const ex::Rational& r) { return ex::to_string(r); }

/// Options in effect for the command that ran, keyed as in a config file
/// ("density.Q"), so a document can be replayed with --config.
json effective_config(const CLI::App& root) {
  json cfg = json::object();
  std::function<void(const CLI::App*, const std::string&)> walk = [&](const CLI::App* app,
                                                                      const std::string& prefix) {
    for (const CLI::Option* opt : app->get_options()) {
      const std::string& name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
      if (name == "help" || name == "config" || name.empty()) continue;
      std::string value;
      if (opt->count() > 0) {
        for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
      } else {
        value = opt->get_default_str();
      }
      if (value.empty()) continue;
      cfg[prefix + name] = value;
    }
    for (const CLI::App* sub : app->get_subcommands()) walk(sub, prefix + sub->get_name() + ".");
  };
  walk(&root, "");
  return cfg;
}

void write_json(const Output& o, json doc, const CLI::App& root) {
  doc["config"] = effective_config(root);
  report::emit(o.out, doc.dump(2) + "\n", std::cout);
}

std::string csv_string(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  report::CsvWriter w(os);
  for (const auto& r : rows) w.row(r);
  return os.str();
}

std::vector<DirichletCharacter> characters_for(arith::i64 q, const std::string& id) {
  if (!id.empty()) {
    auto chi = character_from_id(id);
    if (chi.modulus() != q && q != 0) throw domain_error("--char " + id + " is not a character mod " + std::to_string(q));
    return {chi};
  }
  return primitive_characters(q);
}

// ---------------------------------------------------------------------------

struct CharsCmd {
  arith::i64 q = 0;
  bool primitive_only = false;
  Output o;

  void setup(CLI::App* app) {
    app->add_option("--q", q, "Modulus")->required();
    app->add_flag("--primitive-only", primitive_only, "Only primitive characters");
    add_output(app, o, true);
  }

  void run(const CLI::App& root) const {
    if (q < 1) throw domain_error("--q must be positive");
    const auto chars = primitive_only ? primitive_characters(q) : enumerate_characters(q);
    json rows = json::array();
    std::vector<std::vector<std::string>> csv{{"char_id", "order", "parity", "conductor", "primitive", "gauss_abs"}};
    for (const auto& chi : chars) {
      const double g = std::abs(gauss_sum(chi));
      rows.push_back({{"char_id", chi.id()},
                      {"order", chi.order()},
                      {"parity", chi.parity()},
                      {"conductor", chi.conductor()},
                      {"primitive", chi.is_primitive()},
                      {"gauss_abs", g}});
      csv.push_back({chi.id(), std::to_string(chi.order()), std::to_string(chi.parity()),
                     std::to_string(chi.conductor()), chi.is_primitive() ? "true" : "false",
                     report::format_double(g)});
    }
    json doc{{"command", "chars"}, {"q", q}, {"count", chars.size()},
             {"primitive_count", primitive_count(q)}, {"characters", rows}};
    if (!o.csv.empty()) report::emit(o.csv, csv_string(csv), std::cout);
    write_json(o, doc, root);
  }
};

struct ZerosCmd {
  arith::i64 q = 0;
  std::string char_id;
  double T = 30.0;
  bool allow_uncertified = false;
  Output o;

  void setup(CLI::App* app) {
    app->add_option("--q", q, "Modulus")->required();
    app->add_option("--char", char_id, "Character id q:e1,e2,...; default every primitive character");
    app->add_option("--T", T, "Height");
    app->add_flag("--allow-uncertified", allow_uncertified, "Report uncertified zero sets instead of failing");
    add_output(app, o, true);
  }

  void run(const CLI::App& root) const {
    std::vector<lfunc::ZeroSet> sets;
    if (char_id.empty()) {
      sets = lfunc::zeros_for_modulus(q, T);
    } else {
      for (const auto& chi : characters_for(q, char_id)) {
        sets.push_back(lfunc::find_zeros(lfunc::make_context(chi), T, {}, true));
      }
    }
    json out = json::array();
    std::vector<std::vector<std::string>> csv{{"q", "char_id", "gamma", "T", "matched"}};
    for (const auto& zs : sets) {
      if (!zs.certificate.matched && !allow_uncertified) {
        throw completeness_error("zeros: " + zs.char_id + " has " +
                                     std::to_string(zs.certificate.sign_change_count) +
                                     " sign changes but winding count " +
                                     std::to_string(zs.certificate.winding_count),
                                 zs.certificate.off_line_suspect);
      }
      json g = json::array();
      for (double v : zs.ordinates) {
        g.push_back(v);
        csv.push_back({std::to_string(zs.q), zs.char_id, report::format_double(v), report::format_double(zs.T),
                       zs.certificate.matched ? "true" : "false"});
      }
      out.push_back({{"char_id", zs.char_id},
                     {"q", zs.q},
                     {"T", zs.T},
                     {"ordinates", g},
                     {"certificate",
                      {{"sign_changes", zs.certificate.sign_change_count},
                       {"winding", zs.certificate.winding_count},
                       {"matched", zs.certificate.matched},
                       {"off_line_suspect", zs.certificate.off_line_suspect},
                       {"grid_step", zs.certificate.grid_step},
                       {"grid_halvings", zs.certificate.grid_halvings}}}});
    }
    if (!o.csv.empty()) report::emit(o.csv, csv_string(csv), std::cout);
    write_json(o, {{"command", "zeros"}, {"q", q}, {"T", T}, {"zero_sets", out}}, root);
  }
};

struct DensityCmd {
  double Q = 60.0;
  double T = 60.0;
  bool non_strict = false;
  TestFunctionFlags phi;
  Output o;

  void setup(CLI::App* app) {
    app->add_option("--Q", Q, "Family scale");
    app->add_option("--T", T, "Zero truncation height");
    app->add_flag("--non-strict", non_strict, "Exclude and list uncertified characters instead of failing");
    phi.add(app);
    add_output(app, o, true, true);
  }

  void run(const CLI::App& root) const {
    dn::DensityOptions opt;
    opt.strict = !non_strict;
    const auto f = phi.build();
    const auto Phi = dn::default_family_weight();
    const auto r = dn::one_level_density(Q, f, Phi, T, opt);
    json rows = json::array();
    std::vector<std::vector<std::string>> csv{{"q", "n_primitive", "weight", "lhs_q"}};
    std::vector<std::vector<double>> plot;
    for (const auto& row : r.rows) {
      rows.push_back({{"q", row.q}, {"n_primitive", row.n_primitive}, {"weight", row.weight},
                      {"lhs_q", row.lhs_q}, {"tail_q", row.tail_q}});
      csv.push_back({std::to_string(row.q), std::to_string(row.n_primitive), report::format_double(row.weight),
                     report::format_double(row.lhs_q)});
      plot.push_back({static_cast<double>(row.q), static_cast<double>(row.n_primitive), row.weight, row.lhs_q});
    }
    json doc{{"command", "density"},
             {"Q", r.Q},
             {"test_function", r.test_function},
             {"family_weight", r.family_weight},
             {"T", r.T},
             {"lhs", r.lhs},
             {"rhs", r.rhs},
             {"ratio", report::number(r.ratio)},
             {"tail_bound", r.tail},
             {"lhs_error_bar", r.tail},
             {"rhs_divisor_formula", dn::density_main_term(Q, f, Phi)},
             {"excluded", r.excluded},
             {"rows", rows}};
    if (!o.csv.empty()) report::emit(o.csv, csv_string(csv), std::cout);
    if (!o.plot.empty()) {
      std::ostringstream os;
      report::write_plot_data(os, {"q", "n_primitive", "weight", "lhs_q"}, plot);
      report::emit(o.plot, os.str(), std::cout);
    }
    write_json(o, doc, root);
  }
};

struct ExplicitCmd {
  arith::i64 q = 0;
  std::string char_id;
  double Q = 0.0;
  double T = 50.0;
  std::string mode = "exact";
  double c_expl = dn::default_c_expl;
  TestFunctionFlags phi;
  Output o;

  void setup(CLI::App* app) {
    app->add_option("--q", q, "Modulus")->required();
    app->add_option("--char", char_id, "Character id; default every primitive character mod q");
    app->add_option("--Q", Q, "Scale (default q)");
    app->add_option("--T", T, "Zero truncation height");
    app->add_option("--mode", mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
    app->add_option("--c-expl", c_expl, "Constant of the approximate-mode budget");
    phi.add(app);
    add_output(app, o, true);
  }

  void run(const CLI::App& root) const {
    const double scale = Q > 0.0 ? Q : static_cast<double>(q);
    const auto f = phi.build();
    const auto m = mode == "exact" ? dn::BalanceMode::exact : dn::BalanceMode::approximate;
    json rows = json::array();
    std::vector<std::vector<std::string>> csv{{"char_id", "zero_side", "prime_side", "residual", "tail", "budget", "ok"}};
    bool all_ok = true;
    for (const auto& chi : characters_for(q, char_id)) {
      const auto b = dn::explicit_balance(chi, scale, f, T, m, nullptr, c_expl);
      all_ok = all_ok && b.within_budget();
      rows.push_back({{"char_id", b.char_id}, {"zero_side", b.zero_side}, {"prime_side", b.prime_side},
                      {"residual", b.residual}, {"tail", b.tail}, {"budget", b.budget},
                      {"zeros_used", b.zeros_used}, {"within_budget", b.within_budget()}});
      csv.push_back({b.char_id, report::format_double(b.zero_side), report::format_double(b.prime_side),
                     report::format_double(b.residual), report::format_double(b.tail),
                     report::format_double(b.budget), b.within_budget() ? "true" : "false"});
    }
    if (!o.csv.empty()) report::emit(o.csv, csv_string(csv), std::cout);
    write_json(o, {{"command", "explicit-check"}, {"q", q}, {"Q", scale}, {"T", T}, {"mode", mode},
                   {"test_function", f.descriptor()}, {"all_within_budget", all_ok}, {"characters", rows}},
               root);
  }
};

struct SkappaCmd {
  double Q = 50.0;
  TestFunctionFlags phi;
  Output o;

  void setup(CLI::App* app) {
    app->add_option("--Q", Q, "Scale");
    phi.add(app);
    add_output(app, o);
  }

  void run(const CLI::App& root) const {
    const auto f = phi.build();
    const auto psi = dn::default_psi();
    const auto s = dn::s_kappa_two_ways(Q, f, psi);
    const double rel = std::abs(s.difference) / std::max(1.0, std::abs(s.direct));
    write_json(o, {{"command", "skappa"}, {"Q", Q}, {"test_function", f.descriptor()}, {"psi", psi.descriptor},
                   {"direct", s.direct}, {"orthog", s.orthog}, {"difference", s.difference},
                   {"relative_difference", rel}, {"orthog_without_coprimality", s.orthog_unrestricted}},
               root);
  }
};

struct NonvanishingCmd {
  double Q = 200.0;
  double threshold = 1e-8;
  std::string kappa = "1/25";
  double T = 20.0;
  Output o;

  void setup(CLI::App* app) {
    app->add_option("--Q", Q, "Moduli in [Q/2, Q]");
    app->add_option("--threshold", threshold, "|L(1/2)| above this counts as non-vanishing");
    app->add_option("--kappa", kappa, "Fejér support 2 + kappa for the density-side bound");
    app->add_option("--T", T, "Zero truncation height");
    add_output(app, o);
  }

  void run(const CLI::App& root) const {
    const auto k = ex::parse_rational(kappa);
    const auto r = dn::nonvanishing_proportion(Q, threshold, static_cast<double>(k), T);
    json doc{{"command", "nonvanishing"},
             {"Q", Q},
             {"threshold", report::number(threshold)},
             {"kappa", rat(k)},
             {"T", T},
             {"count", r.count},
             {"total", r.total},
             {"proportion", r.proportion},
             {"density_side_bound", r.density_bound},
             {"min_abs_central_value", report::number(r.min_abs_central)},
             {"limit_bound", rat(ex::nonvanishing_limit())},
             {"note", ex::nonvanishing_note()}};
    if (k > 0 && k < ex::rat(50, 1093)) doc["bound_at_kappa"] = rat(ex::nonvanishing_bound(k));
    write_json(o, doc, root);
  }
};

// ---------------------------------------------------------------------------

struct ApsumsCmd {
  CLI::App* delta = nullptr;
  CLI::App* tkappa = nullptr;
  CLI::App* lsr = nullptr;
  CLI::App* weil = nullptr;
  CLI::App* kloost = nullptr;
  CLI::App* poisson = nullptr;
  arith::i64 w_min = 1, w_max = 30, R = 1, c_max = 500, mn_max = 20, m = 1, n = 1, c = 1, modulus = 7, mu = 1, H = 8;
  double X = 1e4, Q = 50.0, varpi = 0.0, N = 1000.0;
  std::string support = "0.5,3";
  Output o;

  void setup(CLI::App* app) {
    app->require_subcommand(1);
    delta = app->add_subcommand("delta", "Δ(w) for w in a range");
    delta->add_option("--w-min", w_min);
    delta->add_option("--w-max", w_max);
    delta->add_option("--X", X);
    delta->add_option("--R", R);
    delta->add_option("--f-support", support, "Support lo,hi of the smooth weight f");
    add_output(delta, o, true, true);

    tkappa = app->add_subcommand("tkappa", "T_κ at level X = Q^{2+ϖ}");
    tkappa->add_option("--Q", Q);
    tkappa->add_option("--varpi", varpi);
    tkappa->add_option("--X", X, "Overrides Q^{2+varpi} when given");
    tkappa->add_option("--R", R);
    tkappa->add_option("--f-support", support);
    add_output(tkappa, o);

    lsr = app->add_subcommand("lsr", "Large-sieve diagnostic ratio");
    lsr->add_option("--Q", Q);
    lsr->add_option("--X", X);
    lsr->add_option("--R", R);
    lsr->add_option("--f-support", support);
    add_output(lsr, o);

    weil = app->add_subcommand("weil", "Exhaustive Weil bound check");
    weil->add_option("--c-max", c_max);
    weil->add_option("--mn-max", mn_max);
    add_output(weil, o);

    kloost = app->add_subcommand("kloosterman", "S(m, n; c)");
    kloost->add_option("--m", m);
    kloost->add_option("--n", n);
    kloost->add_option("--c", c);
    add_output(kloost, o);

    poisson = app->add_subcommand("poisson", "Poisson summation in a progression");
    poisson->add_option("--N", N);
    poisson->add_option("--q", modulus);
    poisson->add_option("--mu", mu);
    poisson->add_option("--H", H);
    poisson->add_option("--f-support", support);
    add_output(poisson, o);
  }

  SmoothBump weight() const {
    const auto comma = support.find(',');
    if (comma == std::string::npos) throw domain_error("--f-support must be lo,hi");
    return make_bump({std::stod(support.substr(0, comma)), std::stod(support.substr(comma + 1))});
  }

  static arith::SieveTable sieve_for(const SmoothBump& f, double X) {
    return arith::build_sieve(static_cast<arith::i64>(std::ceil(std::max(3.0, f.support.hi) * X)) + 1);
  }

  void run(const CLI::App& root) const {
    if (*delta) {
      if (w_min < 1 || w_max < w_min) throw domain_error("need 1 <= w-min <= w-max");
      const auto f = weight();
      const auto sieve = sieve_for(f, X);
      json rows = json::array();
      std::vector<std::vector<std::string>> csv{{"w", "X", "R", "delta"}};
      std::vector<std::vector<double>> plot;
      for (arith::i64 w = w_min; w <= w_max; ++w) {
        const double d = ds::delta_w(w, X, R, f, sieve);
        rows.push_back({{"w", w}, {"delta", d}});
        csv.push_back({std::to_string(w), report::format_double(X), std::to_string(R), report::format_double(d)});
        plot.push_back({static_cast<double>(w), d});
      }
      if (!o.csv.empty()) report::emit(o.csv, csv_string(csv), std::cout);
      if (!o.plot.empty()) {
        std::ostringstream os;
        report::write_plot_data(os, {"w", "delta"}, plot);
        report::emit(o.plot, os.str(), std::cout);
      }
      write_json(o, {{"command", "apsums delta"}, {"X", X}, {"R", R}, {"rows", rows}}, root);
    } else if (*tkappa) {
      auto p = ds::DispersionParams::from_level(Q, varpi, R);
      if (tkappa->count("--X")) p.X = X;
      const auto f = weight();
      const auto psi = make_bump({0.5, 3.0});
      const auto sieve = sieve_for(f, p.X);
      write_json(o, {{"command", "apsums tkappa"}, {"Q", p.Q}, {"X", p.X}, {"R", p.R},
                     {"t_kappa", ds::t_kappa(p, psi, f, sieve)}},
                 root);
    } else if (*lsr) {
      const auto f = weight();
      const auto sieve = sieve_for(f, X);
      write_json(o, {{"command", "apsums lsr"}, {"Q", Q}, {"X", X}, {"R", R},
                     {"ratio", ds::large_sieve_ratio(static_cast<arith::i64>(Q), X, R, f, sieve)}},
                 root);
    } else if (*weil) {
      const auto r = ds::weil_sweep(c_max, mn_max);
      write_json(o, {{"command", "apsums weil"}, {"c_max", c_max}, {"mn_max", mn_max}, {"checked", r.checked},
                     {"violations", r.violations}, {"worst_ratio", r.worst_ratio}},
                 root);
    } else if (*kloost) {
      write_json(o, {{"command", "apsums kloosterman"}, {"m", m}, {"n", n}, {"c", c},
                     {"value", ds::kloosterman(m, n, c)}, {"weil_bound", ds::weil_bound(m, n, c)}},
                 root);
    } else if (*poisson) {
      const auto r = ds::poisson_check(weight(), N, modulus, mu, H);
      write_json(o, {{"command", "apsums poisson"}, {"N", N}, {"q", modulus}, {"mu", mu}, {"H", H},
                     {"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}},
                 root);
    }
  }
};

struct DecompCmd {
  CLI::App* classify = nullptr;
  CLI::App* fuzz = nullptr;
  CLI::App* hb = nullptr;
  std::vector<double> t;
  double lambda = 0.0, sigma = 0.0, delta = 0.0;
  bool no_enforce = false, json_out = false;
  std::size_t count = 100000, max_j = 12;
  std::uint64_t seed = 1;
  arith::i64 n_max = 5000, z = 18;
  int J = 3;
  Output o;

  void setup(CLI::App* app) {
    app->require_subcommand(1);
    classify = app->add_subcommand("classify", "Case of an exponent tuple");
    classify->add_option("--t", t, "Exponents t_1,...,t_J summing to 1")->delimiter(',')->required();
    classify->add_option("--lambda", lambda);
    classify->add_option("--sigma", sigma);
    classify->add_option("--delta", delta);
    classify->add_flag("--no-enforce", no_enforce, "Search even when the hypotheses fail");
    classify->add_flag("--json", json_out, "JSON instead of the one-line summary");
    add_output(classify, o);

    fuzz = app->add_subcommand("fuzz", "Classify random hypothesis-satisfying tuples");
    fuzz->add_option("--count", count);
    fuzz->add_option("--max-j", max_j);
    fuzz->add_option("--seed", seed, "Random seed");
    add_output(fuzz, o);

    hb = app->add_subcommand("heath-brown", "Heath-Brown identity against sieve Λ");
    hb->add_option("--n-max", n_max);
    hb->add_option("--J", J);
    hb->add_option("--z", z);
    add_output(hb, o);
  }

  void run(const CLI::App& root) const {
    if (*classify) {
      ds::ExponentTuple x{t, lambda, sigma, delta};
      const auto c = ds::classify(x, !no_enforce);
      std::string witness;
      for (std::size_t i : c.indices) witness += (witness.empty() ? "" : ",") + std::to_string(i + 1);
      if (!json_out) {
        report::emit(o.out, std::string("type=") + ds::name(c.type) + " witness=" + witness + "\n", std::cout);
        return;
      }
      write_json(o, {{"command", "decomp classify"}, {"type", ds::name(c.type)}, {"witness", witness},
                     {"greedy", c.greedy}, {"hypotheses", x.violation().empty() ? "satisfied" : x.violation()}},
                 root);
    } else if (*fuzz) {
      const auto r = ds::fuzz_classifier(count, seed, max_j);
      write_json(o, {{"command", "decomp fuzz"}, {"seed", seed}, {"count", r.checked}, {"max_j", max_j},
                     {"failures", r.failures}, {"d1", r.by_type[0]}, {"d2", r.by_type[1]}, {"II", r.by_type[2]},
                     {"first_failure", r.first_failure}},
                 root);
      if (r.failures) throw invariant_violation("decomp fuzz: " + r.first_failure);
    } else if (*hb) {
      const auto sieve = arith::build_sieve(n_max);
      std::size_t bad = 0;
      double worst = 0.0;
      for (arith::i64 n = 1; n <= n_max; ++n) {
        const auto r = ds::heath_brown_check(n, J, z);
        const double err = std::abs(r.rhs - sieve.lambda[static_cast<std::size_t>(n)]);
        worst = std::max(worst, err);
        if (err > 1e-9) ++bad;
      }
      write_json(o, {{"command", "decomp heath-brown"}, {"n_max", n_max}, {"J", J}, {"z", z},
                     {"mismatches", bad}, {"max_abs_error", worst}},
                 root);
    }
  }
};

struct ExponentsCmd {
  CLI::App* solve = nullptr;
  CLI::App* feasible = nullptr;
  CLI::App* tii = nullptr;
  CLI::App* major = nullptr;
  CLI::App* nonvan = nullptr;
  std::string theta = "7/64";
  std::string varpi = "1/25";
  std::string kappa;
  std::string variant = "displayed";
  int k = 0;
  bool json_out = false;
  Output o;

  void setup(CLI::App* app) {
    app->require_subcommand(1);
    solve = app->add_subcommand("solve", "Supremum of the admissible level ϖ");
    solve->add_option("--theta", theta, "Exponent toward Selberg's conjecture; the system is set at 7/64");
    solve->add_option("--variant", variant, "displayed or direct form of the first type-I coupling")
        ->check(CLI::IsMember({"displayed", "direct"}));
    solve->add_flag("--json", json_out, "JSON instead of the one-line summary");
    add_output(solve, o);

    feasible = app->add_subcommand("feasible", "Intervals of λ, δ, ρ at a level");
    feasible->add_option("--varpi", varpi, "Level as p/q");
    add_output(feasible, o);

    tii = app->add_subcommand("tii", "Type II X-exponents at θ");
    tii->add_option("--theta", theta);
    add_output(tii, o);

    major = app->add_subcommand("majorization", "Whether term k is dominated by term 1");
    major->add_option("--k", k, "1..6; default all");
    major->add_option("--theta", theta);
    add_output(major, o);

    nonvan = app->add_subcommand("nonvanishing", "Proportion bound 1 - 1/(2+κ)");
    nonvan->add_option("--kappa", kappa, "κ as p/q; default the limit κ -> 50/1093");
    add_output(nonvan, o);
  }

  static json interval_json(const ex::ParamInterval& iv) {
    if (iv.empty) return {{"empty", true}, {"lo", rat(iv.lo)}, {"hi", rat(iv.hi)}};
    return {{"empty", false}, {"lo", rat(iv.lo)}, {"hi", rat(iv.hi)}};
  }

  void run(const CLI::App& root) const {
    if (*solve) {
      if (ex::parse_rational(theta) != ex::rat(7, 64)) {
        throw domain_error("exponents solve: the type II constraints are stated at theta = 7/64 only");
      }
      const auto sys = ex::full_system(variant == "direct" ? ex::D1Variant::direct : ex::D1Variant::displayed);
      const auto r = ex::sup_varpi(sys);
      if (!json_out) {
        report::emit(o.out, "sup_varpi = " + r.value.str() + " (binding: " + r.binding + "-interval)\n", std::cout);
        return;
      }
      json ivs;
      for (auto p : {ex::Param::lambda, ex::Param::delta, ex::Param::rho}) {
        ivs[ex::name(p)] = r.value.is_rational() ? interval_json(ex::interval_for(p, r.value.a, sys)) : json();
      }
      write_json(o, {{"command", "exponents solve"}, {"sup_varpi", r.value.str()}, {"binding", r.binding},
                     {"binding_labels", r.binding_labels}, {"at_search_bound", r.at_search_bound},
                     {"intervals", ivs}},
                 root);
    } else if (*feasible) {
      const auto w = ex::parse_rational(varpi);
      json ivs;
      for (auto p : {ex::Param::lambda, ex::Param::delta, ex::Param::rho}) {
        ivs[ex::name(p)] = interval_json(ex::interval_for(p, w));
      }
      write_json(o, {{"command", "exponents feasible"}, {"varpi", rat(w)}, {"feasible", ex::feasible_at(w)},
                     {"intervals", ivs}},
                 root);
    } else if (*tii) {
      const auto th = ex::parse_rational(theta);
      json v = json::array();
      for (const auto& f : ex::tii_thresholds(th)) v.push_back(f.str());
      write_json(o, {{"command", "exponents tii"}, {"theta", rat(th)}, {"x_exponents", v},
                     {"rho_upper_from_size", ex::rho_upper_from_size().str()},
                     {"rho_lower_from_main_term", ex::rho_lower_from_main_term().str()}},
                 root);
    } else if (*major) {
      const auto th = ex::parse_rational(theta);
      json rows = json::array();
      for (int kk = (k ? k : 1); kk <= (k ? k : 6); ++kk) {
        const auto r = ex::majorization_check(kk, th);
        json wit = json::array();
        for (const auto& x : r.witness) wit.push_back(rat(x));
        rows.push_back({{"k", kk}, {"majorized", r.majorized}, {"witness", wit}});
      }
      write_json(o, {{"command", "exponents majorization"}, {"theta", rat(th)}, {"terms", rows}}, root);
    } else if (*nonvan) {
      json doc{{"command", "exponents nonvanishing"}};
      if (kappa.empty()) {
        const auto b = ex::nonvanishing_limit();
        doc["kappa"] = "50/1093 (limit)";
        doc["bound"] = rat(b);
        doc["bound_decimal"] = static_cast<double>(b);
      } else {
        const auto kv = ex::parse_rational(kappa);
        const auto b = ex::nonvanishing_bound(kv);
        doc["kappa"] = rat(kv);
        doc["bound"] = rat(b);
        doc["bound_decimal"] = static_cast<double>(b);
      }
      doc["exceeds_0.51118"] = ex::nonvanishing_limit() > ex::parse_rational("0.51118");
      doc["note"] = ex::nonvanishing_note();
      write_json(o, doc, root);
    }
  }
};

int exit_code(const std::string& kind) {
  if (kind == "usage") return 2;
  if (kind == "completeness") return 4;
  if (kind == "resource") return 5;
  return 3;
}

int fail(const std::string& kind, const std::string& message) {
  std::cout << report::error_document(kind, message).dump(2) << "\n";
  return exit_code(kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zeroscope: low-lying zeros of Dirichlet L-functions and the exponent bookkeeping behind them"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "key=value configuration file mirroring the flags");
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker cap; ZEROSCOPE_THREADS also applies");

  CharsCmd chars;
  ZerosCmd zeros;
  DensityCmd density;
  ExplicitCmd explicit_check;
  SkappaCmd skappa;
  ApsumsCmd apsums;
  DecompCmd decomp;
  ExponentsCmd exps;
  NonvanishingCmd nonvanishing;

  auto* c_chars = app.add_subcommand("chars", "Enumerate Dirichlet characters mod q");
  chars.setup(c_chars);
  auto* c_zeros = app.add_subcommand("zeros", "Certified critical-line zeros");
  zeros.setup(c_zeros);
  auto* c_density = app.add_subcommand("density", "Family 1-level density");
  density.setup(c_density);
  auto* c_explicit = app.add_subcommand("explicit-check", "Explicit formula balance per character");
  explicit_check.setup(c_explicit);
  auto* c_skappa = app.add_subcommand("skappa", "S_κ(Q) by characters and by orthogonality");
  skappa.setup(c_skappa);
  auto* c_apsums = app.add_subcommand("apsums", "Primes in progressions diagnostics");
  apsums.setup(c_apsums);
  auto* c_decomp = app.add_subcommand("decomp", "Combinatorial decomposition tools");
  decomp.setup(c_decomp);
  auto* c_exps = app.add_subcommand("exponents", "Exact exponent synthesis");
  exps.setup(c_exps);
  auto* c_nonvan = app.add_subcommand("nonvanishing", "Empirical central non-vanishing");
  nonvanishing.setup(c_nonvan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  if (threads > 0) setenv("ZEROSCOPE_THREADS", std::to_string(threads).c_str(), 1);

  try {
    if (*c_chars) chars.run(app);
    else if (*c_zeros) zeros.run(app);
    else if (*c_density) density.run(app);
    else if (*c_explicit) explicit_check.run(app);
    else if (*c_skappa) skappa.run(app);
    else if (*c_apsums) apsums.run(app);
    else if (*c_decomp) decomp.run(app);
    else if (*c_exps) exps.run(app);
    else if (*c_nonvan) nonvanishing.run(app);
  } catch (const std::exception& e) {
    const auto* k = dynamic_cast<const error_kind*>(&e);
    json doc = report::error_document(k ? k->kind() : "internal", e.what());
    if (const auto* c = dynamic_cast<const completeness_error*>(&e)) {
      doc["error"]["off_line_suspect"] = c->off_line_suspect();
    }
    std::cout << doc.dump(2) << "\n";
    return exit_code(k ? k->kind() : "internal");
  }
  return 0;
}
