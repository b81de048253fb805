// Acceptance suite: one PASS/FAIL line per criterion, with the measured values
// and the wall time. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/optimizer.hpp"
#include "spdc/pipeline.hpp"
#include "spdc/validation.hpp"

using namespace spdc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  double time_limit = 0.0;  // seconds; 0 = none
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

Outcome focusing_optimum() {
  OptimizerOptions opt;
  opt.threads = default_thread_count();
  const auto r = optimize_focus(0.04, FocusBounds{}, opt);
  const bool ok_obj = rel(r.best_objective, 0.054) <= 0.05;
  const bool ok_k = std::abs(r.best_kappa + 3.0) <= 0.1;
  const bool ok_z = std::abs(r.best_zeta_R - 0.18) <= 0.01;
  return {ok_obj && ok_k && ok_z,
          fmt("objective %.5f (0.054 +/-5%% %s), kappa %.4f (-3.0 +/-0.1 %s), zeta_R %.4f (0.18 +/-0.01 %s)",
              r.best_objective, ok_obj ? "ok" : "off", r.best_kappa, ok_k ? "ok" : "off", r.best_zeta_R,
              ok_z ? "ok" : "off"),
          10.0};
}

Design bundled_design() {
  auto cfg = load_run_config(std::string(SPDC_SOURCE_DIR) + "/configs/ppktp_800_typeII.conf");
  return resolve_design(cfg);
}

Outcome classical_efficiency() {
  const auto d = bundled_design();
  const double q = *evaluate_sfg(d).report.efficiencies.q_sfg;
  return {rel(q, 2.0e-3) <= 0.10,
          fmt("Q_SFG = %.4e W^-1 at kappa %.3f, zeta_R %.3f (target 2.0e-3 +/-10%%, ratio %.3f)", q, d.focus.kappa,
              d.focus.zeta_R, q / 2.0e-3),
          1.0};
}

Outcome quantum_brightness() {
  const auto d = bundled_design();
  const auto r = evaluate_sfg(d).report;
  const double ge = gamma_eff_pair(d.filter_s, d.filter_i);
  const double w2 = pair_rate(d.waves, d.pump_power, *r.efficiencies.q_sfg, ge);
  return {rel(w2, 0.785) <= 0.10,
          fmt("W2 = %.4f s^-1 at Gamma_eff = %.6g rad/s, P = %g mW (target 0.785 +/-10%%, ratio %.3f)", w2, ge,
              d.pump_power * 1e3, w2 / 0.785),
          1.0};
}

Outcome filter_triangle() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mhz(0.1, 50.0);
  double worst = 0.0;
  for (int j = 0; j < 20; ++j) {
    const FilterSpec s = Lorentzian{2.0 * constants::pi * 1e6 * mhz(rng)};
    const FilterSpec i = Lorentzian{2.0 * constants::pi * 1e6 * mhz(rng)};
    const double a = gamma_eff_pair(s, i);
    const double b = gamma_eff_spectral(s, i);
    const double c = gamma_eff_temporal(s, i);
    worst = std::max({worst, rel(a, b), rel(b, c), rel(a, c)});
  }
  const double g = 2.0 * constants::pi * 3.7e6;
  const double matched = gamma_eff_pair(Lorentzian{g}, Lorentzian{g});
  const bool exact = matched == g / 2.0;
  return {worst <= 1e-6 && exact,
          fmt("worst pairwise rel diff %.2e over 20 pairs; matched Gamma_eff == Gamma/2: %s", worst,
              exact ? "yes" : "no")};
}

Outcome correlation_limits() {
  const double gi = 2.0 * constants::pi * 1e6;
  const FilterSpec idler = Lorentzian{gi};
  double worst = 0.0;
  for (int j = -200; j <= 200; ++j) {
    const double tau = j * 0.05 / gi;
    const double expect = tau > 0.0 ? 0.0 : gi / 2.0 * std::exp(gi * tau / 2.0);
    worst = std::max(worst, std::abs(correlation_amplitude(Unfiltered{}, idler, tau).real() - expect) / (gi / 2.0));
    const double g = 2.0 * constants::pi * 2.5e6;
    const double m = correlation_amplitude(Lorentzian{g}, Lorentzian{g}, tau).real();
    worst = std::max(worst, std::abs(m - g / 4.0 * std::exp(-g * std::abs(tau) / 2.0)) / (g / 4.0));
  }
  // Broad but finite signal filter approaches the one-sided limit.
  const FilterSpec wide = Lorentzian{1e12 * gi};
  double approach = 0.0;
  for (double tau : {-5.0 / gi, -1.0 / gi, -0.1 / gi, 0.5 / gi, 3.0 / gi}) {
    const double expect = tau > 0.0 ? 0.0 : gi / 2.0 * std::exp(gi * tau / 2.0);
    approach = std::max(approach, std::abs(correlation_amplitude(wide, idler, tau).real() - expect) / (gi / 2.0));
  }
  return {worst <= 1e-9 && approach <= 1e-9,
          fmt("max pointwise deviation %.2e (closed forms), %.2e (Gamma_s = 1e12 Gamma_i)", worst, approach)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> ukappa(-20.0, 20.0), ulogz(std::log(0.05), std::log(5.0)), urk(0.0, 0.2);
  const double L = 0.01, ni = 1.8, np = 2.4;
  struct Draw {
    double kappa, zeta, rk;
  };
  std::vector<Draw> draws;
  for (int j = 0; j < 100; ++j) draws.push_back({ukappa(rng), std::exp(ulogz(rng)), urk(rng)});
  const auto diffs = parallel_map<double>(draws.size(), default_thread_count(), [&](std::size_t j) {
    const auto& p = draws[j];
    const double ns = ni * (1.0 + p.rk) / (1.0 - p.rk);
    const auto waves = WaveTriple::from_signal_idler(800e-9, ns, 800e-9, ni, np);
    const CrystalSpec c(L, solve_poling_period(waves, L, p.kappa), 2.4e-12);
    const auto fp = derive_focus_params(waves, c, p.zeta * L);
    const auto a = i_sfg_gaussian(waves, c, fp, 1e-11).value;
    const auto b = i_sfg_direct3d(waves, c, fp).value;
    return std::abs(a - b) / std::abs(b);
  });
  double worst = 0.0;
  for (double d : diffs) worst = std::max(worst, d);
  return {worst <= 1e-4, fmt("worst complex rel diff %.2e over 100 draws", worst), 60.0};
}

Outcome closed_form_spot() {
  const auto u = upsilon(FocusParams::dimensionless(0.0, 0.5, 0.0), 1e-12).value;
  const double err = std::abs(u - cplx(0.25, 0.0));
  return {err <= 1e-9, fmt("Upsilon(0, 0.5, 0) = %.15f%+.2ei, |diff| = %.2e", u.real(), u.imag(), err)};
}

Outcome ling_equivalence() {
  const auto waves = reference_waves();
  const double L = 0.01;
  const CrystalSpec c(L, solve_poling_period(waves, L, 0.0), 2.4e-12);
  const auto fp = derive_focus_params(waves, c, 50.0 * L);
  const FilterSpec f = Lorentzian{2.0 * constants::pi * 1e6};
  const auto r = ling_comparator(waves, c, fp, f, f, 1e-3);
  return {r.report.relative_diff < 1e-3,
          fmt("zeta_R = 50: thin-crystal rate %.6e s^-1, pair rate %.6e s^-1, rel diff %.2e", r.ling_rate,
              r.pair_rate, r.report.relative_diff)};
}

Outcome heralding_bound() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ukappa(-10.0, 5.0), ulogz(std::log(0.05), std::log(3.0)),
      umhz(0.2, 30.0), un(1.5, 2.3), ulam(700e-9, 1000e-9), up(1e-4, 1e-1);
  std::bernoulli_distribution degenerate(0.25);
  const double L = 0.01;
  std::vector<Design> designs;
  for (int j = 0; j < 200; ++j) {
    const double ls = ulam(rng), li = ulam(rng), ns = un(rng), ni = un(rng), np = std::max(ns, ni) + 0.1;
    const bool deg = degenerate(rng);
    const auto waves = deg ? WaveTriple::make_degenerate(ls, ns, np) : WaveTriple::from_signal_idler(ls, ns, li, ni, np);
    const double kappa = ukappa(rng), zeta = std::exp(ulogz(rng));
    const CrystalSpec c(L, solve_poling_period(waves, L, kappa), 1e-12 * un(rng));
    const FilterSpec fs = Lorentzian{2.0 * constants::pi * 1e6 * umhz(rng)};
    const FilterSpec fi = deg ? fs : FilterSpec{Lorentzian{2.0 * constants::pi * 1e6 * umhz(rng)}};
    designs.push_back(Design{waves, c, derive_focus_params(waves, c, zeta * L), fs, fi, up(rng), std::nullopt});
  }
  const auto results = parallel_map<SourceResult>(designs.size(), default_thread_count(),
                                                  [&](std::size_t j) { return evaluate_source(designs[j]); });
  int bad_range = 0, bad_bound = 0;
  double worst_identity = 0.0;
  for (const auto& r : results) {
    const auto& rep = r.report;
    for (const auto& [eta, singles] : {std::pair{rep.eta_signal, rep.singles_rate_signal},
                                       std::pair{rep.eta_idler, rep.singles_rate_idler}}) {
      if (!(*eta > 0.0 && *eta <= 1.0)) ++bad_range;
      worst_identity = std::max(worst_identity, rel(*eta, rep.pair_rate / *singles));
    }
    if (rep.pair_rate > std::min(*rep.singles_rate_signal, *rep.singles_rate_idler)) ++bad_bound;
  }
  return {bad_range == 0 && bad_bound == 0 && worst_identity <= 1e-12,
          fmt("200 configs: eta outside (0,1]: %d, W2 > min singles: %d, worst eta vs W2/W1 rel diff %.2e", bad_range,
              bad_bound, worst_identity)};
}

Outcome bk_identity() {
  const auto deg = WaveTriple::make_degenerate(1064e-9, 1.8, 1.8);
  const double L = 0.01;
  const CrystalSpec c(L, std::nullopt, 2.4e-12);
  double worst = 0.0;
  for (double zeta : {0.1, 0.3, 1.0, 2.84, 10.0}) {
    const auto fp = derive_focus_params(deg, c, zeta * L);
    const double ps = 0.5;
    const double p2 = q_shg(deg, c, i_sfg_gaussian(deg, c, fp, 1e-12).abs_sq()) * ps * ps;
    const double bk = shg_power_focusing_form(deg, c, fp.rayleigh_range, upsilon(fp, 1e-12).abs_sq, ps);
    worst = std::max(worst, rel(p2, bk));
  }
  return {worst <= 1e-10, fmt("SHG power from Q_SHG vs focusing-function form, worst rel diff %.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"focusing optimum", focusing_optimum},
      {"absolute classical efficiency", classical_efficiency},
      {"absolute quantum brightness", quantum_brightness},
      {"filter consistency triangle", filter_triangle},
      {"correlation-shape limits", correlation_limits},
      {"reduced vs direct overlap", oracle_equivalence},
      {"closed-form spot value", closed_form_spot},
      {"thin-crystal equivalence", ling_equivalence},
      {"heralding bound", heralding_bound},
      {"Boyd-Kleinman identity", bk_identity},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass;
    std::string timing = fmt("%.3f s", secs);
    if (o.time_limit > 0.0) {
      timing += fmt(" (limit %.0f s)", o.time_limit);
      pass = pass && secs < o.time_limit;
    }
    std::printf("[%s] %2d %-30s %s; %s\n", pass ? "PASS" : "FAIL", n, name, o.detail.c_str(), timing.c_str());
    if (!pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed;
}
