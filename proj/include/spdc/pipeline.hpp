#pragma once

// End-to-end evaluation of one source design: overlaps, efficiencies, rates
// and heralding efficiencies, plus the parameter-sweep engine.

#include <charconv>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spdc/classical.hpp"
#include "spdc/config.hpp"
#include "spdc/filters.hpp"
#include "spdc/materials.hpp"
#include "spdc/modebasis.hpp"
#include "spdc/optimizer.hpp"
#include "spdc/overlap.hpp"
#include "spdc/quantities.hpp"
#include "spdc/quantum.hpp"

namespace spdc {

/// A fully resolved design: physical objects only, no file references.
struct Design {
  WaveTriple waves;
  CrystalSpec crystal;
  FocusParams focus;
  FilterSpec filter_s;
  FilterSpec filter_i;
  double pump_power = 0.0;
  std::optional<double> pm_bandwidth;
};

struct PipelineOptions {
  double quad_tol = kDefaultQuadTol;
  int basis_order = 40;
  unsigned threads = 1;
};

inline Design resolve_design(const RunConfig& cfg, const PipelineOptions& opt = {}) {
  double ns = 0.0, ni = 0.0, np = 0.0, d_eff = 0.0;
  std::string name = "inline";
  if (cfg.material) {
    auto db = builtin_materials();
    if (cfg.materials_db) {
      auto extra = load_material_db(*cfg.materials_db);
      for (auto& r : extra) {
        for (const auto& b : db) {
          if (b.name == r.name) throw MaterialError("material '" + r.name + "' shadows a built-in record");
        }
        db.push_back(std::move(r));
      }
    }
    const auto& rec = find_material(db, *cfg.material);
    const double lambda_p = 1.0 / (1.0 / cfg.lambda_s + 1.0 / cfg.lambda_i);
    ns = index_at(rec, cfg.lambda_s, Axis::signal);
    ni = index_at(rec, cfg.lambda_i, Axis::idler);
    np = index_at(rec, lambda_p, Axis::pump);
    d_eff = rec.d_eff;
    name = rec.name;
  } else {
    ns = cfg.inline_material->n_s;
    ni = cfg.inline_material->n_i;
    np = cfg.inline_material->n_p;
    d_eff = cfg.inline_material->d_eff;
  }

  const WaveTriple waves = cfg.degenerate ? WaveTriple::make_degenerate(cfg.lambda_s, ns, np)
                                          : WaveTriple::from_signal_idler(cfg.lambda_s, ns, cfg.lambda_i, ni, np);
  const double L = cfg.length;
  const double R_k = waves.k_minus() / waves.k_plus();

  std::optional<double> period = cfg.poling_period;
  double kappa = 0.0;
  double zeta = 0.0;
  if (cfg.focus == RunConfig::Focus::optimal) {
    FocusBounds b;
    OptimizerOptions oo;
    oo.threads = opt.threads;
    oo.quad_tol = std::min(opt.quad_tol, 1e-10);
    if (!cfg.auto_poling || cfg.target_kappa) {
      // κ is fixed by the crystal; only the focus is free.
      const double k_fixed = cfg.auto_poling ? *cfg.target_kappa
                                             : (waves.k_minus() - 2.0 * constants::pi / *period) * L;
      b.kappa_min = b.kappa_max = k_fixed;
    }
    const auto best = optimize_focus(R_k, b, oo);
    kappa = best.best_kappa;
    zeta = best.best_zeta_R;
  } else {
    zeta = cfg.focus == RunConfig::Focus::zeta_R ? cfg.zeta_R : cfg.rayleigh_range / L;
    kappa = cfg.auto_poling ? cfg.target_kappa.value_or(0.0)
                            : (waves.k_minus() - 2.0 * constants::pi / *period) * L;
  }
  if (cfg.auto_poling) period = solve_poling_period(waves, L, kappa);

  CrystalSpec crystal(L, period, d_eff, name);
  const FocusParams fp = derive_focus_params(waves, crystal, zeta * L);
  FilterSpec fs = make_filter(cfg.filter_s);
  FilterSpec fi = cfg.degenerate ? fs : make_filter(cfg.filter_i);
  return Design{waves, crystal, fp, fs, fi, cfg.pump_power, cfg.pm_bandwidth};
}

/// Everything computed for one design.
struct SourceResult {
  Design design;
  cplx upsilon;
  cplx i_sfg;
  SourceReport report;
  std::optional<ParsevalSum> dfg_s;
  std::optional<ParsevalSum> dfg_i;
};

/// SFG-side quantities only (Υ, I_SFG, Q_SFG or Q_SHG); cheap.
inline SourceResult evaluate_sfg(const Design& d, const PipelineOptions& opt = {}) {
  SourceResult out{d, {}, {}, {}, std::nullopt, std::nullopt};
  out.upsilon = upsilon(d.focus, opt.quad_tol).value;
  const auto ov = i_sfg_gaussian(d.waves, d.crystal, d.focus, opt.quad_tol);
  out.i_sfg = ov.value;
  auto& eff = out.report.efficiencies;
  eff.i_sfg_sq = ov.abs_sq();
  if (d.waves.degenerate()) eff.q_shg = q_shg(d.waves, d.crystal, eff.i_sfg_sq);
  else eff.q_sfg = q_sfg(d.waves, d.crystal, eff.i_sfg_sq);
  out.report.pump_power = d.pump_power;
  return out;
}

/// Full pipeline: pairs, singles on each filtered arm, heralding efficiencies.
inline SourceResult evaluate_source(const Design& d, const PipelineOptions& opt = {}) {
  SourceResult out = evaluate_sfg(d, opt);
  auto& rep = out.report;
  auto& eff = rep.efficiencies;
  const bool deg = d.waves.degenerate();
  const double q_pair = deg ? *eff.q_shg : *eff.q_sfg;

  rep.gamma_eff = gamma_eff_pair(d.filter_s, d.filter_i);
  rep.pair_rate = pair_rate(d.waves, d.pump_power, q_pair, rep.gamma_eff);
  if (d.pm_bandwidth) rep.narrowband_warning = rep.gamma_eff > *d.pm_bandwidth;

  ParsevalOptions po;
  po.quad_tol = opt.quad_tol;
  if (!is_unfiltered(d.filter_s)) rep.gamma_eff_s = gamma_eff_single(d.filter_s);
  if (!is_unfiltered(d.filter_i)) rep.gamma_eff_i = gamma_eff_single(d.filter_i);

  if (deg) {
    const auto apg = i_apg_sq(d.waves, d.crystal, d.focus,
                              basis_for(d.waves.signal(), d.focus.rayleigh_range, opt.basis_order), po);
    out.dfg_s = apg;
    eff.i_dfg_s_sq = eff.i_dfg_i_sq = apg.total;
    eff.q_apg = q_apg(d.waves, d.crystal, apg.total);
    if (rep.gamma_eff_s) {
      rep.singles_rate_signal = rep.singles_rate_idler = singles_rate(d.waves, d.pump_power, *eff.q_apg, *rep.gamma_eff_s);
      rep.eta_signal = rep.eta_idler =
          conditional_efficiency(rep.gamma_eff, *rep.gamma_eff_s, eff.i_sfg_sq, apg.total, true);
    }
    return out;
  }

  // Signal heralding: signal injected, idler generated.
  if (rep.gamma_eff_s) {
    const auto s = i_dfg_sq(d.waves, d.crystal, d.focus,
                            basis_for(d.waves.idler(), d.focus.rayleigh_range, opt.basis_order), po);
    out.dfg_s = s;
    eff.i_dfg_s_sq = s.total;
    eff.q_dfg_s = q_dfg(d.waves, d.crystal, s.total);
    rep.singles_rate_signal = singles_rate(d.waves, d.pump_power, *eff.q_dfg_s, *rep.gamma_eff_s);
    rep.eta_signal = conditional_efficiency(rep.gamma_eff, *rep.gamma_eff_s, eff.i_sfg_sq, s.total);
  }
  if (rep.gamma_eff_i) {
    const auto sw = d.waves.swapped();
    const auto i = i_dfg_sq(sw, d.crystal, d.focus,
                            basis_for(sw.idler(), d.focus.rayleigh_range, opt.basis_order), po);
    out.dfg_i = i;
    eff.i_dfg_i_sq = i.total;
    eff.q_dfg_i = q_dfg(sw, d.crystal, i.total);
    rep.singles_rate_idler = singles_rate(sw, d.pump_power, *eff.q_dfg_i, *rep.gamma_eff_i);
    rep.eta_idler = conditional_efficiency(rep.gamma_eff, *rep.gamma_eff_i, eff.i_sfg_sq, i.total);
  }
  return out;
}

/// Pairs per second, per mW of pump, per MHz of Γ_eff/2π.
inline double brightness_per_mw_mhz(const SourceReport& r) {
  if (!(r.pump_power > 0.0) || !(r.gamma_eff > 0.0)) return 0.0;
  return r.pair_rate / (r.pump_power * 1e3) / (r.gamma_eff / (2.0 * constants::pi * 1e6));
}

// ----------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { kappa, zeta_R, R_k, z_R_mm, gamma_s_MHz, gamma_i_MHz, P_p_mW };

inline const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::kappa: return "kappa";
    case SweepAxis::zeta_R: return "zeta_R";
    case SweepAxis::R_k: return "R_k";
    case SweepAxis::z_R_mm: return "z_R_mm";
    case SweepAxis::gamma_s_MHz: return "gamma_s_MHz";
    case SweepAxis::gamma_i_MHz: return "gamma_i_MHz";
    case SweepAxis::P_p_mW: return "P_p_mW";
  }
  return "?";
}

struct SweepSpec {
  SweepAxis axis;
  std::vector<double> values;
};

/// `name=start:stop:count` (count ≥ 1; count = 1 uses start) or `name=v1,v2,...`.
inline SweepSpec parse_sweep_spec(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("sweep spec '" + text + "': expected name=start:stop:count");
  const std::string name = text.substr(0, eq);
  const std::string range = text.substr(eq + 1);
  SweepSpec s{SweepAxis::kappa, {}};
  bool found = false;
  for (auto a : {SweepAxis::kappa, SweepAxis::zeta_R, SweepAxis::R_k, SweepAxis::z_R_mm, SweepAxis::gamma_s_MHz,
                 SweepAxis::gamma_i_MHz, SweepAxis::P_p_mW}) {
    if (name == axis_name(a)) s.axis = a, found = true;
  }
  if (!found) {
    throw std::invalid_argument("sweep axis '" + name +
                                "' unknown (kappa, zeta_R, R_k, z_R_mm, gamma_s_MHz, gamma_i_MHz, P_p_mW)");
  }
  auto num = [&](const std::string& t) {
    double v = 0.0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size()) {
      throw std::invalid_argument("sweep spec '" + text + "': '" + t + "' is not a number");
    }
    return v;
  };
  if (range.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(range);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw std::invalid_argument("sweep spec '" + text + "': expected start:stop:count");
    const double a = num(parts[0]), b = num(parts[1]), c = num(parts[2]);
    if (!(c >= 1.0) || c != std::floor(c)) throw std::invalid_argument("sweep spec '" + text + "': bad count");
    const auto n = static_cast<std::size_t>(c);
    for (std::size_t j = 0; j < n; ++j) s.values.push_back(n == 1 ? a : a + (b - a) * double(j) / double(n - 1));
  } else {
    std::stringstream ss(range);
    for (std::string p; std::getline(ss, p, ',');) s.values.push_back(num(p));
  }
  if (s.values.empty()) throw std::invalid_argument("sweep spec '" + text + "': no values");
  return s;
}

/// Design with one axis overridden. κ, ζ_R and R_k act on the dimensionless
/// focus directly; R_k overrides are what-if values decoupled from the indices.
inline Design apply_axis(Design d, SweepAxis axis, double v) {
  const double L = d.crystal.length();
  switch (axis) {
    case SweepAxis::kappa:
      d.focus = FocusParams::make(d.focus.rayleigh_range, v, d.focus.zeta_R, d.focus.R_k);
      if (d.waves.k_minus() - v / L > 0.0) d.crystal = d.crystal.with_poling_period(solve_poling_period(d.waves, L, v));
      break;
    case SweepAxis::zeta_R:
      d.focus = FocusParams::make(v * L, d.focus.kappa, v, d.focus.R_k);
      break;
    case SweepAxis::R_k:
      d.focus = FocusParams::make(d.focus.rayleigh_range, d.focus.kappa, d.focus.zeta_R, v);
      break;
    case SweepAxis::z_R_mm:
      d.focus = FocusParams::make(v * 1e-3, d.focus.kappa, v * 1e-3 / L, d.focus.R_k);
      break;
    case SweepAxis::gamma_s_MHz:
      d.filter_s = Lorentzian{v * 2.0 * constants::pi * 1e6};
      if (d.waves.degenerate()) d.filter_i = d.filter_s;
      break;
    case SweepAxis::gamma_i_MHz:
      d.filter_i = Lorentzian{v * 2.0 * constants::pi * 1e6};
      if (d.waves.degenerate()) d.filter_s = d.filter_i;
      break;
    case SweepAxis::P_p_mW:
      if (!(v >= 0.0)) throw std::invalid_argument("pump power must be >= 0");
      d.pump_power = v * 1e-3;
      break;
  }
  return d;
}

struct SweepRow {
  std::vector<double> coords;
  std::optional<SourceResult> result;
  std::string error;
};

/// Evaluates the full pipeline on the Cartesian product of one or two axes.
/// Rows are ordered with the last axis varying fastest; failures stay in-row.
inline std::vector<SweepRow> sweep(const Design& base, const std::vector<SweepSpec>& axes,
                                   const PipelineOptions& opt = {}) {
  if (axes.empty() || axes.size() > 2) throw std::invalid_argument("sweep: one or two axes");
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  if (total > 1000000) throw std::invalid_argument("sweep: more than 1e6 grid points");
  PipelineOptions inner = opt;
  inner.threads = 1;
  return parallel_map<SweepRow>(total, opt.threads, [&](std::size_t j) {
    SweepRow row;
    std::size_t rem = j;
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      idx[a] = rem % axes[a].values.size();
      rem /= axes[a].values.size();
    }
    try {
      Design d = base;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        row.coords.push_back(axes[a].values[idx[a]]);
        d = apply_axis(std::move(d), axes[a].axis, axes[a].values[idx[a]]);
      }
      row.result = evaluate_source(d, inner);
    } catch (const std::exception& e) {
      row.error = e.what();
      while (row.coords.size() < axes.size()) row.coords.push_back(axes[row.coords.size()].values[idx[row.coords.size()]]);
    }
    return row;
  });
}

}  // namespace spdc
