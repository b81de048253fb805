#pragma once

// One function per CLI subcommand. Each returns a Table so the same code path
// serves the executable and the tests.

#include <string>
#include <vector>

#include "spdc/config.hpp"
#include "spdc/pipeline.hpp"
#include "spdc/report.hpp"
#include "spdc/validation.hpp"

namespace spdc {

struct CommandOptions {
  PipelineOptions pipeline;
  std::string config_path;
  std::vector<std::string> sweep_specs;
  std::size_t correlation_points = 401;
  FocusBounds bounds;
  bool trace = false;
};

namespace detail {

inline void design_meta(Table& t, const Design& d, const std::string& command, const CommandOptions& o) {
  t.meta.emplace_back("command", command);
  if (!o.config_path.empty()) t.meta.emplace_back("config", o.config_path);
  t.meta.emplace_back("material", d.crystal.material_name());
  t.meta.emplace_back("lambda_s_m", format_number(d.waves.signal().vacuum_wavelength()));
  t.meta.emplace_back("lambda_i_m", format_number(d.waves.idler().vacuum_wavelength()));
  t.meta.emplace_back("lambda_p_m", format_number(d.waves.pump().vacuum_wavelength()));
  t.meta.emplace_back("degenerate", d.waves.degenerate() ? "true" : "false");
  t.meta.emplace_back("length_m", format_number(d.crystal.length()));
  t.meta.emplace_back("poling_period_m",
                      d.crystal.poling_period() ? format_number(*d.crystal.poling_period()) : std::string("none"));
  t.meta.emplace_back("quad_tol", format_number(o.pipeline.quad_tol));
}

inline void geometry_columns(Table& t) {
  for (const char* c : {"kappa", "zeta_R", "R_k", "z_R_m"}) t.columns.emplace_back(c);
}

inline void geometry_cells(std::vector<Cell>& row, const FocusParams& fp) {
  row.insert(row.end(), {fp.kappa, fp.zeta_R, fp.R_k, fp.rayleigh_range});
}

}  // namespace detail

inline Table cmd_sfg(const Design& d, const CommandOptions& o) {
  const auto r = evaluate_sfg(d, o.pipeline);
  Table t;
  detail::design_meta(t, d, "sfg", o);
  detail::geometry_columns(t);
  for (const char* c : {"upsilon_re", "upsilon_im", "abs_upsilon_sq", "focusing_objective", "I_sfg_re", "I_sfg_im",
                        "abs_I_sfg_sq_per_m", "Q_sfg_per_W", "Q_shg_per_W"}) {
    t.columns.emplace_back(c);
  }
  std::vector<Cell> row;
  detail::geometry_cells(row, d.focus);
  const double u2 = std::norm(r.upsilon);
  row.insert(row.end(), {r.upsilon.real(), r.upsilon.imag(), u2, d.focus.zeta_R * u2, r.i_sfg.real(), r.i_sfg.imag(),
                         r.report.efficiencies.i_sfg_sq, opt_cell(r.report.efficiencies.q_sfg),
                         opt_cell(r.report.efficiencies.q_shg)});
  t.add_row(std::move(row));
  return t;
}

inline Table cmd_pairs(const Design& d, const CommandOptions& o) {
  auto r = evaluate_sfg(d, o.pipeline);
  auto& rep = r.report;
  rep.gamma_eff = gamma_eff_pair(d.filter_s, d.filter_i);
  const auto& eff = rep.efficiencies;
  rep.pair_rate = pair_rate(d.waves, d.pump_power, d.waves.degenerate() ? *eff.q_shg : *eff.q_sfg, rep.gamma_eff);
  if (d.pm_bandwidth) rep.narrowband_warning = rep.gamma_eff > *d.pm_bandwidth;
  Table t;
  detail::design_meta(t, d, "pairs", o);
  detail::geometry_columns(t);
  for (const char* c : {"Q_sfg_per_W", "Q_shg_per_W", "pump_power_W", "gamma_eff_rad_per_s", "gamma_eff_MHz",
                        "pair_rate_per_s", "pairs_per_s_mW_MHz", "narrowband_warning"}) {
    t.columns.emplace_back(c);
  }
  std::vector<Cell> row;
  detail::geometry_cells(row, d.focus);
  row.insert(row.end(), {opt_cell(eff.q_sfg), opt_cell(eff.q_shg), d.pump_power, rep.gamma_eff,
                         rep.gamma_eff / (2.0 * constants::pi * 1e6), rep.pair_rate, brightness_per_mw_mhz(rep),
                         rep.narrowband_warning});
  t.add_row(std::move(row));
  return t;
}

inline const std::vector<std::string>& source_columns() {
  static const std::vector<std::string> cols{
      "kappa",         "zeta_R",         "R_k",           "z_R_m",           "pump_power_W",
      "Q_sfg_per_W",   "Q_shg_per_W",    "Q_dfg_s_per_W", "Q_dfg_i_per_W",   "Q_apg_per_W",
      "abs_I_sfg_sq",  "abs_I_dfg_s_sq", "abs_I_dfg_i_sq", "gamma_eff_rad_per_s", "gamma_eff_s_rad_per_s",
      "gamma_eff_i_rad_per_s", "pair_rate_per_s", "singles_s_per_s", "singles_i_per_s", "eta_s",
      "eta_i",         "narrowband_warning"};
  return cols;
}

inline std::vector<Cell> source_cells(const SourceResult& r) {
  const auto& rep = r.report;
  const auto& e = rep.efficiencies;
  const bool deg = r.design.waves.degenerate();
  std::vector<Cell> row;
  detail::geometry_cells(row, r.design.focus);
  row.insert(row.end(),
             {rep.pump_power, opt_cell(e.q_sfg), opt_cell(e.q_shg), opt_cell(e.q_dfg_s), opt_cell(e.q_dfg_i),
              opt_cell(e.q_apg), e.i_sfg_sq, r.dfg_s ? Cell{e.i_dfg_s_sq} : Cell{},
              (deg ? r.dfg_s.has_value() : r.dfg_i.has_value()) ? Cell{e.i_dfg_i_sq} : Cell{}, rep.gamma_eff,
              opt_cell(rep.gamma_eff_s), opt_cell(rep.gamma_eff_i), rep.pair_rate, opt_cell(rep.singles_rate_signal),
              opt_cell(rep.singles_rate_idler), opt_cell(rep.eta_signal), opt_cell(rep.eta_idler),
              rep.narrowband_warning});
  return row;
}

inline Table cmd_singles(const Design& d, const CommandOptions& o) {
  const auto r = evaluate_source(d, o.pipeline);
  Table t;
  detail::design_meta(t, d, "singles", o);
  t.meta.emplace_back("basis_order", std::to_string(o.pipeline.basis_order));
  if (r.dfg_s) t.meta.emplace_back("tail_estimate_s", format_number(r.dfg_s->tail_estimate));
  if (r.dfg_i) t.meta.emplace_back("tail_estimate_i", format_number(r.dfg_i->tail_estimate));
  t.columns = source_columns();
  t.add_row(source_cells(r));
  return t;
}

inline Table cmd_correlation(const Design& d, const CommandOptions& o) {
  const auto sfg = evaluate_sfg(d, o.pipeline);
  const auto& eff = sfg.report.efficiencies;
  const double q = d.waves.degenerate() ? *eff.q_shg : *eff.q_sfg;
  const auto amp = correlation_amplitude_sq(d.waves, d.pump_power, q);
  const auto grid = default_delay_grid(d.filter_s, d.filter_i, o.correlation_points);
  const auto trace = correlation_shape(d.filter_s, d.filter_i, grid, amp.density_prefactor);
  Table t;
  detail::design_meta(t, d, "correlation", o);
  t.meta.emplace_back("gamma_eff_rad_per_s", format_number(trace.gamma_eff));
  t.meta.emplace_back("abs_A_sq", format_number(amp.amplitude_sq));
  t.meta.emplace_back("density_prefactor", format_number(amp.density_prefactor));
  t.meta.emplace_back("tau_convention", "tau = t_s - t_i");
  t.columns = {"tau_s", "f_re_per_s", "f_im_per_s", "abs_f_sq_per_s2", "W2_density_per_s2"};
  for (std::size_t j = 0; j < trace.tau.size(); ++j) {
    t.add_row({trace.tau[j], trace.f[j].real(), trace.f[j].imag(), std::norm(trace.f[j]),
               trace.w2_density.empty() ? Cell{0.0} : Cell{trace.w2_density[j]}});
  }
  return t;
}

inline Table cmd_optimize(const Design& d, const CommandOptions& o) {
  OptimizerOptions oo;
  oo.threads = o.pipeline.threads;
  oo.quad_tol = std::min(o.pipeline.quad_tol, 1e-10);
  const auto res = optimize_focus(d.focus.R_k, o.bounds, oo);
  Table t;
  detail::design_meta(t, d, "optimize", o);
  t.meta.emplace_back("R_k", format_number(d.focus.R_k));
  t.meta.emplace_back("kappa_bounds", format_number(o.bounds.kappa_min) + ":" + format_number(o.bounds.kappa_max));
  t.meta.emplace_back("zeta_R_bounds", format_number(o.bounds.zeta_min) + ":" + format_number(o.bounds.zeta_max));
  if (o.trace) {
    t.columns = {"kappa", "zeta_R", "objective"};
    for (const auto& p : res.trace) t.add_row({p.kappa, p.zeta_R, p.objective});
    return t;
  }
  const double kp = d.waves.k_minus() - res.best_kappa / d.crystal.length();
  t.columns = {"best_kappa", "best_zeta_R", "best_objective", "z_R_m", "poling_period_m", "evaluations", "converged"};
  t.add_row({res.best_kappa, res.best_zeta_R, res.best_objective, res.best_zeta_R * d.crystal.length(),
             kp > 0.0 ? Cell{2.0 * constants::pi / kp} : Cell{}, static_cast<long long>(res.evaluations),
             res.converged});
  return t;
}

inline Table cmd_sweep(const Design& d, const CommandOptions& o) {
  if (o.sweep_specs.empty()) throw std::invalid_argument("sweep: give at least one --sweep axis");
  std::vector<SweepSpec> axes;
  for (const auto& s : o.sweep_specs) axes.push_back(parse_sweep_spec(s));
  const auto rows = sweep(d, axes, o.pipeline);
  Table t;
  detail::design_meta(t, d, "sweep", o);
  for (const auto& a : axes) t.columns.push_back(std::string("axis_") + axis_name(a.axis));
  const auto& sc = source_columns();
  t.columns.insert(t.columns.end(), sc.begin(), sc.end());
  t.columns.emplace_back("error");
  for (const auto& r : rows) {
    std::vector<Cell> row(r.coords.begin(), r.coords.end());
    if (r.result) {
      auto cells = source_cells(*r.result);
      row.insert(row.end(), cells.begin(), cells.end());
      row.emplace_back(std::string());
    } else {
      row.resize(row.size() + sc.size());
      row.emplace_back(r.error);
    }
    t.add_row(std::move(row));
  }
  return t;
}

inline Table cmd_validate(const CommandOptions& o) {
  const auto reports = run_validation(o.pipeline.threads);
  Table t;
  t.meta.emplace_back("command", "validate");
  t.columns = {"quantity", "main_value", "oracle_value", "relative_diff", "tolerance", "pass"};
  for (const auto& r : reports) t.add_row({r.quantity, r.main_value, r.oracle_value, r.relative_diff, r.tolerance, r.pass});
  return t;
}

}  // namespace spdc
