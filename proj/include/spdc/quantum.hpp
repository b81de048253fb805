#pragma once

// Absolute pair and singles rates in the narrow-band limit, where the collected
// bandwidths are much smaller than the phase-matching bandwidth. That condition
// is not checked here; SourceReport carries a flag when the caller supplies a
// phase-matching bandwidth estimate.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "spdc/classical.hpp"
#include "spdc/quantities.hpp"

namespace spdc {

namespace detail {
inline void check_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
  }
}
}  // namespace detail

/// W⁽²⁾ in s⁻¹. `q` is Q_SFG for a non-degenerate triple and Q_SHG otherwise:
///   W⁽²⁾ = Γ_eff (ω_i ω_s / 4ω_p²) P_p Q_SFG        (non-degenerate)
///   W⁽²⁾ = Γ_eff P_p Q_SHG / 16                     (degenerate)
inline double pair_rate(const WaveTriple& waves, double pump_power, double q, double gamma_eff) {
  detail::check_non_negative(pump_power, "pair_rate: pump power");
  detail::check_non_negative(q, "pair_rate: efficiency");
  detail::check_non_negative(gamma_eff, "pair_rate: gamma_eff");
  if (waves.degenerate()) return gamma_eff * pump_power * q / 16.0;
  const double wp = waves.pump().angular_frequency();
  const double ratio = waves.idler().angular_frequency() * waves.signal().angular_frequency() / (4.0 * wp * wp);
  return gamma_eff * ratio * pump_power * q;
}

/// Signal singles W⁽¹⁾_s. `q` is Q_DFG^(s) (idler generated) or Q_APG:
///   W⁽¹⁾_s = (ω_s / 4ω_i) Γ_eff,s P_p Q_DFG^(s)      (non-degenerate)
///   W⁽¹⁾_s = Γ_eff,s P_p Q_APG / 4                   (degenerate)
/// Idler singles follow from `waves.swapped()` with Q_DFG^(i) and Γ_eff,i.
inline double singles_rate(const WaveTriple& waves, double pump_power, double q, double gamma_eff_single) {
  detail::check_non_negative(pump_power, "singles_rate: pump power");
  detail::check_non_negative(q, "singles_rate: efficiency");
  detail::check_non_negative(gamma_eff_single, "singles_rate: gamma_eff_s");
  if (waves.degenerate()) return gamma_eff_single * pump_power * q / 4.0;
  return waves.signal().angular_frequency() / (4.0 * waves.idler().angular_frequency()) * gamma_eff_single *
         pump_power * q;
}

/// Heralding efficiency from linewidths and overlaps alone.
///   η_s = (Γ_eff / Γ_eff,s) |I_SFG|² / |I_DFG^(s)|²          (non-degenerate)
///   η_s = (Γ_eff / 4Γ_eff,s) |I_SHG|² / |I_APG|²            (degenerate)
inline double conditional_efficiency(double gamma_eff, double gamma_eff_single, double i_sfg_sq,
                                     double i_dfg_sq, bool degenerate = false) {
  detail::check_non_negative(gamma_eff, "conditional_efficiency: gamma_eff");
  detail::check_non_negative(i_sfg_sq, "conditional_efficiency: |I_SFG|^2");
  if (!(gamma_eff_single > 0.0) || !(i_dfg_sq > 0.0)) {
    throw std::invalid_argument("conditional_efficiency: zero singles denominator");
  }
  const double eta = gamma_eff / gamma_eff_single * i_sfg_sq / i_dfg_sq;
  return degenerate ? eta / 4.0 : eta;
}

struct CorrelationAmplitude {
  double amplitude_sq = 0.0;
  /// (ω_s ω_i / ω_p²) P_p Q; multiply by |f(τ)|² for the coincidence density in s⁻².
  double density_prefactor = 0.0;
};

/// |A|² = ħ² ω_i² ω_s² P_p Q / (4 c² ε₀² n_s n_i ω_p²) and the bundle that turns
/// |f(τ)|² into W⁽²⁾(τ). Degenerate triples take Q_SHG; with ω_s = ω_i = ω_p/2
/// the density then integrates to Γ_eff P_p Q_SHG / 16.
inline CorrelationAmplitude correlation_amplitude_sq(const WaveTriple& waves, double pump_power, double q) {
  detail::check_non_negative(pump_power, "correlation_amplitude_sq: pump power");
  detail::check_non_negative(q, "correlation_amplitude_sq: efficiency");
  const double ws = waves.signal().angular_frequency();
  const double wi = waves.idler().angular_frequency();
  const double wp = waves.pump().angular_frequency();
  CorrelationAmplitude out;
  out.amplitude_sq = constants::hbar * constants::hbar * wi * wi * ws * ws * pump_power * q /
                     (4.0 * constants::c * constants::c * constants::epsilon0 * constants::epsilon0 *
                      waves.signal().refractive_index() * waves.idler().refractive_index() * wp * wp);
  out.density_prefactor = ws * wi / (wp * wp) * pump_power * q;
  return out;
}

struct SourceReport {
  double pump_power = 0.0;
  double gamma_eff = 0.0;
  std::optional<double> gamma_eff_s;
  std::optional<double> gamma_eff_i;
  double pair_rate = 0.0;
  std::optional<double> singles_rate_signal;
  std::optional<double> singles_rate_idler;
  std::optional<double> eta_signal;
  std::optional<double> eta_idler;
  EfficiencyReport efficiencies;
  bool narrowband_warning = false;
};

}  // namespace spdc
