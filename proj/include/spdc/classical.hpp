#pragma once

// Classical three-wave-mixing conversion efficiencies. Each takes the squared
// overlap magnitude (m^-1) computed elsewhere, so expensive quadrature can be
// cached across sweeps.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "spdc/quantities.hpp"

namespace spdc {

namespace detail {

inline void check_overlap_sq(double overlap_sq, const char* who) {
  if (!(overlap_sq >= 0.0) || !std::isfinite(overlap_sq)) {
    throw std::invalid_argument(std::string(who) + ": squared overlap must be finite and >= 0");
  }
}

inline double c3_eps0() { return constants::c * constants::c * constants::c * constants::epsilon0; }

}  // namespace detail

/// Q_SFG = P_p / (P_s P_i) = 2 ω_p² d² |I_SFG|² / (c³ ε₀ n_p n_s n_i), in W⁻¹.
inline double q_sfg(const WaveTriple& waves, const CrystalSpec& crystal, double i_sfg_sq) {
  if (waves.degenerate()) throw std::invalid_argument("q_sfg: degenerate waves (use q_shg)");
  detail::check_overlap_sq(i_sfg_sq, "q_sfg");
  const double wp = waves.pump().angular_frequency();
  const double d = crystal.d_eff();
  return 2.0 * wp * wp * d * d * i_sfg_sq /
         (detail::c3_eps0() * waves.pump().refractive_index() * waves.signal().refractive_index() *
          waves.idler().refractive_index());
}

/// Q_SHG = P_p / P_s² = ω_p² d² |I_SHG|² / (2 c³ ε₀ n_p n_s²).
inline double q_shg(const WaveTriple& waves, const CrystalSpec& crystal, double i_shg_sq) {
  if (!waves.degenerate()) throw std::invalid_argument("q_shg: needs degenerate waves");
  detail::check_overlap_sq(i_shg_sq, "q_shg");
  const double wp = waves.pump().angular_frequency();
  const double ns = waves.signal().refractive_index();
  const double d = crystal.d_eff();
  return wp * wp * d * d * i_shg_sq / (2.0 * detail::c3_eps0() * waves.pump().refractive_index() * ns * ns);
}

/// Q_DFG^(s) = P_i / (P_p P_s) = 2 ω_i² d² |I_DFG|² / (c³ ε₀ n_s n_i n_p).
/// The generated wave is the triple's idler; pass `waves.swapped()` for Q_DFG^(i).
inline double q_dfg(const WaveTriple& waves, const CrystalSpec& crystal, double i_dfg_sq) {
  if (waves.degenerate()) throw std::invalid_argument("q_dfg: degenerate waves (use q_apg)");
  detail::check_overlap_sq(i_dfg_sq, "q_dfg");
  const double wi = waves.idler().angular_frequency();
  const double d = crystal.d_eff();
  return 2.0 * wi * wi * d * d * i_dfg_sq /
         (detail::c3_eps0() * waves.pump().refractive_index() * waves.signal().refractive_index() *
          waves.idler().refractive_index());
}

/// Q_APG = 2 ω_s² d² |I_APG|² / (c³ n_s² n_p ε₀).
inline double q_apg(const WaveTriple& waves, const CrystalSpec& crystal, double i_apg_sq) {
  if (!waves.degenerate()) throw std::invalid_argument("q_apg: needs degenerate waves");
  detail::check_overlap_sq(i_apg_sq, "q_apg");
  const double ws = waves.signal().angular_frequency();
  const double ns = waves.signal().refractive_index();
  const double d = crystal.d_eff();
  return 2.0 * ws * ws * d * d * i_apg_sq / (detail::c3_eps0() * ns * ns * waves.pump().refractive_index());
}

/// Second-harmonic power from the focusing-function form
///   P₂ = 4π k_s ω_s² z_R d² |Υ|² P_s² / (c³ ε₀ n_s² n_p),
/// written directly in terms of Υ rather than the overlap integral.
inline double shg_power_focusing_form(const WaveTriple& waves, const CrystalSpec& crystal,
                                      double rayleigh_range, double upsilon_abs_sq, double signal_power) {
  const double ks = waves.signal().wavenumber();
  const double ws = waves.signal().angular_frequency();
  const double ns = waves.signal().refractive_index();
  const double d = crystal.d_eff();
  return 4.0 * constants::pi * ks * ws * ws * rayleigh_range * d * d * upsilon_abs_sq * signal_power *
         signal_power / (detail::c3_eps0() * ns * ns * waves.pump().refractive_index());
}

struct EfficiencyReport {
  std::optional<double> q_sfg;
  std::optional<double> q_shg;
  std::optional<double> q_dfg_s;
  std::optional<double> q_dfg_i;
  std::optional<double> q_apg;
  double i_sfg_sq = 0.0;
  double i_dfg_s_sq = 0.0;
  double i_dfg_i_sq = 0.0;
};

}  // namespace spdc
