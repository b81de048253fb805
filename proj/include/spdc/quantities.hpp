#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "spdc/units.hpp"

namespace spdc {

/// A monochromatic field in a medium. Angular frequency and wavenumber are
/// derived once from the vacuum wavelength and refractive index.
class OpticalWave {
 public:
  OpticalWave(double vacuum_wavelength, double refractive_index)
      : vacuum_wavelength_(vacuum_wavelength), refractive_index_(refractive_index) {
    if (!(vacuum_wavelength > 0.0) || !std::isfinite(vacuum_wavelength)) {
      throw std::invalid_argument("OpticalWave: vacuum wavelength must be positive");
    }
    if (!(refractive_index >= 1.0) || !std::isfinite(refractive_index)) {
      throw std::invalid_argument("OpticalWave: refractive index must be >= 1");
    }
    angular_frequency_ = 2.0 * constants::pi * constants::c / vacuum_wavelength_;
    wavenumber_ = 2.0 * constants::pi * refractive_index_ / vacuum_wavelength_;
  }

  double vacuum_wavelength() const { return vacuum_wavelength_; }
  double refractive_index() const { return refractive_index_; }
  double angular_frequency() const { return angular_frequency_; }
  double wavenumber() const { return wavenumber_; }

  bool operator==(const OpticalWave&) const = default;

 private:
  double vacuum_wavelength_;
  double refractive_index_;
  double angular_frequency_;
  double wavenumber_;
};

/// Pump, signal and idler with energy conservation enforced.
///
/// A degenerate triple has a single down-converted field; signal and idler are
/// then the same wave. Frequency-degenerate but distinguishable fields (type-II)
/// are *not* degenerate in this sense.
class WaveTriple {
 public:
  static constexpr double kEnergyTolerance = 1e-9;

  WaveTriple(OpticalWave pump, OpticalWave signal, OpticalWave idler, bool degenerate = false)
      : pump_(pump), signal_(signal), idler_(idler), degenerate_(degenerate) {
    const double wp = pump_.angular_frequency();
    const double sum = signal_.angular_frequency() + idler_.angular_frequency();
    if (std::abs(wp - sum) > kEnergyTolerance * wp) {
      throw std::invalid_argument("WaveTriple: energy conservation violated (omega_p != omega_s + omega_i)");
    }
    if (degenerate_ && !(signal_ == idler_)) {
      throw std::invalid_argument("WaveTriple: degenerate triple needs identical signal and idler");
    }
  }

  /// Pump wavelength follows from 1/λp = 1/λs + 1/λi.
  static WaveTriple from_signal_idler(double lambda_s, double n_s, double lambda_i, double n_i,
                                      double n_p) {
    const double lambda_p = 1.0 / (1.0 / lambda_s + 1.0 / lambda_i);
    return WaveTriple(OpticalWave(lambda_p, n_p), OpticalWave(lambda_s, n_s),
                      OpticalWave(lambda_i, n_i), false);
  }

  static WaveTriple make_degenerate(double lambda_s, double n_s, double n_p) {
    const OpticalWave s(lambda_s, n_s);
    return WaveTriple(OpticalWave(lambda_s / 2.0, n_p), s, s, true);
  }

  const OpticalWave& pump() const { return pump_; }
  const OpticalWave& signal() const { return signal_; }
  const OpticalWave& idler() const { return idler_; }
  bool degenerate() const { return degenerate_; }

  /// Same triple with signal and idler exchanged.
  WaveTriple swapped() const { return WaveTriple(pump_, idler_, signal_, degenerate_); }

  double k_plus() const { return pump_.wavenumber() + signal_.wavenumber() + idler_.wavenumber(); }
  double k_minus() const { return pump_.wavenumber() - signal_.wavenumber() - idler_.wavenumber(); }

 private:
  OpticalWave pump_;
  OpticalWave signal_;
  OpticalWave idler_;
  bool degenerate_;
};

class CrystalSpec {
 public:
  /// `poling_period` empty means an unpoled crystal (Q = 0).
  CrystalSpec(double length, std::optional<double> poling_period, double d_eff,
              std::string material_name = {})
      : length_(length),
        poling_period_(poling_period),
        d_eff_(d_eff),
        material_name_(std::move(material_name)) {
    if (!(length > 0.0)) throw std::invalid_argument("CrystalSpec: length must be positive");
    if (!(d_eff > 0.0)) throw std::invalid_argument("CrystalSpec: d_eff must be positive");
    if (poling_period && !(*poling_period > 0.0)) {
      throw std::invalid_argument("CrystalSpec: poling period must be positive");
    }
  }

  double length() const { return length_; }
  const std::optional<double>& poling_period() const { return poling_period_; }
  double d_eff() const { return d_eff_; }
  const std::string& material_name() const { return material_name_; }

  /// Grating wavenumber Q = 2π/Λ, zero when unpoled.
  double grating_wavenumber() const {
    return poling_period_ ? 2.0 * constants::pi / *poling_period_ : 0.0;
  }

  CrystalSpec with_poling_period(std::optional<double> period) const {
    return CrystalSpec(length_, period, d_eff_, material_name_);
  }
  CrystalSpec with_d_eff(double d_eff) const {
    return CrystalSpec(length_, poling_period_, d_eff, material_name_);
  }
  CrystalSpec with_length(double length) const {
    return CrystalSpec(length, poling_period_, d_eff_, material_name_);
  }

 private:
  double length_;
  std::optional<double> poling_period_;
  double d_eff_;
  std::string material_name_;
};

/// Dimensionless focusing geometry: κ = Δk L, ζ_R = z_R / L, R_k = k₋ / k₊.
struct FocusParams {
  double rayleigh_range = 0.0;
  double kappa = 0.0;
  double zeta_R = 0.0;
  double R_k = 0.0;

  static FocusParams make(double rayleigh_range, double kappa, double zeta_R, double R_k) {
    if (!(zeta_R > 0.0) || !std::isfinite(zeta_R)) {
      throw std::invalid_argument("FocusParams: zeta_R must be positive");
    }
    if (!(std::abs(R_k) < 1.0)) throw std::invalid_argument("FocusParams: |R_k| must be < 1");
    if (!std::isfinite(kappa)) throw std::invalid_argument("FocusParams: kappa must be finite");
    return FocusParams{rayleigh_range, kappa, zeta_R, R_k};
  }

  /// Purely dimensionless parameters (no physical Rayleigh range attached).
  static FocusParams dimensionless(double kappa, double zeta_R, double R_k) {
    return make(0.0, kappa, zeta_R, R_k);
  }
};

/// Phase mismatch Δk = k_p − k_s − k_i − Q.
inline double phase_mismatch(const WaveTriple& waves, const CrystalSpec& crystal) {
  return waves.k_minus() - crystal.grating_wavenumber();
}

inline FocusParams derive_focus_params(const WaveTriple& waves, const CrystalSpec& crystal,
                                       double rayleigh_range) {
  if (!(rayleigh_range > 0.0)) {
    throw std::invalid_argument("derive_focus_params: Rayleigh range must be positive");
  }
  const double L = crystal.length();
  return FocusParams::make(rayleigh_range, phase_mismatch(waves, crystal) * L, rayleigh_range / L,
                           waves.k_minus() / waves.k_plus());
}

/// Poling period that puts the mismatch at κ = target_kappa.
inline double solve_poling_period(const WaveTriple& waves, double length, double target_kappa = 0.0) {
  const double Q = waves.k_minus() - target_kappa / length;
  if (!(Q > 0.0)) {
    throw std::invalid_argument(
        "solve_poling_period: no positive grating wavenumber reaches the requested kappa");
  }
  return 2.0 * constants::pi / Q;
}

}  // namespace spdc
