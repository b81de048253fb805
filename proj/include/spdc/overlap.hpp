#pragma once

// Gaussian-beam overlap integrals for collinear three-wave mixing.
//
// Mode functions (normalized on a transverse plane):
//   M_m(r, z) = sqrt(k_m z_R / π) · (1/q) · exp(i k_m z) · exp(i k_m r² / 2q),   q = z − i z_R
// with one Rayleigh range shared by pump, signal and idler, and the
// nonlinearity approximated by its phase-matched harmonic m(z) = exp(iQz).

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "spdc/quadrature.hpp"
#include "spdc/quantities.hpp"

namespace spdc {

using cplx = std::complex<double>;

struct UpsilonResult {
  cplx value;
  double abs_sq = 0.0;
  double est_error = 0.0;
};

enum class OverlapMethod { reduced_1d, direct_3d };

struct OverlapResult {
  cplx value;  // m^(-1/2)
  OverlapMethod method = OverlapMethod::reduced_1d;
  double est_error = 0.0;

  double abs_sq() const { return std::norm(value); }
};

inline constexpr double kDefaultQuadTol = 1e-9;

namespace detail {
inline void check_quad_tol(double tol) {
  if (!(tol > 1e-14 && tol < 1e-3)) {
    throw std::invalid_argument("quad_tol must lie in (1e-14, 1e-3)");
  }
}
}  // namespace detail

/// Focusing integral
///
///   Υ(κ, ζ_R, R_k) = (ζ_R / 2π) ∫_{-1/2}^{1/2} dζ e^{-iκζ} / [(ζ − iζ_R)(iζ_R − R_k ζ)].
///
/// The factor (iζ_R − R_k ζ) is what remains of the transverse Gaussian
/// integral of M_p* M_i M_s; for R_k = 0, Υ is Boyd and Kleinman's H.
/// Υ is real for every argument (conjugation and ζ → −ζ leave the integral
/// unchanged); the complex type is kept for the overlap prefactors.
inline UpsilonResult upsilon(const FocusParams& fp, double quad_tol = kDefaultQuadTol) {
  detail::check_quad_tol(quad_tol);
  const double zr = fp.zeta_R;
  const cplx izr(0.0, zr);
  auto integrand = [&](double zeta) {
    const cplx phase = std::polar(1.0, -fp.kappa * zeta);
    return phase / ((zeta - izr) * (izr - fp.R_k * zeta));
  };
  const double scale = zr / (2.0 * constants::pi);
  quad::Options opt;
  opt.rel_tol = quad_tol;
  opt.abs_tol = 1e-15 / scale;
  // Split at the peak of the integrand so narrow foci are resolved early.
  auto left = quad::integrate(integrand, -0.5, 0.0, opt);
  auto right = quad::integrate(integrand, 0.0, 0.5, opt);
  UpsilonResult out;
  out.value = scale * (left.value + right.value);
  out.abs_sq = std::norm(out.value);
  out.est_error = scale * (left.error + right.error);
  return out;
}

/// ζ_R·|Υ|², the focusing figure of merit.
inline double focusing_objective(double kappa, double zeta_R, double R_k,
                                 double quad_tol = kDefaultQuadTol) {
  return zeta_R * upsilon(FocusParams::dimensionless(kappa, zeta_R, R_k), quad_tol).abs_sq;
}

namespace detail {
inline void check_geometry(const CrystalSpec& crystal, const FocusParams& fp) {
  if (!(fp.rayleigh_range > 0.0)) {
    throw std::invalid_argument("overlap: FocusParams carries no physical Rayleigh range");
  }
  const double implied = fp.zeta_R * crystal.length();
  if (std::abs(implied - fp.rayleigh_range) > 1e-9 * fp.rayleigh_range) {
    throw std::invalid_argument("overlap: zeta_R * L does not match the Rayleigh range");
  }
}
}  // namespace detail

/// Reduced form of I = ∫ d³x M_p* m M_i M_s for equal Rayleigh ranges:
///   I = (4i / k₊) · sqrt(π k_p k_s k_i z_R) · Υ(κ, ζ_R, R_k).
/// For a degenerate triple this is I_SHG.
inline OverlapResult i_sfg_gaussian(const WaveTriple& waves, const CrystalSpec& crystal,
                                    const FocusParams& fp, double quad_tol = kDefaultQuadTol) {
  detail::check_geometry(crystal, fp);
  const auto ups = upsilon(fp, quad_tol);
  const double kp = waves.pump().wavenumber();
  const double ks = waves.signal().wavenumber();
  const double ki = waves.idler().wavenumber();
  const double amplitude = 4.0 / waves.k_plus() * std::sqrt(constants::pi * kp * ks * ki * fp.rayleigh_range);
  OverlapResult out;
  out.value = cplx(0.0, amplitude) * ups.value;
  out.method = OverlapMethod::reduced_1d;
  out.est_error = amplitude * ups.est_error;
  return out;
}

/// Normalized Gaussian mode with full carrier phase.
inline cplx gaussian_mode(double k, double rayleigh_range, double r, double z) {
  const cplx q(z, -rayleigh_range);
  return std::sqrt(k * rayleigh_range / constants::pi) / q * std::polar(1.0, k * z) *
         std::exp(cplx(0.0, k * r * r / 2.0) / q);
}

struct Direct3DOptions {
  double rel_tol = 1e-8;
  unsigned max_depth = 25;
  /// Radial cutoff in units of the widest local 1/e field radius.
  double radial_extent = 7.0;
};

/// Brute-force evaluation of ∫ d³x M_p* e^{iQz} M_i M_s by nested adaptive
/// quadrature (numerical radial and longitudinal integrals). Independent of the
/// reduced path: no analytic transverse integral and a separate quadrature
/// routine (Boost Gauss–Kronrod).
inline OverlapResult i_sfg_direct3d(const WaveTriple& waves, const CrystalSpec& crystal,
                                    const FocusParams& fp, const Direct3DOptions& grid = {}) {
  detail::check_geometry(crystal, fp);
  using boost::math::quadrature::gauss_kronrod;
  const double kp = waves.pump().wavenumber();
  const double ks = waves.signal().wavenumber();
  const double ki = waves.idler().wavenumber();
  const double zr = fp.rayleigh_range;
  const double L = crystal.length();
  const double Q = crystal.grating_wavenumber();
  const double k_min = std::min({kp, ks, ki});

  // Carrier phases are collected into one net factor so the radial integrand
  // stays free of large cancelling arguments.
  auto envelope = [](double k, double z_r, double r, double z) {
    const cplx q(z, -z_r);
    return std::sqrt(k * z_r / constants::pi) / q * std::exp(cplx(0.0, k * r * r / 2.0) / q);
  };
  auto slice = [&](double z) -> cplx {
    const double w2 = 2.0 * (z * z + zr * zr) / (k_min * zr);
    const double r_max = grid.radial_extent * std::sqrt(w2);
    auto radial = [&](double r) -> cplx {
      return 2.0 * constants::pi * r * std::conj(envelope(kp, zr, r, z)) * envelope(ki, zr, r, z) *
             envelope(ks, zr, r, z);
    };
    const cplx transverse =
        gauss_kronrod<double, 31>::integrate(radial, 0.0, r_max, 15, grid.rel_tol * 0.1);
    return transverse * std::polar(1.0, (ks + ki - kp + Q) * z);
  };
  double err = 0.0;
  const cplx left = gauss_kronrod<double, 31>::integrate(slice, -L / 2, 0.0, grid.max_depth, grid.rel_tol, &err);
  double err2 = 0.0;
  const cplx right = gauss_kronrod<double, 31>::integrate(slice, 0.0, L / 2, grid.max_depth, grid.rel_tol, &err2);
  OverlapResult out;
  out.value = left + right;
  out.method = OverlapMethod::direct_3d;
  out.est_error = err + err2;
  return out;
}

struct ThinCrystalWaists {
  double pump = 0.0;
  double signal = 0.0;
  double idler = 0.0;
};

/// Waists of the shared-Rayleigh-range modes: W_m² = 2 z_R / k_m.
inline ThinCrystalWaists waists_for_rayleigh_range(const WaveTriple& waves, double rayleigh_range) {
  auto w = [&](const OpticalWave& wave) { return std::sqrt(2.0 * rayleigh_range / wave.wavenumber()); };
  return {w(waves.pump()), w(waves.signal()), w(waves.idler())};
}

/// Normalization of a thin-crystal envelope exp(−r²/W²): α = sqrt(2 / πW²).
inline double thin_crystal_alpha(double waist) {
  return std::sqrt(2.0 / (constants::pi * waist * waist));
}

/// Thin-crystal overlap Φ(Δk) = ∫dz ∫dx dy e^{iΔk z} U_p U_s U_i with collimated
/// envelopes U_m = exp(−r²/W_m²) over a crystal of length L centred on z = 0.
inline cplx phi_thin_crystal(const CrystalSpec& crystal, const ThinCrystalWaists& w, double delta_k) {
  if (!(w.pump > 0.0 && w.signal > 0.0 && w.idler > 0.0)) {
    throw std::invalid_argument("phi_thin_crystal: waists must be positive");
  }
  const double L = crystal.length();
  const double u = delta_k * L / 2.0;
  const double sinc = (u == 0.0) ? 1.0 : std::sin(u) / u;
  const double transverse =
      constants::pi / (1.0 / (w.pump * w.pump) + 1.0 / (w.signal * w.signal) + 1.0 / (w.idler * w.idler));
  return cplx(L * sinc * transverse, 0.0);
}

}  // namespace spdc
