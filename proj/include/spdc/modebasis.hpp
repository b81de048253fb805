#pragma once

// Laguerre–Gauss (l = 0) expansion of the field generated by a time-independent
// source. Projecting the source onto a complete transverse basis of the
// generated wave and summing |c_p|² (Parseval) gives the total generated power
// without building Green functions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "spdc/overlap.hpp"
#include "spdc/quadrature.hpp"
#include "spdc/quantities.hpp"

namespace spdc {

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LGBasisSpec {
  double wavelength = 0.0;
  double index = 1.0;
  double rayleigh_range = 0.0;
  int max_radial_order = 40;

  double wavenumber() const { return 2.0 * constants::pi * index / wavelength; }

  void validate() const {
    if (!(wavelength > 0.0) || !(index >= 1.0) || !(rayleigh_range > 0.0)) {
      throw std::invalid_argument("LGBasisSpec: wavelength, index and Rayleigh range must be physical");
    }
    if (max_radial_order < 1) throw std::invalid_argument("LGBasisSpec: P must be >= 1");
  }
};

/// Basis matched to a wave with the shared Rayleigh range; mode 0 is then that
/// wave's Gaussian collection mode.
inline LGBasisSpec basis_for(const OpticalWave& wave, double rayleigh_range, int max_order = 40) {
  return LGBasisSpec{wave.vacuum_wavelength(), wave.refractive_index(), rayleigh_range, max_order};
}

/// N_p(r, z) = M_0(r, z) · L_p(2r²/w(z)²) · (q*/q)^p, normalized on any plane.
inline cplx lg_mode(const LGBasisSpec& basis, int p, double r, double z) {
  const double k = basis.wavenumber();
  const double zr = basis.rayleigh_range;
  const cplx q(z, -zr);
  const double w2 = 2.0 * std::norm(q) / (k * zr);
  const cplx gouy = std::pow(std::conj(q) / q, p);
  return gaussian_mode(k, zr, r, z) * std::laguerre(static_cast<unsigned>(p), 2.0 * r * r / w2) * gouy;
}

struct ParsevalSum {
  std::vector<double> terms;  // |c_p|², m^-1
  double total = 0.0;
  double tail_estimate = 0.0;  // relative to total
};

struct ParsevalOptions {
  double quad_tol = kDefaultQuadTol;
  double tail_threshold = 1e-4;
};

namespace detail {

/// Geometric extrapolation of the remaining terms. The terms can oscillate
/// from one order to the next, so the decay rate is taken from the envelope:
/// the largest of the last five terms against the largest of the five before.
inline double geometric_tail(const std::vector<double>& terms, double total) {
  if (total <= 0.0) return 0.0;
  const std::size_t n = terms.size();
  if (n < 10) return std::numeric_limits<double>::infinity();
  const double recent = *std::max_element(terms.end() - 5, terms.end());
  const double before = *std::max_element(terms.end() - 10, terms.end() - 5);
  if (recent == 0.0) return 0.0;
  const double ratio = std::pow(recent / before, 0.2);
  if (!(ratio < 1.0)) return std::numeric_limits<double>::infinity();
  return recent * ratio / (1.0 - ratio) / total;
}

/// |c_p|² for a source m·M_a·M_b* projected on a basis at wavenumber k_g.
/// `k_injected_conj` is the wavenumber of the conjugated injected field.
inline ParsevalSum parseval_sum(double k_pump, double k_injected, double k_generated,
                                const FocusParams& fp, const LGBasisSpec& basis,
                                const ParsevalOptions& opt) {
  detail::check_quad_tol(opt.quad_tol);
  const double k_plus = k_pump + k_injected + k_generated;
  const double R_k = (k_pump - k_injected - k_generated) / k_plus;
  const double r_g = 2.0 * k_generated / k_plus;
  const double zr = fp.zeta_R;
  const double kappa = fp.kappa;
  const double amplitude =
      4.0 / k_plus * std::sqrt(constants::pi * k_pump * k_injected * k_generated * fp.rayleigh_range);
  const double scale = zr / (2.0 * constants::pi);

  ParsevalSum out;
  double abs_floor = 0.0;
  int quiet = 0;
  for (int p = 0; p < basis.max_radial_order; ++p) {
    auto integrand = [&](double zeta) {
      const cplx num_gouy(zeta, -zr);
      const cplx den_gouy(zeta, zr);
      const cplx a(zr, -R_k * zeta);
      const cplx a_minus_b(zr * (1.0 - r_g), -R_k * zeta);
      const cplx ratio = (num_gouy / den_gouy) * (a_minus_b / a);
      return std::polar(1.0, kappa * zeta) * std::pow(ratio, p) / (a * den_gouy);
    };
    quad::Options qo;
    qo.rel_tol = opt.quad_tol;
    qo.abs_tol = p == 0 ? 1e-15 / scale : abs_floor;
    const auto left = quad::integrate(integrand, -0.5, 0.0, qo);
    const auto right = quad::integrate(integrand, 0.0, 0.5, qo);
    const cplx integral = left.value + right.value;
    if (p == 0) abs_floor = std::max(1e-15 / scale, opt.quad_tol * 1e-3 * std::abs(integral));
    const double term = std::norm(amplitude * scale * integral);
    out.terms.push_back(term);
    out.total += term;
    // Stop once the series has dropped below double resolution for a while.
    quiet = (term < 1e-17 * out.total) ? quiet + 1 : 0;
    if (quiet >= 5) break;
  }
  out.tail_estimate = geometric_tail(out.terms, out.total);
  if (quiet >= 5) out.tail_estimate = std::min(out.tail_estimate, 1e-16);
  if (!(out.tail_estimate <= opt.tail_threshold)) {
    throw SeriesError("Parseval sum not converged: tail estimate " + std::to_string(out.tail_estimate) +
                      " after " + std::to_string(out.terms.size()) + " radial orders");
  }
  return out;
}

inline void check_basis(const LGBasisSpec& basis, const OpticalWave& generated, const FocusParams& fp) {
  basis.validate();
  if (std::abs(basis.wavenumber() - generated.wavenumber()) > 1e-12 * generated.wavenumber()) {
    throw std::invalid_argument("LG basis must be indexed at the generated wave");
  }
  if (std::abs(basis.rayleigh_range - fp.rayleigh_range) > 1e-12 * fp.rayleigh_range) {
    throw std::invalid_argument("LG basis Rayleigh range must equal the beam Rayleigh range");
  }
}

}  // namespace detail

/// |I_DFG^(s)|²: pump and signal injected, idler generated; the basis is indexed
/// at the idler. Use `waves.swapped()` for the idler-injected process.
inline ParsevalSum i_dfg_sq(const WaveTriple& waves, const CrystalSpec& crystal, const FocusParams& fp,
                            const LGBasisSpec& basis, const ParsevalOptions& opt = {}) {
  if (waves.degenerate()) throw std::invalid_argument("i_dfg_sq: degenerate waves (use i_apg_sq)");
  detail::check_geometry(crystal, fp);
  detail::check_basis(basis, waves.idler(), fp);
  return detail::parseval_sum(waves.pump().wavenumber(), waves.signal().wavenumber(),
                              waves.idler().wavenumber(), fp, basis, opt);
}

/// |I_APG|²: degenerate analogue, generated field is the signal itself.
inline ParsevalSum i_apg_sq(const WaveTriple& waves, const CrystalSpec& crystal, const FocusParams& fp,
                            const LGBasisSpec& basis, const ParsevalOptions& opt = {}) {
  if (!waves.degenerate()) throw std::invalid_argument("i_apg_sq: needs degenerate waves");
  detail::check_geometry(crystal, fp);
  detail::check_basis(basis, waves.signal(), fp);
  return detail::parseval_sum(waves.pump().wavenumber(), waves.signal().wavenumber(),
                              waves.signal().wavenumber(), fp, basis, opt);
}

}  // namespace spdc
