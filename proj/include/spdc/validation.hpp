#pragma once

// Independent oracles for the main computational paths. None of them calls the
// code it checks: integrals go through Boost.Math quadrature or fixed
// Gauss–Legendre grids, never through spdc::quad.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "spdc/classical.hpp"
#include "spdc/filters.hpp"
#include "spdc/modebasis.hpp"
#include "spdc/optimizer.hpp"
#include "spdc/overlap.hpp"
#include "spdc/quantities.hpp"
#include "spdc/quantum.hpp"

namespace spdc {

struct OracleReport {
  std::string quantity;
  double main_value = 0.0;
  double oracle_value = 0.0;
  double relative_diff = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline OracleReport make_report(std::string name, double main_value, double oracle_value, double tolerance) {
  OracleReport r;
  r.quantity = std::move(name);
  r.main_value = main_value;
  r.oracle_value = oracle_value;
  const double scale = std::max(std::abs(oracle_value), std::abs(main_value));
  r.relative_diff = scale == 0.0 ? 0.0 : std::abs(main_value - oracle_value) / scale;
  r.tolerance = tolerance;
  r.pass = r.relative_diff <= tolerance;
  return r;
}

/// Υ(0, ζ_R, 0) = (1/2πi) log[(1/2 − iζ_R)/(−1/2 − iζ_R)], principal branch.
inline cplx oracle_upsilon_closed_form(double zeta_R) {
  const cplx num(0.5, -zeta_R);
  const cplx den(-0.5, -zeta_R);
  return std::log(num / den) / cplx(0.0, 2.0 * constants::pi);
}

// ----------------------------------------------------------------------------
// Angular-spectrum (Fresnel) oracle for |I_DFG|².
//
// Every transverse slice of the source S = e^{−iQz} M_p M_s* radiates into
// paraxial plane waves e^{ik⊥·x + i(k_g − k⊥²/2k_g)z}. Summing the slices
// coherently in k⊥ and integrating the output-plane intensity gives
//   |I_DFG|² = 2π ∫ k dk |H(k)|²,
//   H(k) = ∫ dz e^{−i(k_g − k²/2k_g)z} ∫ r dr J0(kr) S(r, z).

struct FresnelGrid {
  int z_panels = 0;  // 0 picks a count from the phase budget
  int r_panels = 12;
  int k_panels = 12;
  double radial_extent = 7.0;   // in 1/e source radii at the crystal face
  double spectral_extent = 12.0;  // in inverse 1/e source radii at the waist
};

struct FresnelResult {
  double value = 0.0;
  double refined = 0.0;  // same computation at doubled resolution
  double resolution_change = 0.0;
};

namespace detail {

struct Nodes {
  std::vector<double> x, w;
};

/// Composite 20-point Gauss–Legendre nodes on [a, b].
inline Nodes composite_gauss(double a, double b, int panels) {
  using G = boost::math::quadrature::gauss<double, 20>;
  const auto& ab = G::abscissa();
  const auto& wt = G::weights();
  Nodes n;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (std::size_t j = 0; j < ab.size(); ++j) {
      if (ab[j] == 0.0) {
        n.x.push_back(c);
        n.w.push_back(wt[j] * h / 2);
        continue;
      }
      n.x.push_back(c - ab[j] * h / 2);
      n.w.push_back(wt[j] * h / 2);
      n.x.push_back(c + ab[j] * h / 2);
      n.w.push_back(wt[j] * h / 2);
    }
  }
  return n;
}

inline double fresnel_once(double kp, double ks, double kg, double zr, double L, double delta_k,
                           const FresnelGrid& g, int refine) {
  const double k_src = kp + ks;
  auto r_e = [&](double z) { return std::sqrt(2.0 * (z * z + zr * zr) / (zr * k_src)); };
  const double r_max = g.radial_extent * r_e(L / 2);
  const double k_max = g.spectral_extent / r_e(0.0);
  int zp = g.z_panels;
  if (zp <= 0) {
    const double phase = std::abs(delta_k) * L + k_max * k_max * L / (2.0 * kg);
    zp = std::max(16, static_cast<int>(std::ceil(phase / (2.0 * constants::pi))));
  }
  const auto zn = composite_gauss(-L / 2, L / 2, zp * refine);
  const auto rn = composite_gauss(0.0, r_max, g.r_panels * refine);
  const auto kn = composite_gauss(0.0, k_max, g.k_panels * refine);

  std::vector<double> j0(kn.x.size() * rn.x.size());
  for (std::size_t a = 0; a < kn.x.size(); ++a) {
    for (std::size_t b = 0; b < rn.x.size(); ++b) j0[a * rn.x.size() + b] = std::cyl_bessel_j(0.0, kn.x[a] * rn.x[b]);
  }

  std::vector<cplx> H(kn.x.size(), 0.0);
  std::vector<cplx> slice(rn.x.size());
  const double norm = std::sqrt(kp * zr / constants::pi) * std::sqrt(ks * zr / constants::pi);
  for (std::size_t c = 0; c < zn.x.size(); ++c) {
    const double z = zn.x[c];
    const cplx q(z, -zr);
    // Envelopes of M_p M_s*, carrier phases folded into e^{iΔk z}.
    for (std::size_t b = 0; b < rn.x.size(); ++b) {
      const double r2 = rn.x[b] * rn.x[b];
      const cplx mp = std::exp(cplx(0.0, kp * r2 / 2.0) / q) / q;
      const cplx ms = std::conj(std::exp(cplx(0.0, ks * r2 / 2.0) / q) / q);
      slice[b] = norm * mp * ms * rn.x[b] * rn.w[b];
    }
    for (std::size_t a = 0; a < kn.x.size(); ++a) {
      cplx s = 0.0;
      const double* row = &j0[a * rn.x.size()];
      for (std::size_t b = 0; b < rn.x.size(); ++b) s += row[b] * slice[b];
      const double k = kn.x[a];
      H[a] += zn.w[c] * std::polar(1.0, (delta_k + k * k / (2.0 * kg)) * z) * s;
    }
  }
  double total = 0.0;
  for (std::size_t a = 0; a < kn.x.size(); ++a) total += kn.w[a] * kn.x[a] * std::norm(H[a]);
  return 2.0 * constants::pi * total;
}

}  // namespace detail

/// |I_DFG|² with the idler generated (or the signal itself for a degenerate
/// triple), evaluated at two resolutions.
inline FresnelResult oracle_dfg_fresnel(const WaveTriple& waves, const CrystalSpec& crystal, const FocusParams& fp,
                                        const FresnelGrid& grid = {}) {
  const double kp = waves.pump().wavenumber();
  const double ks = waves.signal().wavenumber();
  const double kg = waves.degenerate() ? ks : waves.idler().wavenumber();
  const double L = crystal.length();
  const double delta_k = fp.kappa / L;
  FresnelResult out;
  out.value = detail::fresnel_once(kp, ks, kg, fp.rayleigh_range, L, delta_k, grid, 1);
  out.refined = detail::fresnel_once(kp, ks, kg, fp.rayleigh_range, L, delta_k, grid, 2);
  out.resolution_change = std::abs(out.refined - out.value) / std::abs(out.refined);
  return out;
}

// ----------------------------------------------------------------------------
// Thin-crystal comparison against the collimated-beam spectral rate
//   dR/dω_s = (d_eff α_s α_i E_p Φ(Δk) / c)² ω_s ω_i / (2π n_s n_i),
//   R = ∫ dΩ (dR/dω_s) T_s(Ω) T_i(−Ω),
// with the pump amplitude from P_p = ½ n_p c ε₀ |E_p|² ∫|U_p|² dA.

inline double filter_overlap_integral(const FilterSpec& s, const FilterSpec& i) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double w) { return transmission(s, w) * transmission(i, -w); };
  if (std::holds_alternative<Tabulated>(s) || std::holds_alternative<Tabulated>(i)) {
    // Compact support: fixed Gauss–Legendre on the overlap of the supports.
    double lo = -1e300, hi = 1e300;
    if (const auto* t = std::get_if<Tabulated>(&s)) lo = std::max(lo, t->omega.front()), hi = std::min(hi, t->omega.back());
    if (const auto* t = std::get_if<Tabulated>(&i)) lo = std::max(lo, -t->omega.back()), hi = std::min(hi, -t->omega.front());
    if (!(hi > lo)) return 0.0;
    std::vector<double> knots{lo, hi};
    for (const FilterSpec* fs : {&s, &i}) {
      if (const auto* t = std::get_if<Tabulated>(fs)) {
        for (double w : t->omega) {
          const double x = fs == &s ? w : -w;
          if (x > lo && x < hi) knots.push_back(x);
        }
      }
    }
    std::sort(knots.begin(), knots.end());
    double total = 0.0;
    for (std::size_t j = 1; j < knots.size(); ++j) {
      total += boost::math::quadrature::gauss<double, 7>::integrate(f, knots[j - 1], knots[j]);
    }
    return total;
  }
  return integrator.integrate([&](double w) { return f(w) + f(-w); }, 0.0, std::numeric_limits<double>::infinity());
}

struct LingComparison {
  OracleReport report;
  double ling_rate = 0.0;
  double pair_rate = 0.0;
};

inline LingComparison ling_comparator(const WaveTriple& waves, const CrystalSpec& crystal, const FocusParams& fp,
                                      const FilterSpec& fs, const FilterSpec& fi, double pump_power,
                                      double quad_tol = 1e-11) {
  const auto waists = waists_for_rayleigh_range(waves, fp.rayleigh_range);
  const double delta_k = fp.kappa / crystal.length();
  const cplx phi = phi_thin_crystal(crystal, waists, delta_k);
  const double as = thin_crystal_alpha(waists.signal);
  const double ai = thin_crystal_alpha(waists.idler);
  const double np = waves.pump().refractive_index();
  const double ns = waves.signal().refractive_index();
  const double ni = waves.idler().refractive_index();
  const double ws = waves.signal().angular_frequency();
  const double wi = waves.idler().angular_frequency();
  const double area_p = constants::pi * waists.pump * waists.pump / 2.0;
  const double ep2 = 2.0 * pump_power / (np * constants::c * constants::epsilon0 * area_p);
  const double d = crystal.d_eff();
  const double spectral = std::pow(d * as * ai / constants::c, 2) * ep2 * std::norm(phi) * ws * wi /
                          (2.0 * constants::pi * ns * ni);
  LingComparison out;
  out.ling_rate = spectral * filter_overlap_integral(fs, fi);

  const auto ov = i_sfg_gaussian(waves, crystal, fp, quad_tol);
  const double q = waves.degenerate() ? q_shg(waves, crystal, ov.abs_sq()) : q_sfg(waves, crystal, ov.abs_sq());
  out.pair_rate = pair_rate(waves, pump_power, q, gamma_eff_pair(fs, fi));
  out.report = make_report("ling_thin_crystal_rate", out.pair_rate, out.ling_rate, 1e-3);
  return out;
}

// ----------------------------------------------------------------------------
// Bundled validation run.

inline WaveTriple reference_waves() { return WaveTriple::from_signal_idler(800e-9, 1.844, 800e-9, 1.757, 1.964); }

/// Runs every oracle on a fixed set of configurations.
inline std::vector<OracleReport> run_validation(unsigned threads = 1) {
  std::vector<OracleReport> out;
  const auto waves = reference_waves();
  const double L = 0.01;

  for (double zr : {0.5, 1.0, 2.0}) {
    out.push_back(make_report("upsilon_closed_form(zeta_R=" + std::to_string(zr) + ")",
                              upsilon(FocusParams::dimensionless(0.0, zr, 0.0), 1e-12).value.real(),
                              oracle_upsilon_closed_form(zr).real(), 1e-10));
  }

  struct Pt {
    double kappa, zeta, rk_scale;
  };
  const std::vector<Pt> pts{{-3.0, 0.18, 1.0}, {0.0, 1.0, 1.0}, {-8.0, 0.05, 1.0}, {5.0, 3.0, 1.0}, {-1.5, 0.5, 1.0}};
  auto design = [&](const Pt& p) {
    const CrystalSpec c(L, solve_poling_period(waves, L, p.kappa), 2.4e-12);
    return std::pair{c, derive_focus_params(waves, c, p.zeta * L)};
  };

  auto direct = parallel_map<OracleReport>(pts.size(), threads, [&](std::size_t j) {
    const auto [c, fp] = design(pts[j]);
    const auto a = i_sfg_gaussian(waves, c, fp, 1e-11);
    const auto b = i_sfg_direct3d(waves, c, fp);
    char name[96];
    std::snprintf(name, sizeof name, "i_sfg_direct3d(kappa=%g,zeta_R=%g)", pts[j].kappa, pts[j].zeta);
    return make_report(name, std::abs(a.value), std::abs(b.value), 1e-4);
  });
  out.insert(out.end(), direct.begin(), direct.end());

  auto fresnel = parallel_map<OracleReport>(pts.size(), threads, [&](std::size_t j) {
    const auto [c, fp] = design(pts[j]);
    const auto main = i_dfg_sq(waves, c, fp, basis_for(waves.idler(), fp.rayleigh_range));
    const auto oracle = oracle_dfg_fresnel(waves, c, fp);
    char name[96];
    std::snprintf(name, sizeof name, "i_dfg_fresnel(kappa=%g,zeta_R=%g)", pts[j].kappa, pts[j].zeta);
    auto r = make_report(name, main.total, oracle.refined, 1e-3);
    r.pass = r.pass && oracle.resolution_change < 1e-3;
    return r;
  });
  out.insert(out.end(), fresnel.begin(), fresnel.end());

  {
    const CrystalSpec c(L, solve_poling_period(waves, L, 0.0), 2.4e-12);
    const auto fp = derive_focus_params(waves, c, 50.0 * L);
    const FilterSpec f = Lorentzian{2.0 * constants::pi * 1e6};
    out.push_back(ling_comparator(waves, c, fp, f, f, 1e-3).report);
  }

  {
    const FilterSpec a = Lorentzian{2.0 * constants::pi * 3e6};
    const FilterSpec b = Lorentzian{2.0 * constants::pi * 7e6};
    const double closed = gamma_eff_pair(a, b);
    out.push_back(make_report("gamma_eff_spectral", gamma_eff_spectral(a, b),
                              2.0 / constants::pi * filter_overlap_integral(a, b), 1e-6));
    out.push_back(make_report("gamma_eff_temporal", gamma_eff_temporal(a, b), closed, 1e-6));
  }

  {
    // Second-harmonic power two ways at R_k = 0, Q = 0.
    const auto deg = WaveTriple::make_degenerate(1064e-9, 1.8, 1.8);
    const CrystalSpec c(L, std::nullopt, 2.4e-12);
    const auto fp = derive_focus_params(deg, c, 0.3 * L);
    const auto ov = i_sfg_gaussian(deg, c, fp, 1e-12);
    const double ps = 0.5;
    const double p2 = q_shg(deg, c, ov.abs_sq()) * ps * ps;
    const double ups = upsilon(fp, 1e-12).abs_sq;
    out.push_back(make_report("shg_focusing_form", p2,
                              shg_power_focusing_form(deg, c, fp.rayleigh_range, ups, ps), 1e-10));
  }
  return out;
}

}  // namespace spdc
