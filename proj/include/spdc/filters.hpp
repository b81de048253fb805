#pragma once

// Narrow-band filters on the signal and idler arms: transmissions, effective
// linewidths and the signal–idler correlation amplitude f(τ), τ = t_s − t_i.
//
// Filter transfer functions are written in the detuning Ω from line centre.
// The correlation amplitude is
//   f(τ) = (1/2π) ∫ dΩ F̃_s(Ω) F̃_i(−Ω) e^{−iΩτ}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "spdc/quadrature.hpp"
#include "spdc/units.hpp"

namespace spdc {

class FilterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lorentzian transmission T(Ω) = Γ² / (Γ² + 4Ω²); Γ is the angular FWHM.
struct Lorentzian {
  double gamma = 0.0;
};

/// Sampled transmission; linear interpolation between samples, zero outside.
/// Carries no phase, so the transfer function is taken as √T.
struct Tabulated {
  std::vector<double> omega;
  std::vector<double> transmission;
};

struct Unfiltered {};

using FilterSpec = std::variant<Lorentzian, Tabulated, Unfiltered>;

inline void validate_filter(const FilterSpec& f) {
  if (const auto* l = std::get_if<Lorentzian>(&f)) {
    if (!(l->gamma > 0.0) || !std::isfinite(l->gamma)) throw FilterError("Lorentzian width must be > 0");
  } else if (const auto* t = std::get_if<Tabulated>(&f)) {
    if (t->omega.size() != t->transmission.size() || t->omega.size() < 2) {
      throw FilterError("tabulated filter needs >= 2 matching samples");
    }
    for (std::size_t j = 0; j < t->omega.size(); ++j) {
      if (!(t->transmission[j] >= 0.0 && t->transmission[j] <= 1.0)) {
        throw FilterError("tabulated transmission outside [0, 1] at sample " + std::to_string(j));
      }
      if (j > 0 && !(t->omega[j] > t->omega[j - 1])) {
        throw FilterError("tabulated frequency grid not strictly increasing at sample " + std::to_string(j));
      }
    }
  }
}

inline bool is_unfiltered(const FilterSpec& f) { return std::holds_alternative<Unfiltered>(f); }

inline double transmission(const FilterSpec& f, double omega) {
  return std::visit(
      [omega](const auto& spec) -> double {
        using S = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<S, Lorentzian>) {
          const double g2 = spec.gamma * spec.gamma;
          return g2 / (g2 + 4.0 * omega * omega);
        } else if constexpr (std::is_same_v<S, Tabulated>) {
          const auto& x = spec.omega;
          if (omega < x.front() || omega > x.back()) return 0.0;
          const auto it = std::upper_bound(x.begin(), x.end(), omega);
          if (it == x.end()) return spec.transmission.back();
          const std::size_t hi = static_cast<std::size_t>(it - x.begin());
          const std::size_t lo = hi - 1;
          const double w = (omega - x[lo]) / (x[hi] - x[lo]);
          return (1.0 - w) * spec.transmission[lo] + w * spec.transmission[hi];
        } else {
          return 1.0;
        }
      },
      f);
}

/// Complex transfer function F̃(Ω); the Lorentzian is the causal single pole.
inline std::complex<double> transfer(const FilterSpec& f, double omega) {
  if (const auto* l = std::get_if<Lorentzian>(&f)) {
    const double h = l->gamma / 2.0;
    return h / std::complex<double>(h, -omega);
  }
  return std::sqrt(transmission(f, omega));
}

namespace detail {

/// Frequency support [lo, hi] of a tabulated filter mirrored as needed.
struct Support {
  double lo, hi;
};

inline Support support(const Tabulated& t, bool mirrored) {
  return mirrored ? Support{-t.omega.back(), -t.omega.front()} : Support{t.omega.front(), t.omega.back()};
}

inline double finest_spacing(const Tabulated& t) {
  double h = t.omega.back() - t.omega.front();
  for (std::size_t j = 1; j < t.omega.size(); ++j) h = std::min(h, t.omega[j] - t.omega[j - 1]);
  return h;
}

/// Uniform grid on [lo, hi] with spacing no coarser than `h`, capped in size.
inline std::vector<double> uniform_grid(double lo, double hi, double h, std::size_t cap = 200001) {
  std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
  n = std::clamp<std::size_t>(n, 2, cap);
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1);
  return g;
}

template <class F>
double trapezoid(const std::vector<double>& x, F&& f) {
  double s = 0.0;
  double prev = f(x[0]);
  for (std::size_t j = 1; j < x.size(); ++j) {
    const double cur = f(x[j]);
    s += 0.5 * (prev + cur) * (x[j] - x[j - 1]);
    prev = cur;
  }
  return s;
}

/// Integration window and resolution for a product that involves at least one
/// tabulated filter; the tabulated support bounds the integrand.
inline std::vector<double> spectral_grid(const FilterSpec& s, const FilterSpec& i) {
  const auto* ts = std::get_if<Tabulated>(&s);
  const auto* ti = std::get_if<Tabulated>(&i);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double h = std::numeric_limits<double>::infinity();
  if (ts) {
    const auto sp = support(*ts, false);
    lo = std::max(lo, sp.lo);
    hi = std::min(hi, sp.hi);
    h = std::min(h, finest_spacing(*ts) / 8.0);
  }
  if (ti) {
    const auto sp = support(*ti, true);
    lo = std::max(lo, sp.lo);
    hi = std::min(hi, sp.hi);
    h = std::min(h, finest_spacing(*ti) / 8.0);
  }
  for (const FilterSpec* f : {&s, &i}) {
    if (const auto* l = std::get_if<Lorentzian>(f)) h = std::min(h, l->gamma / 64.0);
  }
  if (!(hi > lo)) return {};
  return uniform_grid(lo, hi, h);
}

}  // namespace detail

/// Γ_eff,s = 4 ∫|F(t)|² dt = (2/π) ∫ T(Ω) dΩ.
inline double gamma_eff_single(const FilterSpec& f) {
  validate_filter(f);
  if (const auto* l = std::get_if<Lorentzian>(&f)) return l->gamma;
  if (const auto* t = std::get_if<Tabulated>(&f)) {
    double s = 0.0;
    for (std::size_t j = 1; j < t->omega.size(); ++j) {
      s += 0.5 * (t->transmission[j] + t->transmission[j - 1]) * (t->omega[j] - t->omega[j - 1]);
    }
    return 2.0 / constants::pi * s;
  }
  throw FilterError("gamma_eff_single: unfiltered arm has no finite linewidth");
}

/// Γ_eff = (2/π) ∫ dΩ T_s(Ω) T_i(−Ω) by numerical integration only.
inline double gamma_eff_spectral(const FilterSpec& s, const FilterSpec& i, double rel_tol = 1e-10) {
  validate_filter(s);
  validate_filter(i);
  if (is_unfiltered(s) && is_unfiltered(i)) {
    throw FilterError("gamma_eff: both arms unfiltered, narrow-band model does not apply");
  }
  auto integrand = [&](double w) { return transmission(s, w) * transmission(i, -w); };
  if (std::holds_alternative<Tabulated>(s) || std::holds_alternative<Tabulated>(i)) {
    const auto grid = detail::spectral_grid(s, i);
    if (grid.empty()) return 0.0;
    return 2.0 / constants::pi * detail::trapezoid(grid, integrand);
  }
  // Lorentzian or flat arms only: integrate over the real line in units of the
  // narrowest width, split at the origin where both peaks sit.
  double scale = std::numeric_limits<double>::infinity();
  for (const FilterSpec* f : {&s, &i}) {
    if (const auto* l = std::get_if<Lorentzian>(f)) scale = std::min(scale, l->gamma);
  }
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 0.0;
  auto scaled = [&](double x) { return integrand(x * scale); };
  const auto left = quad::integrate_semi_infinite([&](double x) { return scaled(-x); }, 0.0, opt);
  const auto right = quad::integrate_semi_infinite(scaled, 0.0, opt);
  return 2.0 / constants::pi * scale * (left.value + right.value);
}

/// Joint effective linewidth Γ_eff in rad/s. Closed forms where they exist,
/// the spectral integral otherwise.
inline double gamma_eff_pair(const FilterSpec& s, const FilterSpec& i) {
  validate_filter(s);
  validate_filter(i);
  const auto* ls = std::get_if<Lorentzian>(&s);
  const auto* li = std::get_if<Lorentzian>(&i);
  if (ls && li) return ls->gamma * li->gamma / (ls->gamma + li->gamma);
  if (is_unfiltered(s) && is_unfiltered(i)) {
    throw FilterError("gamma_eff: both arms unfiltered, narrow-band model does not apply");
  }
  if (is_unfiltered(s)) return gamma_eff_single(i);
  if (is_unfiltered(i)) return gamma_eff_single(s);
  return gamma_eff_spectral(s, i);
}

/// f(τ) at a single delay. Lorentzian and unfiltered combinations use the
/// closed forms; anything tabulated is integrated on a uniform grid.
inline std::complex<double> correlation_amplitude(const FilterSpec& s, const FilterSpec& i, double tau) {
  const auto* ls = std::get_if<Lorentzian>(&s);
  const auto* li = std::get_if<Lorentzian>(&i);
  if (ls && li) {
    const double gs = ls->gamma;
    const double gi = li->gamma;
    const double amp = gs * gi / (2.0 * (gs + gi));
    if (tau > 0.0) return amp * std::exp(-gs * tau / 2.0);
    if (tau < 0.0) return amp * std::exp(gi * tau / 2.0);
    return amp;
  }
  if (ls && is_unfiltered(i)) {
    // Idler unconstrained: the signal filter's causal response alone.
    return tau >= 0.0 ? ls->gamma / 2.0 * std::exp(-ls->gamma * tau / 2.0) : 0.0;
  }
  if (li && is_unfiltered(s)) {
    return tau <= 0.0 ? li->gamma / 2.0 * std::exp(li->gamma * tau / 2.0) : 0.0;
  }
  if (is_unfiltered(s) && is_unfiltered(i)) {
    throw FilterError("correlation: both arms unfiltered");
  }
  const auto grid = detail::spectral_grid(s, i);
  if (grid.empty()) return 0.0;
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = grid[j];
    const double weight = (j == 0 || j + 1 == grid.size()) ? 0.5 : 1.0;
    sum += weight * transfer(s, w) * transfer(i, -w) * std::polar(1.0, -w * tau);
  }
  const double dw = grid[1] - grid[0];
  return sum * dw / (2.0 * constants::pi);
}

/// Γ_eff from the temporal side: 4 ∫ |f(τ)|² dτ by adaptive quadrature.
inline double gamma_eff_temporal(const FilterSpec& s, const FilterSpec& i, double rel_tol = 1e-10) {
  validate_filter(s);
  validate_filter(i);
  double scale = 0.0;
  for (const FilterSpec* f : {&s, &i}) {
    if (const auto* l = std::get_if<Lorentzian>(f)) scale = std::max(scale, l->gamma);
    if (const auto* t = std::get_if<Tabulated>(f)) scale = std::max(scale, t->omega.back() - t->omega.front());
  }
  if (!(scale > 0.0)) throw FilterError("gamma_eff_temporal: both arms unfiltered");
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 0.0;
  opt.max_subdivisions = 20000;
  auto density = [&](double x) { return std::norm(correlation_amplitude(s, i, x / scale)); };
  const auto right = quad::integrate_semi_infinite(density, 0.0, opt);
  const auto left = quad::integrate_semi_infinite([&](double x) { return density(-x); }, 0.0, opt);
  return 4.0 * (left.value + right.value) / scale;
}

struct CorrelationTrace {
  std::vector<double> tau;
  std::vector<std::complex<double>> f;
  double gamma_eff = 0.0;
  /// W⁽²⁾(τ) in s⁻², filled when a rate prefactor is supplied.
  std::vector<double> w2_density;
};

/// Largest bandwidth present on either arm, used for the sampling check.
inline double max_bandwidth(const FilterSpec& s, const FilterSpec& i) {
  double b = 0.0;
  for (const FilterSpec* f : {&s, &i}) {
    if (const auto* l = std::get_if<Lorentzian>(f)) b = std::max(b, l->gamma);
    if (const auto* t = std::get_if<Tabulated>(f)) {
      b = std::max(b, std::max(std::abs(t->omega.front()), std::abs(t->omega.back())));
    }
  }
  return b;
}

/// f(τ) on a caller-supplied grid. `density_prefactor` (ω_sω_i/ω_p²)P_pQ turns
/// |f|² into the coincidence density; pass 0 to skip it.
inline CorrelationTrace correlation_shape(const FilterSpec& s, const FilterSpec& i, const std::vector<double>& tau,
                                          double density_prefactor = 0.0) {
  validate_filter(s);
  validate_filter(i);
  if (tau.empty()) throw FilterError("correlation_shape: empty delay grid");
  for (std::size_t j = 1; j < tau.size(); ++j) {
    if (!(tau[j] > tau[j - 1])) throw FilterError("correlation_shape: delay grid must be strictly increasing");
  }
  const double bw = max_bandwidth(s, i);
  if (tau.size() > 1) {
    double dt = 0.0;
    for (std::size_t j = 1; j < tau.size(); ++j) dt = std::max(dt, tau[j] - tau[j - 1]);
    if (dt * bw > constants::pi) {
      throw FilterError("correlation_shape: delay grid too coarse for the filter bandwidth (need dt <= pi/Gamma_max)");
    }
  }
  CorrelationTrace out;
  out.tau = tau;
  out.gamma_eff = gamma_eff_pair(s, i);
  out.f.reserve(tau.size());
  for (double t : tau) out.f.push_back(correlation_amplitude(s, i, t));
  if (density_prefactor > 0.0) {
    out.w2_density.reserve(tau.size());
    for (const auto& v : out.f) out.w2_density.push_back(density_prefactor * std::norm(v));
  }
  return out;
}

/// Symmetric delay grid spanning ±`span_widths`/Γ_min with at least n points.
inline std::vector<double> default_delay_grid(const FilterSpec& s, const FilterSpec& i, std::size_t n = 401,
                                              double span_widths = 10.0) {
  double narrow = std::numeric_limits<double>::infinity();
  for (const FilterSpec* f : {&s, &i}) {
    if (const auto* l = std::get_if<Lorentzian>(f)) narrow = std::min(narrow, l->gamma);
    if (std::holds_alternative<Tabulated>(*f)) narrow = std::min(narrow, gamma_eff_single(*f));
  }
  if (!std::isfinite(narrow) || narrow <= 0.0) throw FilterError("delay grid: no finite filter bandwidth");
  const double half = span_widths / narrow;
  // Keep at least two samples per shortest period of the widest filter.
  const auto needed = static_cast<std::size_t>(std::ceil(2.0 * half * max_bandwidth(s, i) / constants::pi)) + 1;
  n = std::max({n, needed, std::size_t{2}});
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = -half + 2.0 * half * static_cast<double>(j) / static_cast<double>(n - 1);
  return g;
}

/// Reads a two-column transmission file. The first non-comment line names the
/// columns: `offset_MHz transmission`, `offset_Hz transmission` or
/// `offset_rad_per_s transmission`. Ordinary frequencies become angular.
inline Tabulated parse_tabulated_filter(std::istream& in, const std::string& origin = "<stream>") {
  std::string line;
  int line_no = 0;
  double to_angular = 0.0;
  Tabulated out;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a)) continue;
    if (to_angular == 0.0) {
      ls >> b;
      if (b != "transmission") {
        throw FilterError(origin + ":" + std::to_string(line_no) + ": header must end with 'transmission'");
      }
      if (a == "offset_MHz") to_angular = 2.0 * constants::pi * 1e6;
      else if (a == "offset_Hz") to_angular = 2.0 * constants::pi;
      else if (a == "offset_rad_per_s") to_angular = 1.0;
      else throw FilterError(origin + ":" + std::to_string(line_no) + ": unknown frequency column '" + a + "'");
      continue;
    }
    std::istringstream row(line);
    double x = 0.0, t = 0.0;
    std::string extra;
    if (!(row >> x >> t) || (row >> extra)) {
      throw FilterError(origin + ":" + std::to_string(line_no) + ": expected two numeric columns");
    }
    out.omega.push_back(x * to_angular);
    out.transmission.push_back(t);
  }
  if (to_angular == 0.0) throw FilterError(origin + ": missing header line");
  try {
    validate_filter(FilterSpec{out});
  } catch (const FilterError& e) {
    throw FilterError(origin + ": " + e.what());
  }
  return out;
}

inline Tabulated load_tabulated_filter(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FilterError("cannot open filter file '" + path + "'");
  return parse_tabulated_filter(in, path);
}

}  // namespace spdc
