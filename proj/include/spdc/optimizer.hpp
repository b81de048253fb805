#pragma once

// Derivative-free maximization of the focusing objective ζ_R|Υ(κ, ζ_R, R_k)|²
// and a small deterministic parallel map used by the sweep engine.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "spdc/overlap.hpp"

namespace spdc {

/// Runs fn(0..n-1) on up to `threads` workers; results land at their own index
/// so output order never depends on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<std::optional<T>> slots(n);
  if (threads <= 1 || n <= 1) {
    for (std::size_t j = 0; j < n; ++j) slots[j].emplace(fn(j));
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t j = next++; j < n; j = next++) slots[j].emplace(fn(j));
        } catch (...) {
          errors[w] = std::current_exception();
          next = n;
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline unsigned default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct FocusBounds {
  double kappa_min = -20.0;
  double kappa_max = 5.0;
  double zeta_min = 0.02;
  double zeta_max = 5.0;
};

struct OptimizerOptions {
  double tol = 1e-8;
  double quad_tol = 1e-10;
  int restarts = 5;
  int max_evaluations = 4000;  // per restart
  unsigned threads = 1;
  std::uint64_t seed = 20240101;
};

struct TracePoint {
  double kappa, zeta_R, objective;
};

struct OptimizationResult {
  double best_kappa = 0.0;
  double best_zeta_R = 0.0;
  double best_objective = 0.0;
  int evaluations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
  std::vector<double> restart_objectives;
};

namespace detail {

struct RestartOutcome {
  TracePoint best{0.0, 0.0, -1.0};
  int evaluations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

/// Nelder–Mead in (κ, ln ζ_R), maximizing. Points are clamped into the box.
inline RestartOutcome nelder_mead(double R_k, const FocusBounds& b, const OptimizerOptions& opt,
                                  std::array<double, 2> start) {
  RestartOutcome out;
  const double lz_min = std::log(b.zeta_min);
  const double lz_max = std::log(b.zeta_max);
  auto clamp_pt = [&](std::array<double, 2> x) {
    return std::array<double, 2>{std::clamp(x[0], b.kappa_min, b.kappa_max), std::clamp(x[1], lz_min, lz_max)};
  };
  auto eval = [&](std::array<double, 2> x) {
    x = clamp_pt(x);
    const double zr = std::exp(x[1]);
    const double f = focusing_objective(x[0], zr, R_k, opt.quad_tol);
    ++out.evaluations;
    out.trace.push_back({x[0], zr, f});
    if (f > out.best.objective) out.best = {x[0], zr, f};
    return f;
  };

  std::array<std::array<double, 2>, 3> s{};
  s[0] = clamp_pt(start);
  const double dk = std::max(0.05 * (b.kappa_max - b.kappa_min), 1e-3);
  const double dz = std::max(0.05 * (lz_max - lz_min), 1e-3);
  s[1] = clamp_pt({s[0][0] + (s[0][0] + dk <= b.kappa_max ? dk : -dk), s[0][1]});
  s[2] = clamp_pt({s[0][0], s[0][1] + (s[0][1] + dz <= lz_max ? dz : -dz)});
  std::array<double, 3> f{};
  for (int j = 0; j < 3; ++j) f[j] = eval(s[j]);

  const double x_tol = 10.0 * std::sqrt(opt.tol);
  while (out.evaluations < opt.max_evaluations) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int l, int r) { return f[l] > f[r]; });
    const auto best = s[idx[0]], mid = s[idx[1]], worst = s[idx[2]];
    const double fb = f[idx[0]], fm = f[idx[1]], fw = f[idx[2]];
    double spread = 0.0;
    for (int j = 1; j < 3; ++j) {
      spread = std::max({spread, std::abs(s[idx[j]][0] - best[0]), std::abs(s[idx[j]][1] - best[1])});
    }
    if (fb - fw <= opt.tol * std::abs(fb) && spread <= x_tol) {
      out.converged = true;
      break;
    }
    const std::array<double, 2> c{(best[0] + mid[0]) / 2.0, (best[1] + mid[1]) / 2.0};
    auto along = [&](double t) { return clamp_pt({c[0] + t * (worst[0] - c[0]), c[1] + t * (worst[1] - c[1])}); };
    const auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr > fb) {
      const auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe > fr) {
        s[idx[2]] = xe, f[idx[2]] = fe;
      } else {
        s[idx[2]] = xr, f[idx[2]] = fr;
      }
      continue;
    }
    if (fr > fm) {
      s[idx[2]] = xr, f[idx[2]] = fr;
      continue;
    }
    const auto xc = fr > fw ? along(-0.5) : along(0.5);
    const double fc = eval(xc);
    if (fc > std::max(fr, fw)) {
      s[idx[2]] = xc, f[idx[2]] = fc;
      continue;
    }
    for (int j = 1; j < 3; ++j) {
      auto& p = s[idx[j]];
      p = clamp_pt({best[0] + 0.5 * (p[0] - best[0]), best[1] + 0.5 * (p[1] - best[1])});
      f[idx[j]] = eval(p);
    }
  }
  return out;
}

}  // namespace detail

/// Maximizes ζ_R|Υ|² over the box. Restart 0 starts from the best point of a
/// coarse 12×12 scan; the remaining restarts start from seeded random points.
inline OptimizationResult optimize_focus(double R_k, const FocusBounds& bounds = {},
                                         const OptimizerOptions& opt = {}) {
  if (!std::isfinite(bounds.kappa_min) || !std::isfinite(bounds.kappa_max) || !std::isfinite(bounds.zeta_max) ||
      bounds.kappa_min > bounds.kappa_max || bounds.zeta_min > bounds.zeta_max) {
    throw std::invalid_argument("optimize_focus: bounds must be finite and ordered");
  }
  if (!(bounds.zeta_min >= 0.01)) throw std::invalid_argument("optimize_focus: zeta_R lower bound must be >= 0.01");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("optimize_focus: tol must be positive");
  if (opt.restarts < 1) throw std::invalid_argument("optimize_focus: need at least one restart");

  OptimizationResult res;
  if (bounds.kappa_min == bounds.kappa_max && bounds.zeta_min == bounds.zeta_max) {
    const double f = focusing_objective(bounds.kappa_min, bounds.zeta_min, R_k, opt.quad_tol);
    res = {bounds.kappa_min, bounds.zeta_min, f, 1, true, {{bounds.kappa_min, bounds.zeta_min, f}}, {f}};
    return res;
  }

  const double lz_min = std::log(bounds.zeta_min);
  const double lz_max = std::log(bounds.zeta_max);
  constexpr int kScan = 12;
  std::array<double, 2> scan_best{bounds.kappa_min, lz_min};
  double scan_f = -1.0;
  for (int a = 0; a < kScan; ++a) {
    for (int c = 0; c < kScan; ++c) {
      const double k = bounds.kappa_min + (bounds.kappa_max - bounds.kappa_min) * (a + 0.5) / kScan;
      const double lz = lz_min + (lz_max - lz_min) * (c + 0.5) / kScan;
      const double f = focusing_objective(k, std::exp(lz), R_k, opt.quad_tol);
      res.trace.push_back({k, std::exp(lz), f});
      if (f > scan_f) scan_f = f, scan_best = {k, lz};
    }
  }
  res.evaluations = kScan * kScan;

  std::vector<std::array<double, 2>> starts{scan_best};
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uk(bounds.kappa_min, bounds.kappa_max);
  std::uniform_real_distribution<double> uz(lz_min, lz_max);
  for (int r = 1; r < opt.restarts; ++r) {
    const double k = uk(rng);
    starts.push_back({k, uz(rng)});
  }

  const auto outcomes = parallel_map<detail::RestartOutcome>(
      starts.size(), opt.threads, [&](std::size_t j) { return detail::nelder_mead(R_k, bounds, opt, starts[j]); });

  res.best_objective = -1.0;
  for (const auto& o : outcomes) {
    res.evaluations += o.evaluations;
    res.trace.insert(res.trace.end(), o.trace.begin(), o.trace.end());
    res.restart_objectives.push_back(o.best.objective);
    if (o.best.objective > res.best_objective) {
      res.best_objective = o.best.objective;
      res.best_kappa = o.best.kappa;
      res.best_zeta_R = o.best.zeta_R;
      res.converged = o.converged;
    }
  }
  return res;
}

}  // namespace spdc
