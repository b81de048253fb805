#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "spdc/optimizer.hpp"

using namespace spdc;

TEST(ParallelMap, ResultsFollowIndexOrder) {
  for (unsigned threads : {1u, 2u, 7u}) {
    const auto out = parallel_map<std::string>(50, threads, [](std::size_t j) { return std::to_string(j * j); });
    ASSERT_EQ(out.size(), 50u);
    for (std::size_t j = 0; j < out.size(); ++j) EXPECT_EQ(out[j], std::to_string(j * j));
  }
  EXPECT_TRUE(parallel_map<int>(0, 4, [](std::size_t) { return 1; }).empty());
}

TEST(ParallelMap, WorkerExceptionsReachTheCaller) {
  std::atomic<int> calls{0};
  auto boom = [&](std::size_t j) {
    ++calls;
    if (j == 3) throw std::runtime_error("bad index");
    return static_cast<int>(j);
  };
  EXPECT_THROW(parallel_map<int>(20, 4, boom), std::runtime_error);
  EXPECT_THROW(parallel_map<int>(20, 1, boom), std::runtime_error);
}

TEST(Optimizer, BeatsDenseGridWithoutMismatch) {
  // Log-spaced ζ_R, linear κ, over a window that contains the tight-focus optimum.
  constexpr int n = 200;
  double grid_best = 0.0, grid_kappa = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      const double k = -10.0 + 12.0 * a / (n - 1);
      const double z = 0.02 * std::pow(100.0, static_cast<double>(c) / (n - 1));
      const double f = focusing_objective(k, z, 0.0);
      if (f > grid_best) grid_best = f, grid_kappa = k;
    }
  }
  const auto r = optimize_focus(0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.best_objective, grid_best * (1.0 - 1e-12));
  EXPECT_LT(r.best_objective, grid_best * 1.01);
  EXPECT_NEAR(r.best_kappa, grid_kappa, 0.1);
  EXPECT_NEAR(r.best_objective, focusing_objective(r.best_kappa, r.best_zeta_R, 0.0), 1e-9);
}

TEST(Optimizer, FrozenOptimumWithMismatch) {
  const auto r = optimize_focus(0.04);
  EXPECT_NEAR(r.best_kappa, -3.4672, 2e-3);
  EXPECT_NEAR(r.best_zeta_R, 0.1778, 5e-4);
  EXPECT_NEAR(r.best_objective, 0.05393, 1e-5);
}

TEST(Optimizer, RestartsAgreeAcrossSeeds) {
  OptimizerOptions opt;
  opt.restarts = 4;
  double first = 0.0;
  for (std::uint64_t seed : {1ull, 99ull, 123456789ull}) {
    opt.seed = seed;
    const auto r = optimize_focus(0.0434320626909, {}, opt);
    if (first == 0.0) first = r.best_objective;
    EXPECT_NEAR(r.best_objective, first, 2.0 * opt.tol * first);
  }
}

TEST(Optimizer, ThreadCountDoesNotChangeTheAnswer) {
  OptimizerOptions one, many;
  many.threads = 4;
  const auto a = optimize_focus(0.02, {}, one);
  const auto b = optimize_focus(0.02, {}, many);
  EXPECT_EQ(a.best_objective, b.best_objective);
  EXPECT_EQ(a.best_kappa, b.best_kappa);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_EQ(a.trace.size(), static_cast<std::size_t>(a.evaluations));
}

TEST(Optimizer, StaysInsideBounds) {
  const FocusBounds box{0.5, 3.0, 2.0, 4.0};
  const auto r = optimize_focus(0.0, box);
  for (const auto& p : r.trace) {
    EXPECT_GE(p.kappa, box.kappa_min);
    EXPECT_LE(p.kappa, box.kappa_max);
    EXPECT_GE(p.zeta_R, box.zeta_min * (1 - 1e-12));
    EXPECT_LE(p.zeta_R, box.zeta_max * (1 + 1e-12));
  }
}

TEST(Optimizer, SinglePointBoxEvaluatesOnce) {
  const auto r = optimize_focus(0.01, {-3.0, -3.0, 0.2, 0.2});
  EXPECT_EQ(r.evaluations, 1);
  EXPECT_EQ(r.best_kappa, -3.0);
  EXPECT_EQ(r.best_objective, focusing_objective(-3.0, 0.2, 0.01, OptimizerOptions{}.quad_tol));
}

TEST(Optimizer, RejectsBadInput) {
  EXPECT_THROW(optimize_focus(0.0, {1.0, 0.0, 0.1, 1.0}), std::invalid_argument);
  EXPECT_THROW(optimize_focus(0.0, {-1.0, 0.0, 0.001, 1.0}), std::invalid_argument);
  EXPECT_THROW(optimize_focus(0.0, {-INFINITY, 0.0, 0.1, 1.0}), std::invalid_argument);
  OptimizerOptions bad;
  bad.restarts = 0;
  EXPECT_THROW(optimize_focus(0.0, {}, bad), std::invalid_argument);
}
