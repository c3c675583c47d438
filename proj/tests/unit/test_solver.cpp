#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sqg/solver.hpp"
#include "sqg_test_util.hpp"

using namespace sqg;
using test::cosine;
using test::grid_of;
using test::max_abs_diff;

namespace {

SolverConfig config(int n, double alpha, double kappa, double dt, double t_end) {
  SolverConfig cfg;
  cfg.grid = grid_of(n);
  cfg.alpha = alpha;
  cfg.kappa = kappa;
  cfg.dt = dt;
  cfg.t_end = t_end;
  return cfg;
}

RealField smooth_data(int n, std::uint64_t seed, double amp) {
  RealField f = test::random_trig(grid_of(n), 4, seed);
  return (amp / test::max_abs(f)) * f;
}

}  // namespace

TEST(SolverConfig, Validation) {
  SolverConfig cfg = config(32, 0.5, 1.0, 0.1, 1.0);
  EXPECT_NO_THROW(cfg.validate());
  cfg.alpha = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = config(32, 0.5, -1.0, 0.1, 1.0);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = config(32, 0.5, 0.0, 0.1, 1.0);
  EXPECT_NO_THROW(cfg.validate());
  cfg.blowup_factor = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(config(32, 0.5, 1.0, 0.3, 1.0).step_count(), 4);
  EXPECT_EQ(config(32, 0.5, 1.0, 0.25, 1.0).step_count(), 4);
  EXPECT_EQ(parse_integrator("ifeuler"), Integrator::IFEuler);
  EXPECT_THROW(parse_integrator("rk45"), std::invalid_argument);
}

TEST(SolverConfig, SuggestDt) {
  const SolverConfig cfg = config(64, 0.5, 2.0, 0.1, 1.0);
  EXPECT_NEAR(suggest_dt(cfg, 3.0), 0.5 / (2.0 * 32.0 + 3.0 * 32.0), 1e-15);
}

TEST(Solver, SingleModesDecayExactly) {
  // A single Fourier mode is a steady state of the transport term, so even the
  // nonlinear run must reproduce exp(-kappa |k|^{2 alpha} t) per mode.
  for (bool nonlinear : {false, true}) {
    SolverConfig cfg = config(32, 0.35, 0.7, 0.13, 1.0);
    cfg.nonlinear = nonlinear;
    const GridSpec g = cfg.grid;
    const RealField theta0 = nonlinear ? cosine(g, 3, 0) : cosine(g, 3, 0) + cosine(g, 1, 2, 0.5);
    const RunResult res = run(theta0, cfg);
    const double d3 = std::exp(-0.7 * std::pow(3.0, 0.7));
    const double d5 = std::exp(-0.7 * std::pow(5.0, 0.35));
    const RealField expected = nonlinear ? cosine(g, 3, 0, d3) : cosine(g, 3, 0, d3) + cosine(g, 1, 2, 0.5 * d5);
    EXPECT_LT(max_abs_diff(inverse_transform(res.final_state.theta), expected), 1e-14) << nonlinear;
    EXPECT_DOUBLE_EQ(res.final_state.t, 1.0);
    EXPECT_EQ(res.steps, 8);
  }
}

TEST(Solver, TransportFormsAgreeAndConserve) {
  const SolverConfig cfg = config(64, 0.5, 1.0, 0.01, 1.0);
  const QgSolver solver(cfg);
  const SpectralField theta = truncate(forward_transform(test::random_trig(grid_of(64), 9, 3)), cfg.dealias);
  const SpectralField a = solver.nonlinear_term(theta);
  const SpectralField b = solver.nonlinear_term_divergence(theta);
  EXPECT_LT(l2_norm(a - b), 1e-12 * l2_norm(a));
  // int theta u.grad theta = 0 for band-limited theta.
  const double pairing = inner_product(inverse_transform(theta), inverse_transform(a));
  EXPECT_LT(std::abs(pairing), 1e-11 * l2_norm(theta) * l2_norm(a));
  EXPECT_LT(std::abs(a.mean()), 1e-15);
}

TEST(Solver, RungeKuttaFourthOrder) {
  const RealField theta0 = smooth_data(64, 7, 1.0);
  std::vector<RealField> finals;
  for (double dt : {0.04, 0.02, 0.01}) {
    finals.push_back(inverse_transform(run(theta0, config(64, 0.5, 0.1, dt, 0.4)).final_state.theta));
  }
  const double e1 = lp_norm(finals[0] - finals[1], 2.0);
  const double e2 = lp_norm(finals[1] - finals[2], 2.0);
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.3);
}

TEST(Solver, IntegratingFactorEulerFirstOrder) {
  const RealField theta0 = smooth_data(32, 8, 1.0);
  std::vector<RealField> finals;
  for (double dt : {0.02, 0.01, 0.005}) {
    SolverConfig cfg = config(32, 0.5, 0.1, dt, 0.2);
    cfg.integrator = Integrator::IFEuler;
    finals.push_back(inverse_transform(run(theta0, cfg).final_state.theta));
  }
  const double e1 = lp_norm(finals[0] - finals[1], 2.0);
  const double e2 = lp_norm(finals[1] - finals[2], 2.0);
  EXPECT_NEAR(std::log2(e1 / e2), 1.0, 0.15);
}

TEST(Solver, InviscidEnergyConserved) {
  const RunResult res = run(smooth_data(64, 9, 1.0), config(64, 0.5, 0.0, 0.01, 0.5));
  const auto& l2 = res.trajectory.l2;
  EXPECT_LT(std::abs(l2.back() - l2.front()) / l2.front(), 1e-9);
}

TEST(Solver, DissipativeNormsNonincreasing) {
  const RunResult res = run(smooth_data(64, 10, 1.0), config(64, 0.5, 0.5, 0.01, 0.5));
  for (std::size_t i = 1; i < res.trajectory.size(); ++i) {
    EXPECT_LE(res.trajectory.l2[i], res.trajectory.l2[i - 1] * (1 + 1e-12));
  }
}

TEST(Solver, RejectsMeanAndRecordsStride) {
  const SolverConfig cfg = config(32, 0.5, 1.0, 0.1, 1.0);
  const RealField with_mean = test::random_trig(cfg.grid, 3, 1, false);
  EXPECT_THROW(run(with_mean, cfg), std::invalid_argument);
  const RunResult res = run(cosine(cfg.grid, 1, 0), cfg, RunOptions{3, {}});
  EXPECT_EQ(res.trajectory.size(), 5u);  // t = 0, 0.3, 0.6, 0.9, 1.0
  std::ostringstream os;
  res.trajectory.write_csv(os);
  EXPECT_NE(os.str().find("t,l2,linf,block_0,block_1,block_2"), std::string::npos);
}

TEST(Solver, AbortsOnGrowth) {
  SolverConfig cfg = config(32, 0.5, 0.0, 2.0, 40.0);
  cfg.blowup_factor = 2.0;
  const RunResult res = run(smooth_data(32, 11, 20.0), cfg);
  EXPECT_TRUE(res.aborted);
  EXPECT_FALSE(res.abort_reason.empty());
  EXPECT_TRUE(std::isfinite(l2_norm(res.final_state.theta)));
  EXPECT_LT(res.final_state.t, 40.0);
}

TEST(Solver, ObserversSeeEveryStep) {
  struct Counter : RunObserver {
    int starts = 0, steps = 0, finishes = 0;
    void on_start(const State&) override { ++starts; }
    void on_step(const State&, double) override { ++steps; }
    void on_finish(const State&, bool) override { ++finishes; }
  } counter;
  const SolverConfig cfg = config(32, 0.5, 1.0, 0.1, 1.0);
  run(cosine(cfg.grid, 1, 1), cfg, RunOptions{1, {&counter}});
  EXPECT_EQ(counter.starts, 1);
  EXPECT_EQ(counter.steps, 10);
  EXPECT_EQ(counter.finishes, 1);
}

TEST(Picard, ConvergesToDirectSolution) {
  PicardConfig pcfg;
  pcfg.inner = config(64, 0.5, 1.0, 0.05, 1.0);
  pcfg.max_iter = 10;
  const RealField theta0 = smooth_data(64, 12, 0.5);
  const PicardResult pr = picard_run(theta0, pcfg);
  ASSERT_EQ(pr.iterates.size(), 10u);
  ASSERT_EQ(pr.differences.size(), 9u);
  for (std::size_t m = 2; m < pr.differences.size(); ++m) EXPECT_LE(pr.differences[m], pr.differences[m - 1]);
  const RunResult direct = run(theta0, pcfg.inner);
  EXPECT_LT(l2_norm(pr.iterates.back().final_state.theta - direct.final_state.theta),
            1e-8 * l2_norm(direct.final_state.theta));
}

TEST(Picard, Validation) {
  PicardConfig pcfg;
  pcfg.max_iter = 0;
  EXPECT_THROW(pcfg.validate(), std::invalid_argument);
}
