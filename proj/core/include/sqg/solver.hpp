#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqg/grid.hpp"
#include "sqg/littlewood_paley.hpp"
#include "sqg/spectral.hpp"

namespace sqg {

enum class Integrator { IFRK4, IFEuler };

Integrator parse_integrator(const std::string& name);
std::string to_string(Integrator integrator);

/// Parameters of d_t theta + u.grad theta + kappa Lambda^{2 alpha} theta = 0, u = R^perp theta.
///
/// kappa = 0 is accepted (inviscid conservation checks). With `nonlinear` off the
/// transport term is dropped and every mode decays exactly.
struct SolverConfig {
  double alpha = 0.5;
  double kappa = 1.0;
  GridSpec grid;
  double dt = 1e-2;
  double t_end = 1.0;
  Integrator integrator = Integrator::IFRK4;
  DealiasRule dealias = DealiasRule::TwoThirds;
  bool nonlinear = true;
  /// Abort when ||theta||_inf exceeds this multiple of its initial value.
  double blowup_factor = 10.0;

  void validate() const;
  /// Number of steps to reach t_end; the last step is shortened if dt does not divide t_end.
  long step_count() const;
};

/// dt <= 0.5 / (kappa Nyquist^{2 alpha} + u_max Nyquist).
double suggest_dt(const SolverConfig& cfg, double u_max);

struct State {
  SpectralField theta;
  double t = 0.0;
};

/// Right-hand side used by the integrating-factor schemes: stage(i, x) returns
/// the transport term evaluated at stage argument x (i = 0..3 for RK4, 0 for Euler).
using StageFunction = std::function<SpectralField(int stage, const SpectralField& x)>;

/// Pseudo-spectral integrator with the dissipation treated exactly through the
/// factor exp(-kappa |xi|^{2 alpha} t).
class QgSolver {
 public:
  explicit QgSolver(SolverConfig cfg);

  const SolverConfig& config() const { return cfg_; }

  /// -(u . grad theta), products in physical space, output truncated by the dealias rule.
  SpectralField nonlinear_term(const SpectralField& theta) const;
  /// -div(u theta); equals nonlinear_term since div u = 0.
  SpectralField nonlinear_term_divergence(const SpectralField& theta) const;
  /// -(u . grad theta) with the velocity u = R^perp carrier.
  SpectralField transport_term(const SpectralField& carrier, const SpectralField& theta) const;

  /// One step of size dt with the configured integrator.
  State step(const State& s, double dt) const;
  State step(const State& s) const { return step(s, cfg_.dt); }

  /// One step with an arbitrary transport function; `stages`, if given, receives
  /// the stage arguments in order (used by the Picard iteration).
  State step_with(const State& s, double dt, const StageFunction& rhs, std::vector<SpectralField>* stages) const;

  /// Linear propagator exp(-kappa |xi|^{2 alpha} tau) applied to f.
  SpectralField propagate(const SpectralField& f, double tau) const;

 private:
  SolverConfig cfg_;
  std::vector<double> symbol_;  // kappa |xi|^{2 alpha}
};

/// Receives every accepted state of a run. Observers are per run.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void on_start(const State& s) { (void)s; }
  virtual void on_step(const State& s, double dt) { (void)s, (void)dt; }
  virtual void on_finish(const State& s, bool aborted) { (void)s, (void)aborted; }
};

/// Rows of (t, ||theta||_2, ||theta||_inf, ||Delta_j theta||_2 for each homogeneous block).
struct NormTrajectory {
  int first_block = 0;
  std::vector<double> t;
  std::vector<double> l2;
  std::vector<double> linf;
  std::vector<std::vector<double>> blocks;

  std::size_t size() const { return t.size(); }
  void record(const State& s, const DyadicFamily& fam);
  void write_csv(std::ostream& os) const;
};

struct RunResult {
  NormTrajectory trajectory;
  State final_state;
  long steps = 0;
  bool aborted = false;
  double abort_time = 0.0;
  std::string abort_reason;
};

struct RunOptions {
  /// Record a trajectory row every `record_stride` steps (the final state is always recorded).
  int record_stride = 1;
  std::vector<RunObserver*> observers;
};

/// Runs from theta0 to cfg.t_end. theta0 must have zero mean (relative to its
/// size). When the nonlinearity is on, theta0 is first projected onto the
/// dealiased band. On NaN or growth past blowup_factor the run stops and the
/// last healthy state is returned with `aborted` set.
RunResult run(const RealField& theta0, const SolverConfig& cfg, const RunOptions& options = {});
RunResult run(const SpectralField& theta0, const SolverConfig& cfg, const RunOptions& options = {});

struct PicardConfig {
  int max_iter = 8;
  SolverConfig inner;
  double tolerance = 1e-12;

  void validate() const;
};

/// Iterate m solves the linear problem advected by u^{(m-1)} = R^perp theta^{(m-1)}
/// with data sum_{j <= m} Delta_j theta0 (u^{(0)} = 0). All iterates advance in
/// lockstep over time: at each RK stage iterate m is advected by the stage
/// argument of iterate m-1, so a fixed point of the map is exactly the direct
/// IFRK4 solution with the same dt.
struct PicardResult {
  std::vector<RunResult> iterates;
  /// sup over recorded times of ||theta^{(m+1)} - theta^{(m)}||_2, m = 1..iterates-1.
  std::vector<double> differences;
  bool converged = false;
  /// 1-based index of the first iterate whose difference to its predecessor fell below tolerance (0 if none).
  int converged_iterate = 0;
};

PicardResult picard_run(const RealField& theta0, const PicardConfig& pcfg);

}  // namespace sqg
