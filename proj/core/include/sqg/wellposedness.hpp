#pragma once

#include <cstdint>
#include <vector>

#include "sqg/besov.hpp"
#include "sqg/solver.hpp"

namespace sqg {

/// Constants of the existence-time functional.
///   c_p:     decay rate constant, ||Delta_j theta(t)||_p <~ exp(-kappa c_p 2^{2 alpha j} t)
///   c_small: threshold constant, global existence when ||theta0||_{Bdot^sigma} <= c_small kappa
struct ExistenceTimeConfig {
  double alpha = 0.5;
  double p = 2.0;
  double q = 2.0;
  double kappa = 1.0;
  double c_p = 0.5;
  double c_small = 0.05;

  /// alpha in (0, 1/2], p in [2, inf), q in [1, inf), kappa, c_p, c_small > 0.
  void validate() const;
  double sigma() const { return critical_sigma(alpha, p).sigma; }
};

/// G(T) = || (1 - exp(-kappa c_p 2^{2 alpha j} T))^{1/2} 2^{j sigma} ||Delta_j theta0||_p ||_{l^q}.
double existence_functional(const SpectralField& theta0, double T, const ExistenceTimeConfig& cfg,
                            const DyadicFamily& fam);
double existence_functional(const RealField& theta0, double T, const ExistenceTimeConfig& cfg,
                            const DyadicFamily& fam);

struct ExistenceTime {
  double sigma = 0.0;
  double norm = 0.0;       ///< ||theta0||_{Bdot^sigma_{p,q}}
  double threshold = 0.0;  ///< c_small * kappa
  double t0 = 0.0;         ///< kInfinity on the global branch
  bool global = false;
  int bisection_steps = 0;
};

/// T0 = sup{T : G(T) <= c_small kappa}; kInfinity when the norm itself is below the
/// threshold. Otherwise the bracket [0, T_hi] is grown by doubling and bisected
/// to relative width `rel_tol`.
ExistenceTime existence_time(const SpectralField& theta0, const ExistenceTimeConfig& cfg, const DyadicFamily& fam,
                             double rel_tol = 1e-12);
ExistenceTime existence_time(const RealField& theta0, const ExistenceTimeConfig& cfg, const DyadicFamily& fam,
                             double rel_tol = 1e-12);

/// ||theta0||_{Bdot^sigma_{p,q}} <= epsilon * kappa. Rejects data with nonzero mean.
bool smallness_check(const SpectralField& theta0, double epsilon, double kappa, const BesovIndex& sigma_index,
                     const DyadicFamily& fam);
bool smallness_check(const RealField& theta0, double epsilon, double kappa, const BesovIndex& sigma_index,
                     const DyadicFamily& fam);

/// Outcome of tracking L~^inf(B^sigma) + c1 kappa L~^1(Bdot^{2/p+1}) against 4 ||theta0||_{B^sigma}.
struct AprioriVerdict {
  bool pass = true;
  double initial_norm = 0.0;
  double max_ratio = 0.0;
  double max_ratio_time = 0.0;
  double first_violation_time = -1.0;
  double final_linf = 0.0;
  double final_l1 = 0.0;
};

/// Observer that updates both Chemin-Lerner accumulators after every step and
/// records the ratio (linf + c1 kappa l1) / (4 ||theta0||_{B^sigma}).
class AprioriMonitor final : public RunObserver {
 public:
  AprioriMonitor(const GridSpec& grid, double alpha, double p, double q, double kappa, double c1);

  void on_start(const State& s) override;
  void on_step(const State& s, double dt) override;

  const AprioriVerdict& verdict() const { return verdict_; }
  const CheminLernerAccumulator& linf_accumulator() const { return linf_; }
  const CheminLernerAccumulator& l1_accumulator() const { return l1_; }
  double c1() const { return c1_; }
  /// (time, ratio) after every step, starting with t = 0.
  const std::vector<std::pair<double, double>>& history() const { return history_; }

 private:
  void update(const State& s, double dt, bool first);

  DyadicFamily fam_;
  double p_;
  double kappa_;
  double c1_;
  BesovIndex sigma_index_;
  CheminLernerAccumulator linf_;
  CheminLernerAccumulator l1_;
  AprioriVerdict verdict_;
  std::vector<std::pair<double, double>> history_;
};

/// Constants measured on a seeded ensemble for (alpha, p, q) on one grid.
///   c_bernstein: min ratio of the lower Bernstein bound at a = alpha over blocks
///                j_min + 1 .. j_max - 1 (fields span those blocks)
///   c_p:         (2/p) c_bernstein^p, the decay rate that the dissipation chain yields
///   commutator:  max commutator ratio
///   c1:          c_p
///   c_small:     c1 / (8 commutator)
struct EmpiricalConstants {
  double c_bernstein = 0.0;
  double c_p = 0.0;
  double commutator = 0.0;
  double c1 = 0.0;
  double c_small = 0.0;
};

struct ConstantsSpec {
  std::uint64_t seed = 20240601;
  int count = 24;
  unsigned threads = 0;
};

EmpiricalConstants estimate_constants(const GridSpec& grid, double alpha, double p, double q,
                                      const ConstantsSpec& spec = {});

}  // namespace sqg
