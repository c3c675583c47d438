#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sqg/littlewood_paley.hpp"

namespace sqg {

/// Selects ||.||_{B^s_{p,q}} (inhomogeneous) or ||.||_{Bdot^s_{p,q}} (homogeneous).
/// p and q may be kInfinity.
struct BesovIndex {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  bool homogeneous = true;

  void validate() const;
};

/// True when |mean| <= rel_tol * rms of the coefficients.
bool is_mean_zero(const SpectralField& f, double rel_tol = 1e-10);

/// ||Delta_j f||_p for j = fam.first_block(loc) .. fam.j_max().
std::vector<double> block_lp_norms(const SpectralField& f, double p, const DyadicFamily& fam,
                                   Localization loc = Localization::Homogeneous);

/// l^q norm of the sequence 2^{js} * values[j - first_j].
double weighted_lq(std::span<const double> values, int first_j, double s, double q);

/// Homogeneous: l^q over j of 2^{js}||Delta_j f||_p; rejects f with nonzero mean.
/// Inhomogeneous: ||S_0 f||_p plus the l^q sum over j >= 0.
double besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicFamily& fam);
double besov_norm(const RealField& f, const BesovIndex& idx, const DyadicFamily& fam);

/// CSV rows "j,weighted" with weighted = 2^{js}||Delta_j f||_p.
void write_block_norms_csv(std::ostream& os, const SpectralField& f, const BesovIndex& idx,
                           const DyadicFamily& fam);

/// Running Chemin-Lerner norm ||f||_{L~^r(0,t; B^s_{p,q})}.
///
/// Per block it keeps int_0^t ||Delta_j f||_p^r (trapezoidal in time) or, for
/// r = inf, the running supremum. The inhomogeneous variant adds ||f||_{L^r_t L^p}.
/// Block integrals do not depend on s, so accumulators with the same p may share
/// one set of block norms via the *_norms entry points.
class CheminLernerAccumulator {
 public:
  CheminLernerAccumulator(double r, BesovIndex index, const DyadicFamily& fam);

  void start(const SpectralField& f0);
  void accumulate(const SpectralField& f, double dt);

  void start_norms(std::span<const double> block_norms, double field_norm);
  void accumulate_norms(std::span<const double> block_norms, double field_norm, double dt);

  /// l^q of 2^{js} (integral_j)^{1/r}, plus the L^r_t L^p term when inhomogeneous.
  double finalize() const;

  /// Appends a later time interval (integrals add, suprema combine).
  void merge(const CheminLernerAccumulator& later);

  double r() const { return r_; }
  const BesovIndex& index() const { return index_; }
  double elapsed() const { return elapsed_; }
  bool started() const { return started_; }
  std::span<const double> per_block_integrals() const { return integrals_; }
  int first_block() const { return first_; }

 private:
  double power(double v) const;

  double r_;
  BesovIndex index_;
  GridSpec grid_;
  int first_;
  std::vector<double> integrals_;
  std::vector<double> previous_;
  double field_integral_ = 0.0;
  double field_previous_ = 0.0;
  double elapsed_ = 0.0;
  bool started_ = false;
};

struct CriticalIndex {
  double alpha = 0.5;
  double p = 2.0;
  double sigma = 1.0;
};

/// sigma = 2/p + 1 - 2 alpha for alpha in (0, 1], p in [2, inf].
CriticalIndex critical_sigma(double alpha, double p);

/// Dyadic rescaling with lambda = 2: coefficient at xi moves to 2 xi and the
/// amplitude is multiplied by 2^{-sigma}. On the torus ||g(2.)||_p = ||g||_p, so
/// the factor 2^{2 alpha - 1} of the R^2 scaling picks up the volume factor
/// 2^{-2/p} here; interior block norms of the critical space are then invariant.
/// Modes that leave the lattice are dropped.
SpectralField rescale_dyadic(const SpectralField& f, double sigma);

}  // namespace sqg
