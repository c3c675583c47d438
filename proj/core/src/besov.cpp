#include "sqg/besov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sqg {

void BesovIndex::validate() const {
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("besov index: p and q must be >= 1");
  if (!std::isfinite(s)) throw std::invalid_argument("besov index: s must be finite");
}

bool is_mean_zero(const SpectralField& f, double rel_tol) {
  double sum = 0.0;
  for (const Complex& c : f.coeffs()) sum += std::norm(c);
  return std::abs(f.mean()) <= rel_tol * std::sqrt(sum);
}

std::vector<double> block_lp_norms(const SpectralField& f, double p, const DyadicFamily& fam, Localization loc) {
  std::vector<double> norms;
  for (int j = fam.first_block(loc); j <= fam.j_max(); ++j) {
    const SpectralField b = block(f, j, fam, loc);
    norms.push_back(p == 2.0 ? l2_norm(b) : lp_norm(inverse_transform(b), p));
  }
  return norms;
}

double weighted_lq(std::span<const double> values, int first_j, double s, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      m = std::max(m, std::exp2(s * (first_j + static_cast<int>(i))) * values[i]);
    }
    return m;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += std::pow(std::exp2(s * (first_j + static_cast<int>(i))) * values[i], q);
  }
  return std::pow(sum, 1.0 / q);
}

double besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicFamily& fam) {
  idx.validate();
  require_same_grid(f.grid(), fam.grid(), "besov_norm");
  if (idx.homogeneous) {
    if (!is_mean_zero(f)) {
      throw std::invalid_argument("besov_norm: homogeneous norm requires a mean-zero field (mean = " +
                                  std::to_string(f.mean().real()) + ")");
    }
    return weighted_lq(block_lp_norms(f, idx.p, fam), fam.j_min(), idx.s, idx.q);
  }
  const auto norms = block_lp_norms(f, idx.p, fam, Localization::Inhomogeneous);
  const SpectralField low = low_pass(f, 0, fam);
  const double low_norm = idx.p == 2.0 ? l2_norm(low) : lp_norm(inverse_transform(low), idx.p);
  return low_norm + weighted_lq(norms, 0, idx.s, idx.q);
}

double besov_norm(const RealField& f, const BesovIndex& idx, const DyadicFamily& fam) {
  return besov_norm(forward_transform(f), idx, fam);
}

void write_block_norms_csv(std::ostream& os, const SpectralField& f, const BesovIndex& idx, const DyadicFamily& fam) {
  const Localization loc = idx.homogeneous ? Localization::Homogeneous : Localization::Inhomogeneous;
  const auto norms = block_lp_norms(f, idx.p, fam, loc);
  const int first = fam.first_block(loc);
  os << "j,weighted\n";
  char buf[64];
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const int j = first + static_cast<int>(i);
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", j, std::exp2(idx.s * j) * norms[i]);
    os << buf;
  }
}

// ---------------------------------------------------------------------------

CheminLernerAccumulator::CheminLernerAccumulator(double r, BesovIndex index, const DyadicFamily& fam)
    : r_(r), index_(index), grid_(fam.grid()), first_(fam.j_min()) {
  if (!(r >= 1.0)) throw std::invalid_argument("Chemin-Lerner: time exponent r must be >= 1");
  index_.validate();
  integrals_.assign(static_cast<std::size_t>(fam.block_count(Localization::Homogeneous)), 0.0);
}

double CheminLernerAccumulator::power(double v) const { return r_ == 1.0 ? v : std::pow(v, r_); }

void CheminLernerAccumulator::start_norms(std::span<const double> block_norms, double field_norm) {
  if (block_norms.size() != integrals_.size()) throw std::invalid_argument("Chemin-Lerner: block count mismatch");
  previous_.assign(block_norms.begin(), block_norms.end());
  field_previous_ = field_norm;
  std::fill(integrals_.begin(), integrals_.end(), 0.0);
  field_integral_ = 0.0;
  elapsed_ = 0.0;
  if (std::isinf(r_)) {
    integrals_ = previous_;
    field_integral_ = field_norm;
  }
  started_ = true;
}

void CheminLernerAccumulator::accumulate_norms(std::span<const double> block_norms, double field_norm, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("Chemin-Lerner: dt must be > 0");
  if (block_norms.size() != integrals_.size()) throw std::invalid_argument("Chemin-Lerner: block count mismatch");
  if (!started_) throw std::logic_error("Chemin-Lerner: accumulate before start");
  for (std::size_t i = 0; i < integrals_.size(); ++i) {
    if (std::isinf(r_)) {
      integrals_[i] = std::max(integrals_[i], block_norms[i]);
    } else {
      integrals_[i] += 0.5 * dt * (power(previous_[i]) + power(block_norms[i]));
    }
    previous_[i] = block_norms[i];
  }
  if (std::isinf(r_)) {
    field_integral_ = std::max(field_integral_, field_norm);
  } else {
    field_integral_ += 0.5 * dt * (power(field_previous_) + power(field_norm));
  }
  field_previous_ = field_norm;
  elapsed_ += dt;
}

void CheminLernerAccumulator::start(const SpectralField& f0) {
  require_same_grid(f0.grid(), grid_, "Chemin-Lerner start");
  const DyadicFamily fam(grid_);
  const double whole = index_.homogeneous ? 0.0 : lp_norm(inverse_transform(f0), index_.p);
  start_norms(block_lp_norms(f0, index_.p, fam), whole);
}

void CheminLernerAccumulator::accumulate(const SpectralField& f, double dt) {
  require_same_grid(f.grid(), grid_, "Chemin-Lerner accumulate");
  const DyadicFamily fam(grid_);
  const double whole = index_.homogeneous ? 0.0 : lp_norm(inverse_transform(f), index_.p);
  accumulate_norms(block_lp_norms(f, index_.p, fam), whole, dt);
}

double CheminLernerAccumulator::finalize() const {
  std::vector<double> rooted(integrals_.size());
  for (std::size_t i = 0; i < integrals_.size(); ++i) {
    rooted[i] = std::isinf(r_) || r_ == 1.0 ? integrals_[i] : std::pow(integrals_[i], 1.0 / r_);
  }
  double value = weighted_lq(rooted, first_, index_.s, index_.q);
  if (!index_.homogeneous) {
    value += std::isinf(r_) || r_ == 1.0 ? field_integral_ : std::pow(field_integral_, 1.0 / r_);
  }
  return value;
}

void CheminLernerAccumulator::merge(const CheminLernerAccumulator& later) {
  if (later.r_ != r_ || later.integrals_.size() != integrals_.size() || !(later.grid_ == grid_)) {
    throw std::invalid_argument("Chemin-Lerner merge: incompatible accumulators");
  }
  for (std::size_t i = 0; i < integrals_.size(); ++i) {
    integrals_[i] = std::isinf(r_) ? std::max(integrals_[i], later.integrals_[i]) : integrals_[i] + later.integrals_[i];
  }
  field_integral_ = std::isinf(r_) ? std::max(field_integral_, later.field_integral_)
                                   : field_integral_ + later.field_integral_;
  previous_ = later.previous_;
  field_previous_ = later.field_previous_;
  elapsed_ += later.elapsed_;
  started_ = started_ || later.started_;
}

// ---------------------------------------------------------------------------

CriticalIndex critical_sigma(double alpha, double p) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("critical_sigma: alpha must lie in (0, 1]");
  if (!(p >= 2.0)) throw std::invalid_argument("critical_sigma: p must be >= 2");
  const double two_over_p = std::isinf(p) ? 0.0 : 2.0 / p;
  return {alpha, p, two_over_p + 1.0 - 2.0 * alpha};
}

SpectralField rescale_dyadic(const SpectralField& f, double sigma) {
  const GridSpec& grid = f.grid();
  SpectralField out(grid);
  const double amplitude = std::exp2(-sigma);
  const int half = grid.n / 2;
  for (int m2 = -half; m2 < half; ++m2) {
    for (int m1 = -half; m1 < half; ++m1) {
      const int t1 = 2 * m1;
      const int t2 = 2 * m2;
      if (t1 <= -half || t1 >= half || t2 <= -half || t2 >= half) continue;
      out.set_mode(t1, t2, amplitude * f.mode(m1, m2));
    }
  }
  return out;
}

}  // namespace sqg
