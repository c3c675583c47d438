#include "sqg/wellposedness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sqg/ensemble.hpp"
#include "sqg/inequalities.hpp"
#include "sqg/parallel.hpp"

namespace sqg {

void ExistenceTimeConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("existence time: alpha must lie in (0, 1/2]");
  if (!(p >= 2.0) || std::isinf(p)) throw std::invalid_argument("existence time: p must lie in [2, inf)");
  if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("existence time: q must lie in [1, inf)");
  if (!(kappa > 0.0)) throw std::invalid_argument("existence time: kappa must be > 0");
  if (!(c_p > 0.0)) throw std::invalid_argument("existence time: c_p must be > 0");
  if (!(c_small > 0.0)) throw std::invalid_argument("existence time: c_small must be > 0");
}

namespace {

// Weighted block norms 2^{j sigma} ||Delta_j theta0||_p and their decay rates.
struct Profile {
  std::vector<double> weights;
  std::vector<double> rates;
};

Profile profile(const SpectralField& theta0, const ExistenceTimeConfig& cfg, const DyadicFamily& fam) {
  const double sigma = cfg.sigma();
  const auto norms = block_lp_norms(theta0, cfg.p, fam);
  Profile out;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const int j = fam.j_min() + static_cast<int>(i);
    out.weights.push_back(std::exp2(sigma * j) * norms[i]);
    out.rates.push_back(cfg.kappa * cfg.c_p * std::exp2(2.0 * cfg.alpha * j));
  }
  return out;
}

double evaluate(const Profile& prof, double T, double q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < prof.weights.size(); ++i) {
    const double e = -std::expm1(-prof.rates[i] * T);
    sum += std::pow(std::sqrt(e) * prof.weights[i], q);
  }
  return std::pow(sum, 1.0 / q);
}

}  // namespace

double existence_functional(const SpectralField& theta0, double T, const ExistenceTimeConfig& cfg,
                            const DyadicFamily& fam) {
  cfg.validate();
  if (!(T >= 0.0)) throw std::invalid_argument("existence_functional: T must be >= 0");
  require_same_grid(theta0.grid(), fam.grid(), "existence_functional");
  return evaluate(profile(theta0, cfg, fam), T, cfg.q);
}

double existence_functional(const RealField& theta0, double T, const ExistenceTimeConfig& cfg,
                            const DyadicFamily& fam) {
  return existence_functional(forward_transform(theta0), T, cfg, fam);
}

ExistenceTime existence_time(const SpectralField& theta0, const ExistenceTimeConfig& cfg, const DyadicFamily& fam,
                             double rel_tol) {
  cfg.validate();
  require_same_grid(theta0.grid(), fam.grid(), "existence_time");
  ExistenceTime out;
  out.sigma = cfg.sigma();
  out.norm = besov_norm(theta0, {out.sigma, cfg.p, cfg.q, true}, fam);
  out.threshold = cfg.c_small * cfg.kappa;
  if (out.norm <= out.threshold) {
    out.global = true;
    out.t0 = kInfinity;
    return out;
  }
  const Profile prof = profile(theta0, cfg, fam);
  const double fastest = *std::max_element(prof.rates.begin(), prof.rates.end());
  double lo = 0.0;
  double hi = 1.0 / fastest;
  while (evaluate(prof, hi, cfg.q) <= out.threshold) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("existence_time: bracket did not close");
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (evaluate(prof, mid, cfg.q) <= out.threshold) lo = mid;
    else hi = mid;
    ++out.bisection_steps;
  }
  out.t0 = 0.5 * (lo + hi);
  return out;
}

ExistenceTime existence_time(const RealField& theta0, const ExistenceTimeConfig& cfg, const DyadicFamily& fam,
                             double rel_tol) {
  return existence_time(forward_transform(theta0), cfg, fam, rel_tol);
}

bool smallness_check(const SpectralField& theta0, double epsilon, double kappa, const BesovIndex& sigma_index,
                     const DyadicFamily& fam) {
  if (!sigma_index.homogeneous) throw std::invalid_argument("smallness_check: needs a homogeneous index");
  return besov_norm(theta0, sigma_index, fam) <= epsilon * kappa;
}

bool smallness_check(const RealField& theta0, double epsilon, double kappa, const BesovIndex& sigma_index,
                     const DyadicFamily& fam) {
  return smallness_check(forward_transform(theta0), epsilon, kappa, sigma_index, fam);
}

// ---------------------------------------------------------------------------

AprioriMonitor::AprioriMonitor(const GridSpec& grid, double alpha, double p, double q, double kappa, double c1)
    : fam_(grid),
      p_(p),
      kappa_(kappa),
      c1_(c1),
      sigma_index_{critical_sigma(alpha, p).sigma, p, q, false},
      linf_(kInfinity, sigma_index_, fam_),
      l1_(1.0, BesovIndex{2.0 / p + 1.0, p, q, true}, fam_) {
  if (!(c1 >= 0.0)) throw std::invalid_argument("apriori monitor: c1 must be >= 0");
  if (!(kappa >= 0.0)) throw std::invalid_argument("apriori monitor: kappa must be >= 0");
}

void AprioriMonitor::update(const State& s, double dt, bool first) {
  const auto norms = block_lp_norms(s.theta, p_, fam_);
  const double whole = p_ == 2.0 ? l2_norm(s.theta) : lp_norm(inverse_transform(s.theta), p_);
  if (first) {
    linf_.start_norms(norms, whole);
    l1_.start_norms(norms, whole);
    verdict_ = {};
    history_.clear();
    verdict_.initial_norm = besov_norm(s.theta, sigma_index_, fam_);
  } else {
    linf_.accumulate_norms(norms, whole, dt);
    l1_.accumulate_norms(norms, whole, dt);
  }
  verdict_.final_linf = linf_.finalize();
  verdict_.final_l1 = l1_.finalize();
  const double lhs = verdict_.final_linf + c1_ * kappa_ * verdict_.final_l1;
  const double ratio = safe_ratio(lhs, 4.0 * verdict_.initial_norm);
  history_.emplace_back(s.t, ratio);
  if (ratio > verdict_.max_ratio) {
    verdict_.max_ratio = ratio;
    verdict_.max_ratio_time = s.t;
  }
  if (ratio > 1.0 && verdict_.pass) {
    verdict_.pass = false;
    verdict_.first_violation_time = s.t;
  }
}

void AprioriMonitor::on_start(const State& s) { update(s, 0.0, true); }

void AprioriMonitor::on_step(const State& s, double dt) { update(s, dt, false); }

// ---------------------------------------------------------------------------

EmpiricalConstants estimate_constants(const GridSpec& grid, double alpha, double p, double q,
                                      const ConstantsSpec& spec) {
  if (spec.count < 1) throw std::invalid_argument("estimate_constants: count must be >= 1");
  const DyadicFamily fam(grid);
  const int j_lo = fam.j_min() + 1;
  const int j_hi = fam.j_max() - 1;
  EnsembleSpec ens;
  ens.seed = substream_seed(spec.seed, "constants");
  ens.count = spec.count;
  ens.j_lo = j_lo;
  ens.j_hi = j_hi;
  ens.max_index = dealias_cutoff(grid, DealiasRule::TwoThirds) / 2;
  const auto fields = generate_ensemble(ens, grid, spec.threads);

  std::vector<double> lower(fields.size(), std::numeric_limits<double>::infinity());
  std::vector<double> comm(fields.size(), 0.0);
  parallel_for(fields.size(), spec.threads, [&](std::size_t i) {
    for (int j = j_lo; j <= j_hi; ++j) {
      BernsteinProbe probe(fields[i], j, fam);
      if (probe.vanishes()) continue;
      lower[i] = std::min(lower[i], probe.bernstein(p, alpha).ratio());
    }
    const RealField& partner = fields[(i + 1) % fields.size()];
    comm[i] = commutator_ratio(fields[i], partner, p, q, alpha, fam);
  });
  EmpiricalConstants out;
  out.c_bernstein = *std::min_element(lower.begin(), lower.end());
  out.c_p = 2.0 / p * std::pow(out.c_bernstein, p);
  out.commutator = *std::max_element(comm.begin(), comm.end());
  out.c1 = out.c_p;
  out.c_small = out.commutator > 0.0 ? out.c1 / (8.0 * out.commutator) : out.c1;
  return out;
}

}  // namespace sqg
