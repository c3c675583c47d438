#include "sqg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "sqg/besov.hpp"

namespace sqg {

Integrator parse_integrator(const std::string& name) {
  if (name == "ifrk4" || name == "IFRK4") return Integrator::IFRK4;
  if (name == "ifeuler" || name == "IFEuler") return Integrator::IFEuler;
  throw std::invalid_argument("unknown integrator '" + name + "' (expected ifrk4 or ifeuler)");
}

std::string to_string(Integrator integrator) { return integrator == Integrator::IFRK4 ? "ifrk4" : "ifeuler"; }

void SolverConfig::validate() const {
  grid.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("solver: alpha must lie in (0, 1]");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("solver: kappa must be finite and >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solver: dt must be finite and > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("solver: t_end must be finite and >= 0");
  if (!(blowup_factor > 1.0)) throw std::invalid_argument("solver: blowup_factor must exceed 1");
}

long SolverConfig::step_count() const {
  if (t_end == 0.0) return 0;
  return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

double suggest_dt(const SolverConfig& cfg, double u_max) {
  const double nyq = cfg.grid.nyquist();
  const double rate = cfg.kappa * std::pow(nyq, 2.0 * cfg.alpha) + u_max * nyq;
  return rate > 0.0 ? 0.5 / rate : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------

namespace {

// out = a * x + b * y, coefficientwise, with optional per-mode factors.
void axpby(std::span<Complex> out, std::span<const double> fx, std::span<const Complex> x, double b,
           std::span<const Complex> y) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fx[i] * x[i] + b * y[i];
}

SpectralField scaled(const SpectralField& f, std::span<const double> factor) {
  SpectralField out(f.grid());
  auto o = out.coeffs();
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = factor[i] * c[i];
  return out;
}

bool spectrum_finite(const SpectralField& f) {
  for (const Complex& c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

}  // namespace

QgSolver::QgSolver(SolverConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  symbol_.resize(cfg_.grid.size());
  for_each_mode(cfg_.grid, [&](int ix, int iy, const Wavevector& xi) {
    symbol_[static_cast<std::size_t>(iy) * cfg_.grid.n + ix] = cfg_.kappa * std::pow(xi.norm(), 2.0 * cfg_.alpha);
  });
}

SpectralField QgSolver::transport_term(const SpectralField& carrier, const SpectralField& theta) const {
  if (!cfg_.nonlinear) return SpectralField(theta.grid());
  const VectorSpectral u = riesz_velocity(carrier);
  const VectorSpectral g = gradient(theta);
  RealField product = inverse_transform(u.first);
  {
    const RealField g1 = inverse_transform(g.first);
    const RealField u2 = inverse_transform(u.second);
    const RealField g2 = inverse_transform(g.second);
    auto p = product.samples();
    const auto a = g1.samples();
    const auto b = u2.samples();
    const auto c = g2.samples();
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = p[i] * a[i] + b[i] * c[i];
  }
  SpectralField out = truncate(forward_transform(product), cfg_.dealias);
  out *= -1.0;
  // The transport of a mean-free field by a solenoidal velocity has zero mean.
  out.at(0, 0) = 0.0;
  return out;
}

SpectralField QgSolver::nonlinear_term(const SpectralField& theta) const { return transport_term(theta, theta); }

SpectralField QgSolver::nonlinear_term_divergence(const SpectralField& theta) const {
  if (!cfg_.nonlinear) return SpectralField(theta.grid());
  const VectorSpectral u = riesz_velocity(theta);
  const RealField th = inverse_transform(theta);
  const SpectralField f1 = dealiased_product_spectral(inverse_transform(u.first), th, cfg_.dealias);
  const SpectralField f2 = dealiased_product_spectral(inverse_transform(u.second), th, cfg_.dealias);
  SpectralField out = apply(f1, derivative_multiplier(1)) + apply(f2, derivative_multiplier(2));
  out *= -1.0;
  return out;
}

SpectralField QgSolver::propagate(const SpectralField& f, double tau) const {
  require_same_grid(f.grid(), cfg_.grid, "propagate");
  std::vector<double> factor(symbol_.size());
  for (std::size_t i = 0; i < factor.size(); ++i) factor[i] = std::exp(-symbol_[i] * tau);
  return scaled(f, factor);
}

State QgSolver::step_with(const State& s, double dt, const StageFunction& rhs,
                          std::vector<SpectralField>* stages) const {
  require_same_grid(s.theta.grid(), cfg_.grid, "step");
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  std::vector<double> half(symbol_.size());
  std::vector<double> full(symbol_.size());
  for (std::size_t i = 0; i < half.size(); ++i) {
    half[i] = std::exp(-0.5 * dt * symbol_[i]);
    full[i] = half[i] * half[i];
  }
  if (stages) stages->clear();
  auto eval = [&](int i, const SpectralField& x) {
    if (stages) stages->push_back(x);
    return rhs(i, x);
  };

  const SpectralField& th = s.theta;
  State next{SpectralField(cfg_.grid), s.t + dt};
  auto out = next.theta.coeffs();

  if (cfg_.integrator == Integrator::IFEuler) {
    const SpectralField k1 = eval(0, th);
    const auto a = th.coeffs();
    const auto b = k1.coeffs();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = full[i] * (a[i] + dt * b[i]);
    return next;
  }

  const SpectralField k1 = eval(0, th);
  SpectralField x(cfg_.grid);
  {
    const auto a = th.coeffs();
    const auto b = k1.coeffs();
    auto o = x.coeffs();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = half[i] * (a[i] + 0.5 * dt * b[i]);
  }
  const SpectralField k2 = eval(1, x);
  axpby(x.coeffs(), half, th.coeffs(), 0.5 * dt, k2.coeffs());
  const SpectralField k3 = eval(2, x);
  {
    const auto a = th.coeffs();
    const auto b = k3.coeffs();
    auto o = x.coeffs();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = full[i] * a[i] + dt * half[i] * b[i];
  }
  const SpectralField k4 = eval(3, x);

  const auto a = th.coeffs();
  const auto c1 = k1.coeffs();
  const auto c2 = k2.coeffs();
  const auto c3 = k3.coeffs();
  const auto c4 = k4.coeffs();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = full[i] * a[i] + dt / 6.0 * (full[i] * c1[i] + 2.0 * half[i] * (c2[i] + c3[i]) + c4[i]);
  }
  return next;
}

State QgSolver::step(const State& s, double dt) const {
  return step_with(s, dt, [this](int, const SpectralField& x) { return nonlinear_term(x); }, nullptr);
}

// ---------------------------------------------------------------------------

void NormTrajectory::record(const State& s, const DyadicFamily& fam) {
  first_block = fam.j_min();
  t.push_back(s.t);
  l2.push_back(l2_norm(s.theta));
  linf.push_back(lp_norm(inverse_transform(s.theta), kInfinity));
  std::vector<double> row;
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) row.push_back(l2_norm(block(s.theta, j, fam)));
  blocks.push_back(std::move(row));
}

void NormTrajectory::write_csv(std::ostream& os) const {
  os << "t,l2,linf";
  const std::size_t nb = blocks.empty() ? 0 : blocks.front().size();
  for (std::size_t b = 0; b < nb; ++b) os << ",block_" << first_block + static_cast<int>(b);
  os << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t i = 0; i < t.size(); ++i) {
    put(t[i]);
    os << ',';
    put(l2[i]);
    os << ',';
    put(linf[i]);
    for (double v : blocks[i]) {
      os << ',';
      put(v);
    }
    os << '\n';
  }
}

namespace {

SpectralField prepare_initial(const SpectralField& theta0, const SolverConfig& cfg) {
  require_same_grid(theta0.grid(), cfg.grid, "run");
  if (!spectrum_finite(theta0)) throw std::invalid_argument("run: non-finite initial data");
  if (!is_mean_zero(theta0)) throw std::invalid_argument("run: initial data must have zero mean");
  SpectralField start = cfg.nonlinear ? truncate(theta0, cfg.dealias) : theta0;
  start.at(0, 0) = 0.0;
  return start;
}

double step_size(const SolverConfig& cfg, long k, long steps) {
  return k + 1 < steps ? cfg.dt : cfg.t_end - cfg.dt * static_cast<double>(steps - 1);
}

}  // namespace

RunResult run(const SpectralField& theta0, const SolverConfig& cfg, const RunOptions& options) {
  cfg.validate();
  if (options.record_stride < 1) throw std::invalid_argument("run: record_stride must be >= 1");
  const QgSolver solver(cfg);
  const DyadicFamily fam(cfg.grid);

  RunResult result;
  State state{prepare_initial(theta0, cfg), 0.0};
  const double linf0 = lp_norm(inverse_transform(state.theta), kInfinity);
  result.trajectory.record(state, fam);
  for (RunObserver* o : options.observers) o->on_start(state);

  const long steps = cfg.step_count();
  for (long k = 0; k < steps; ++k) {
    const double dt = step_size(cfg, k, steps);
    State next = solver.step(state, dt);
    next.t = k + 1 == steps ? cfg.t_end : cfg.dt * static_cast<double>(k + 1);
    bool healthy = spectrum_finite(next.theta);
    double linf = 0.0;
    if (healthy) {
      linf = lp_norm(inverse_transform(next.theta), kInfinity);
      healthy = std::isfinite(linf);
    }
    if (!healthy || (linf0 > 0.0 && linf > cfg.blowup_factor * linf0)) {
      result.aborted = true;
      result.abort_time = next.t;
      result.abort_reason = healthy ? "sup norm grew past the blow-up threshold" : "non-finite values";
      break;
    }
    state = std::move(next);
    ++result.steps;
    for (RunObserver* o : options.observers) o->on_step(state, dt);
    if ((k + 1) % options.record_stride == 0 || k + 1 == steps) result.trajectory.record(state, fam);
  }
  if (result.aborted && result.trajectory.t.back() != state.t) result.trajectory.record(state, fam);
  for (RunObserver* o : options.observers) o->on_finish(state, result.aborted);
  result.final_state = std::move(state);
  return result;
}

RunResult run(const RealField& theta0, const SolverConfig& cfg, const RunOptions& options) {
  return run(forward_transform(theta0), cfg, options);
}

// ---------------------------------------------------------------------------

void PicardConfig::validate() const {
  if (max_iter < 1) throw std::invalid_argument("picard: max_iter must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("picard: tolerance must be > 0");
  inner.validate();
}

PicardResult picard_run(const RealField& theta0, const PicardConfig& pcfg) {
  pcfg.validate();
  const SolverConfig& cfg = pcfg.inner;
  const QgSolver solver(cfg);
  const DyadicFamily fam(cfg.grid);
  const SpectralField data = prepare_initial(forward_transform(theta0), cfg);
  const int iters = pcfg.max_iter;

  PicardResult result;
  result.iterates.resize(static_cast<std::size_t>(iters));
  std::vector<State> states;
  for (int m = 1; m <= iters; ++m) {
    SpectralField start(cfg.grid);
    for (int j = fam.j_min(); j <= std::min(m, fam.j_max()); ++j) start += block(data, j, fam);
    states.push_back({std::move(start), 0.0});
  }
  result.differences.assign(static_cast<std::size_t>(std::max(iters - 1, 0)), 0.0);
  auto track = [&] {
    for (int m = 0; m < iters; ++m) {
      result.iterates[static_cast<std::size_t>(m)].trajectory.record(states[static_cast<std::size_t>(m)], fam);
    }
    for (int m = 0; m + 1 < iters; ++m) {
      const double d = l2_norm(states[static_cast<std::size_t>(m + 1)].theta - states[static_cast<std::size_t>(m)].theta);
      result.differences[static_cast<std::size_t>(m)] = std::max(result.differences[static_cast<std::size_t>(m)], d);
    }
  };
  track();

  const long steps = cfg.step_count();
  bool aborted = false;
  std::vector<SpectralField> carrier;
  std::vector<SpectralField> own;
  for (long k = 0; k < steps && !aborted; ++k) {
    const double dt = step_size(cfg, k, steps);
    const double t_next = k + 1 == steps ? cfg.t_end : cfg.dt * static_cast<double>(k + 1);
    carrier.clear();
    for (int m = 0; m < iters; ++m) {
      StageFunction rhs = [&](int i, const SpectralField& x) {
        if (carrier.empty()) return SpectralField(cfg.grid);
        return solver.transport_term(carrier[static_cast<std::size_t>(i)], x);
      };
      State next = solver.step_with(states[static_cast<std::size_t>(m)], dt, rhs, &own);
      next.t = t_next;
      if (!spectrum_finite(next.theta)) {
        aborted = true;
        for (auto& it : result.iterates) {
          it.aborted = true;
          it.abort_time = t_next;
          it.abort_reason = "non-finite values";
        }
        break;
      }
      states[static_cast<std::size_t>(m)] = std::move(next);
      std::swap(carrier, own);
    }
    if (!aborted) {
      for (auto& it : result.iterates) ++it.steps;
      track();
    }
  }
  for (int m = 0; m < iters; ++m) {
    result.iterates[static_cast<std::size_t>(m)].final_state = states[static_cast<std::size_t>(m)];
  }
  for (int m = 0; m + 1 < iters; ++m) {
    if (!aborted && result.differences[static_cast<std::size_t>(m)] < pcfg.tolerance) {
      result.converged = true;
      result.converged_iterate = m + 2;
      break;
    }
  }
  return result;
}

}  // namespace sqg
