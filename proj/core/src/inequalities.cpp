#include "sqg/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace sqg {

PowerForm parse_power_form(const std::string& name) {
  if (name == "signed") return PowerForm::Signed;
  if (name == "modulus") return PowerForm::Modulus;
  throw std::invalid_argument("unknown power form '" + name + "' (expected signed or modulus)");
}

std::string to_string(PowerForm form) { return form == PowerForm::Signed ? "signed" : "modulus"; }

RealField power_field(const RealField& g, double p, PowerForm form) {
  const double e = 0.5 * p;
  RealField h(g.grid());
  const auto src = g.samples();
  auto dst = h.samples();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double x = src[i];
    const double mag = e == 1.0 ? std::abs(x) : std::pow(std::abs(x), e);
    dst[i] = form == PowerForm::Signed ? std::copysign(mag, x) : mag;
  }
  return h;
}

double Shells::weighted(double a) const {
  double sum = 0.0;
  for (const auto& [r_sq, mass] : entries) {
    if (a == 0.0) {
      sum += mass;
    } else if (r_sq > 0.0) {
      sum += mass * (a == 1.0 ? r_sq : std::pow(r_sq, a));
    }
  }
  return area * sum;
}

namespace {

void require_p_at_least_2(double p, const char* what) {
  if (!(p >= 2.0) || std::isinf(p)) throw std::invalid_argument(std::string(what) + ": p must lie in [2, inf)");
}

double squared_norm_with_symbol(const SpectralField& f, double a) {
  return std::pow(l2_norm(apply_lambda(f, a)), 2);
}

// |c|^2 summed over each lattice shell m1^2 + m2^2 = const, so that
// ||Lambda^a f||_2^2 costs one pow per occupied shell.
Shells shell_sums(const SpectralField& f) {
  const GridSpec& grid = f.grid();
  const int half = grid.n / 2;
  std::vector<double> by_m2(static_cast<std::size_t>(2 * half * half + 1), 0.0);
  for (int iy = 0; iy < grid.n; ++iy) {
    const int m2 = grid.frequency_index(iy);
    for (int ix = 0; ix < grid.n; ++ix) {
      const int m1 = grid.frequency_index(ix);
      by_m2[static_cast<std::size_t>(m1 * m1 + m2 * m2)] += std::norm(f.at(ix, iy));
    }
  }
  const double k0_sq = grid.base_wavenumber() * grid.base_wavenumber();
  Shells shells;
  shells.area = grid.period * grid.period;
  for (std::size_t i = 0; i < by_m2.size(); ++i) {
    if (by_m2[i] != 0.0) shells.entries.emplace_back(k0_sq * static_cast<double>(i), by_m2[i]);
  }
  return shells;
}

// d/dx_k with the full symbol, Nyquist lines included: used for norms only.
Multiplier full_derivative(int k) {
  return {"full-derivative", [k](const Wavevector& xi) { return Complex(0.0, k == 1 ? xi.k1 : xi.k2); }, false};
}

}  // namespace

// ---------------------------------------------------------------------------

BernsteinProbe::BernsteinProbe(const RealField& f, int j, const DyadicFamily& fam) : j_(j) {
  require_same_grid(f.grid(), fam.grid(), "BernsteinProbe");
  spectrum_ = block(forward_transform(f), j, fam);
  block_ = inverse_transform(spectrum_);
  vanishes_ = lp_norm(block_, kInfinity) == 0.0;
}

double BernsteinProbe::block_norm(double p) {
  auto it = norms_.find(p);
  if (it == norms_.end()) it = norms_.emplace(p, lp_norm(block_, p)).first;
  return it->second;
}

const BernsteinProbe::Power& BernsteinProbe::power(double p, PowerForm form) {
  const auto key = std::make_pair(p, static_cast<int>(form));
  auto it = powers_.find(key);
  if (it == powers_.end()) {
    SpectralField h = forward_transform(power_field(block_, p, form));
    Shells shells = shell_sums(h);
    it = powers_.emplace(key, Power{std::move(h), std::move(shells)}).first;
  }
  return it->second;
}

Triple BernsteinProbe::bernstein(double p, double a, PowerForm form) {
  require_p_at_least_2(p, "bernstein_triple");
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("bernstein_triple: a must lie in [0, 1]");
  if (vanishes_) return {};
  const double scale = std::exp2(2.0 * a * j_ / p) * block_norm(p);
  const double middle = std::pow(power(p, form).shells.weighted(a), 1.0 / p);
  return {scale, middle, scale};
}

Triple BernsteinProbe::gradient_form(double p, PowerForm form) {
  if (!(p > 2.0) || std::isinf(p)) throw std::invalid_argument("prop31_triple: p must lie in (2, inf)");
  if (vanishes_) return {};
  const SpectralField& h = power(p, form).spectrum;
  const double d1 = l2_norm(apply(h, full_derivative(1)));
  const double d2 = l2_norm(apply(h, full_derivative(2)));
  const double scale = std::exp2(2.0 * j_ / p) * block_norm(p);
  return {scale, std::pow(d1 * d1 + d2 * d2, 1.0 / p), scale};
}

Triple bernstein_triple(const RealField& f, int j, double p, double a, const DyadicFamily& fam, PowerForm form) {
  require_p_at_least_2(p, "bernstein_triple");
  return BernsteinProbe(f, j, fam).bernstein(p, a, form);
}

Triple prop31_triple(const RealField& f, int j, double p, const DyadicFamily& fam, PowerForm form) {
  if (!(p > 2.0)) throw std::invalid_argument("prop31_triple: p must lie in (2, inf)");
  return BernsteinProbe(f, j, fam).gradient_form(p, form);
}

// ---------------------------------------------------------------------------

double PositivityGap::scale() const { return std::max(std::abs(lhs), std::abs(rhs)); }

PositivityGap positivity_gap(const RealField& f, double s, double p, PowerForm form) {
  if (!(s >= 0.0 && s <= 2.0)) throw std::invalid_argument("positivity_gap: s must lie in [0, 2]");
  require_p_at_least_2(p, "positivity_gap");
  if (!f.all_finite()) throw std::invalid_argument("positivity_gap: non-finite field");
  const SpectralField fh = forward_transform(f);
  const RealField weight = power_field(f, 2.0 * (p - 1.0), PowerForm::Signed);  // |f|^{p-2} f
  const double lhs = inner_product(weight, inverse_transform(apply_lambda(fh, s)));
  const double rhs = 2.0 / p * squared_norm_with_symbol(forward_transform(power_field(f, p, form)), 0.5 * s);
  return {lhs, rhs};
}

DissipationChain dissipation_chain(const RealField& theta, int j, double p, double a, const DyadicFamily& fam,
                                   double c_bernstein, PowerForm form) {
  require_p_at_least_2(p, "dissipation_chain");
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("dissipation_chain: a must lie in (0, 1]");
  require_same_grid(theta.grid(), fam.grid(), "dissipation_chain");
  return BernsteinProbe(theta, j, fam).dissipation(p, a, c_bernstein, form);
}

DissipationChain BernsteinProbe::dissipation(double p, double a, double c_bernstein, PowerForm form) {
  require_p_at_least_2(p, "dissipation_chain");
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("dissipation_chain: a must lie in (0, 1]");
  if (vanishes_) return {};
  auto it = weights_.find(p);
  if (it == weights_.end()) it = weights_.emplace(p, power_field(block_, 2.0 * (p - 1.0), PowerForm::Signed)).first;
  auto lt = lifted_.find(a);
  if (lt == lifted_.end()) lt = lifted_.emplace(a, inverse_transform(apply_lambda(spectrum_, 2.0 * a))).first;
  DissipationChain chain;
  chain.a = p * inner_product(it->second, lt->second);
  chain.b = 2.0 * power(p, form).shells.weighted(a);
  chain.c = 2.0 * std::pow(c_bernstein, p) * std::exp2(2.0 * a * j_) * std::pow(block_norm(p), p);
  return chain;
}

// ---------------------------------------------------------------------------

void CompositionParams::validate() const {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("composition: p must lie in [1, inf)");
  if (!(ell > 1.0 && ell <= r && std::isfinite(r))) throw std::invalid_argument("composition: need 1 < ell <= r < inf");
  if (!(m > 1.0 && std::isfinite(m))) throw std::invalid_argument("composition: need 1 < m < inf");
  if (!(s >= 0.0 && s < std::min(p, 2.0))) throw std::invalid_argument("composition: s must lie in [0, min(p, 2))");
  const double defect = 1.0 / ell - 1.0 / r - (p - 1.0) / m;
  if (std::abs(defect) > 1e-12) {
    throw std::invalid_argument("composition: exponents violate 1/ell = 1/r + (p-1)/m (defect " +
                                std::to_string(defect) + ")");
  }
}

double composition_ratio(const RealField& z, const CompositionParams& params, const DyadicFamily& fam) {
  params.validate();
  RealField powered(z.grid());
  const auto src = z.samples();
  auto dst = powered.samples();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::pow(std::abs(src[i]), params.p);
  SpectralField ph = forward_transform(powered);
  ph.at(0, 0) = 0.0;
  const SpectralField zh = forward_transform(z);
  const double lhs = besov_norm(ph, {params.s, params.ell, 2.0, true}, fam);
  const double rhs = std::pow(besov_norm(zh, {0.0, params.m, 2.0, true}, fam), params.p - 1.0) *
                     besov_norm(zh, {params.s, params.r, 2.0, true}, fam);
  return safe_ratio(lhs, rhs);
}

// ---------------------------------------------------------------------------

VectorField velocity_field(const RealField& theta) {
  const VectorSpectral u = riesz_velocity(forward_transform(theta));
  return {inverse_transform(u.first), inverse_transform(u.second)};
}

RealField commutator(const VectorField& u, const RealField& v, int j, const DyadicFamily& fam, DealiasRule rule) {
  require_same_grid(u.first.grid(), v.grid(), "commutator");
  require_same_grid(u.second.grid(), v.grid(), "commutator");
  require_same_grid(v.grid(), fam.grid(), "commutator");
  const VectorSpectral uh{forward_transform(u.first), forward_transform(u.second)};
  const double size = (uh.first.max_abs() + uh.second.max_abs()) * v.grid().nyquist();
  if (divergence_defect(uh) > 1e-10 * std::max(size, 1e-300)) {
    throw std::invalid_argument("commutator: advecting field is not divergence-free");
  }
  const SpectralField vh = forward_transform(v);
  const VectorSpectral grad_v = gradient(vh);
  const VectorSpectral grad_block = gradient(block(vh, j, fam));

  SpectralField transported = dealiased_product_spectral(u.first, inverse_transform(grad_block.first), rule);
  transported += dealiased_product_spectral(u.second, inverse_transform(grad_block.second), rule);
  SpectralField full = dealiased_product_spectral(u.first, inverse_transform(grad_v.first), rule);
  full += dealiased_product_spectral(u.second, inverse_transform(grad_v.second), rule);
  return inverse_transform(transported - block(full, j, fam));
}

double commutator_ratio(const RealField& theta, const RealField& v, double p, double q, double alpha,
                        const DyadicFamily& fam, DealiasRule rule) {
  const CriticalIndex crit = critical_sigma(alpha, p);
  if (!(q >= 1.0)) throw std::invalid_argument("commutator_ratio: q must be >= 1");
  const VectorField u = velocity_field(theta);
  std::vector<double> norms;
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) norms.push_back(lp_norm(commutator(u, v, j, fam, rule), p));
  const double lhs = weighted_lq(norms, fam.j_min(), crit.sigma, q);
  const BesovIndex idx{2.0 / p + 1.0 - alpha, p, q, true};
  const double u_norm = besov_norm(u.first, idx, fam) + besov_norm(u.second, idx, fam);
  const double rhs = u_norm * besov_norm(v, idx, fam);
  return safe_ratio(lhs, rhs);
}

double product_ratio_A1(const RealField& u, const RealField& v, double s, double p, double q,
                        const DyadicFamily& fam, DealiasRule rule) {
  require_p_at_least_2(p, "product_ratio_A1");
  if (!(s > -2.0 / p)) throw std::invalid_argument("product_ratio_A1: s must exceed -2/p");
  const double lhs = besov_norm(dealiased_product_spectral(u, v, rule), {s, p, q, false}, fam);
  const BesovIndex shifted{2.0 / p + s, p, q, false};
  const double rhs = lp_norm(u, p) * besov_norm(v, shifted, fam) + lp_norm(v, p) * besov_norm(u, shifted, fam);
  return safe_ratio(lhs, rhs);
}

// ---------------------------------------------------------------------------

double safe_ratio(double lhs, double rhs) {
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

void RatioReport::add(std::vector<double> params, double lhs, double rhs) {
  samples.push_back({std::move(params), lhs, rhs, safe_ratio(lhs, rhs)});
}

double RatioReport::c_emp() const {
  double best = std::numeric_limits<double>::infinity();
  for (const RatioSample& s : samples) {
    if (s.lhs == 0.0 && s.rhs == 0.0) continue;
    best = std::min(best, s.ratio);
  }
  return std::isinf(best) ? 0.0 : best;
}

double RatioReport::C_emp() const {
  double best = -std::numeric_limits<double>::infinity();
  for (const RatioSample& s : samples) {
    if (s.lhs == 0.0 && s.rhs == 0.0) continue;
    best = std::max(best, s.ratio);
  }
  return std::isinf(best) && best < 0 ? 0.0 : best;
}

void write_csv(std::ostream& os, const RatioReport& report) {
  for (const std::string& name : report.param_names) os << name << ',';
  os << "lhs,rhs,ratio\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (const RatioSample& s : report.samples) {
    for (double v : s.params) {
      put(v);
      os << ',';
    }
    put(s.lhs);
    os << ',';
    put(s.rhs);
    os << ',';
    put(s.ratio);
    os << '\n';
  }
}

}  // namespace sqg
