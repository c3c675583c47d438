#include "sqg/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace sqg {

namespace {

// FFTW's planner is not thread-safe; fftw_execute_dft on an existing plan is.
class PlanCache {
 public:
  struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
  };

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  const Plans& get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    const std::size_t count = static_cast<std::size_t>(n) * n;
    auto* in = fftw_alloc_complex(count);
    auto* out = fftw_alloc_complex(count);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    p.forward = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
    return plans_.emplace(n, p).first->second;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

 private:
  std::mutex mutex_;
  std::map<int, Plans> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

SpectralField forward_transform(const RealField& f) {
  if (!f.all_finite()) {
    throw std::invalid_argument("forward_transform: field contains non-finite samples");
  }
  const GridSpec& grid = f.grid();
  std::vector<Complex> in(f.samples().begin(), f.samples().end());
  std::vector<Complex> out(grid.size());
  fftw_execute_dft(PlanCache::instance().get(grid.n).forward, as_fftw(in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (Complex& c : out) c *= scale;
  return SpectralField(grid, std::move(out));
}

RealField inverse_transform(const SpectralField& f) {
  const GridSpec& grid = f.grid();
  std::vector<Complex> in(f.coeffs().begin(), f.coeffs().end());
  std::vector<Complex> out(grid.size());
  fftw_execute_dft(PlanCache::instance().get(grid.n).backward, as_fftw(in.data()), as_fftw(out.data()));
  std::vector<double> samples(grid.size());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = out[i].real();
  return RealField(grid, std::move(samples));
}

// ---------------------------------------------------------------------------

SpectralField apply(const SpectralField& f, const Multiplier& m) {
  SpectralField out(f.grid());
  const int nyq = f.grid().n / 2;
  for_each_mode(f.grid(), [&](int ix, int iy, const Wavevector& xi) {
    if (m.odd && (ix == nyq || iy == nyq)) return;
    out.at(ix, iy) = m.symbol(xi) * f.at(ix, iy);
  });
  return out;
}

Multiplier lambda_multiplier(double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("lambda: exponent must be >= 0");
  return {"Lambda^" + std::to_string(a),
          [a](const Wavevector& xi) -> Complex {
            const double r = xi.norm();
            if (r == 0.0) return a == 0.0 ? 1.0 : 0.0;
            return std::pow(r, a);
          },
          false};
}

Multiplier riesz_multiplier(int k) {
  if (k != 1 && k != 2) throw std::invalid_argument("riesz: component must be 1 or 2");
  return {"R_" + std::to_string(k),
          [k](const Wavevector& xi) -> Complex {
            const double r = xi.norm();
            if (r == 0.0) return 0.0;
            return Complex(0.0, -(k == 1 ? xi.k1 : xi.k2) / r);
          },
          true};
}

Multiplier derivative_multiplier(int k) {
  if (k != 1 && k != 2) throw std::invalid_argument("derivative: component must be 1 or 2");
  return {"d_" + std::to_string(k),
          [k](const Wavevector& xi) -> Complex { return Complex(0.0, k == 1 ? xi.k1 : xi.k2); },
          true};
}

SpectralField apply_lambda(const SpectralField& f, double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("apply_lambda: exponent must be >= 0");
  if (a == 0.0) return f;
  SpectralField out(f.grid());
  for_each_mode(f.grid(), [&](int ix, int iy, const Wavevector& xi) {
    const double r = xi.norm();
    if (r > 0.0) out.at(ix, iy) = std::pow(r, a) * f.at(ix, iy);
  });
  return out;
}

VectorSpectral riesz_velocity(const SpectralField& theta) {
  SpectralField u1(theta.grid());
  SpectralField u2(theta.grid());
  const int nyq = theta.grid().n / 2;
  for_each_mode(theta.grid(), [&](int ix, int iy, const Wavevector& xi) {
    const double r = xi.norm();
    if (r == 0.0 || ix == nyq || iy == nyq) return;
    const Complex c = theta.at(ix, iy);
    // -R_2: +i xi_2/|xi|;  R_1: -i xi_1/|xi|
    u1.at(ix, iy) = Complex(0.0, xi.k2 / r) * c;
    u2.at(ix, iy) = Complex(0.0, -xi.k1 / r) * c;
  });
  return {std::move(u1), std::move(u2)};
}

VectorSpectral gradient(const SpectralField& f) {
  return {apply(f, derivative_multiplier(1)), apply(f, derivative_multiplier(2))};
}

double divergence_defect(const VectorSpectral& u) {
  require_same_grid(u.first.grid(), u.second.grid(), "divergence_defect");
  double worst = 0.0;
  for_each_mode(u.first.grid(), [&](int ix, int iy, const Wavevector& xi) {
    worst = std::max(worst, std::abs(xi.k1 * u.first.at(ix, iy) + xi.k2 * u.second.at(ix, iy)));
  });
  return worst;
}

// ---------------------------------------------------------------------------

double lp_norm(const RealField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const auto s = f.samples();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : s) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (double v : s) sum += v * v;
  } else {
    for (double v : s) sum += std::pow(std::abs(v), p);
  }
  return std::pow(sum * f.grid().cell_area(), 1.0 / p);
}

double l2_norm(const SpectralField& f) {
  double sum = 0.0;
  for (const Complex& c : f.coeffs()) sum += std::norm(c);
  return f.grid().period * std::sqrt(sum);
}

double integral(const RealField& f) {
  double sum = 0.0;
  for (double v : f.samples()) sum += v;
  return sum * f.grid().cell_area();
}

double inner_product(const RealField& f, const RealField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  const auto a = f.samples();
  const auto b = g.samples();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum * f.grid().cell_area();
}

// ---------------------------------------------------------------------------

DealiasRule parse_dealias_rule(const std::string& name) {
  if (name == "2/3" || name == "two-thirds") return DealiasRule::TwoThirds;
  if (name == "none") return DealiasRule::None;
  throw std::invalid_argument("unknown dealias rule '" + name + "' (expected 2/3 or none)");
}

std::string to_string(DealiasRule rule) { return rule == DealiasRule::TwoThirds ? "2/3" : "none"; }

int dealias_cutoff(const GridSpec& grid, DealiasRule rule) {
  return rule == DealiasRule::TwoThirds ? (grid.n - 1) / 3 : grid.n / 2;
}

SpectralField truncate(const SpectralField& f, DealiasRule rule) {
  if (rule == DealiasRule::None) return f;
  const GridSpec& grid = f.grid();
  const int cutoff = dealias_cutoff(grid, rule);
  SpectralField out = f;
  for (int iy = 0; iy < grid.n; ++iy) {
    const bool drop_row = std::abs(grid.frequency_index(iy)) > cutoff;
    for (int ix = 0; ix < grid.n; ++ix) {
      if (drop_row || std::abs(grid.frequency_index(ix)) > cutoff) out.at(ix, iy) = 0.0;
    }
  }
  return out;
}

bool is_band_limited(const SpectralField& f, int cutoff, double tol) {
  const GridSpec& grid = f.grid();
  for (int iy = 0; iy < grid.n; ++iy) {
    for (int ix = 0; ix < grid.n; ++ix) {
      if (std::abs(grid.frequency_index(ix)) > cutoff || std::abs(grid.frequency_index(iy)) > cutoff) {
        if (std::abs(f.at(ix, iy)) > tol) return false;
      }
    }
  }
  return true;
}

SpectralField dealiased_product_spectral(const RealField& f, const RealField& g, DealiasRule rule) {
  require_same_grid(f.grid(), g.grid(), "dealiased_product");
  RealField prod(f.grid());
  const auto a = f.samples();
  const auto b = g.samples();
  auto out = prod.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return truncate(forward_transform(prod), rule);
}

RealField dealiased_product(const RealField& f, const RealField& g, DealiasRule rule) {
  return inverse_transform(dealiased_product_spectral(f, g, rule));
}

SpectralField resample(const SpectralField& f, int new_n) {
  GridSpec target = f.grid();
  target.n = new_n;
  target.validate();
  SpectralField out(target);
  const int limit = std::min(f.grid().n, new_n) / 2;
  for (int m2 = -limit + 1; m2 < limit; ++m2) {
    for (int m1 = -limit + 1; m1 < limit; ++m1) out.set_mode(m1, m2, f.mode(m1, m2));
  }
  return out;
}

}  // namespace sqg
