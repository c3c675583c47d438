#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "sqg/grid.hpp"

namespace sqg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// --- transforms ------------------------------------------------------------
//
// Forward: c(xi) = n^-2 sum_x f(x) exp(-i xi.x). Inverse: f(x) = sum_xi c(xi) exp(i xi.x).
// Plancherel under this convention: ||f||_2^2 = period^2 * sum |c(xi)|^2.
// FFTW plans are cached per grid size and shared between threads.

/// Throws std::invalid_argument on non-finite samples.
SpectralField forward_transform(const RealField& f);
/// Real part of the inverse transform (input assumed Hermitian).
RealField inverse_transform(const SpectralField& f);

// --- multipliers -----------------------------------------------------------

/// A diagonal Fourier multiplier. Odd symbols (derivatives, Riesz) are zeroed on
/// the Nyquist lines, which have no conjugate partner on an even lattice.
struct Multiplier {
  std::string name;
  std::function<Complex(const Wavevector&)> symbol;
  bool odd = false;
};

SpectralField apply(const SpectralField& f, const Multiplier& m);

Multiplier lambda_multiplier(double a);
/// Symbol -i xi_k / |xi| (k = 1 or 2), zero at xi = 0.
Multiplier riesz_multiplier(int k);
/// Symbol i xi_k.
Multiplier derivative_multiplier(int k);

/// Lambda^a f: coefficients scaled by |xi|^a. For a > 0 the zero mode is sent to 0.
SpectralField apply_lambda(const SpectralField& f, double a);

struct VectorSpectral {
  SpectralField first;
  SpectralField second;
};

/// u = R^perp theta = (-R_2 theta, R_1 theta).
VectorSpectral riesz_velocity(const SpectralField& theta);
/// (d/dx_1 f, d/dx_2 f).
VectorSpectral gradient(const SpectralField& f);
/// Largest |xi . u(xi)| over the lattice.
double divergence_defect(const VectorSpectral& u);

// --- norms -----------------------------------------------------------------

/// Riemann-sum L^p norm, p in [1, inf]; p = kInfinity gives max |sample|.
double lp_norm(const RealField& f, double p);
/// L^2 norm evaluated on coefficients (Plancherel).
double l2_norm(const SpectralField& f);
/// Riemann-sum integral of the samples.
double integral(const RealField& f);
/// Riemann-sum integral of the pointwise product f * g.
double inner_product(const RealField& f, const RealField& g);

// --- products --------------------------------------------------------------

enum class DealiasRule { TwoThirds, None };

DealiasRule parse_dealias_rule(const std::string& name);
std::string to_string(DealiasRule rule);

/// Largest retained |frequency index| per axis. TwoThirds keeps |m| < n/3, which
/// makes products of two fields band-limited to that cutoff alias-free.
int dealias_cutoff(const GridSpec& grid, DealiasRule rule);
/// Zeroes modes with |m1| or |m2| above the cutoff.
SpectralField truncate(const SpectralField& f, DealiasRule rule);
bool is_band_limited(const SpectralField& f, int cutoff, double tol = 0.0);

/// Spectrum of f * g with modes above the dealias cutoff removed.
SpectralField dealiased_product_spectral(const RealField& f, const RealField& g, DealiasRule rule);
RealField dealiased_product(const RealField& f, const RealField& g, DealiasRule rule);

/// Field with every mode |m| < cutoff copied onto a grid of a different size.
SpectralField resample(const SpectralField& f, int new_n);

}  // namespace sqg
