#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace sqg {

using Complex = std::complex<double>;

/// Uniform n x n periodic lattice on the box [0, period)^2.
struct GridSpec {
  int n = 64;
  double period = 2.0 * std::numbers::pi;

  /// Throws std::invalid_argument unless n >= 8 is a power of two and period > 0.
  void validate() const;

  std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
  double spacing() const { return period / n; }
  double cell_area() const { return spacing() * spacing(); }
  /// Wavenumber of one lattice step, 2*pi/period.
  double base_wavenumber() const { return 2.0 * std::numbers::pi / period; }
  /// Signed integer frequency of storage index i (Nyquist maps to -n/2).
  int frequency_index(int i) const { return i < n / 2 ? i : i - n; }
  double nyquist() const { return base_wavenumber() * (n / 2); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// A wavevector xi in physical units.
struct Wavevector {
  double k1 = 0.0;
  double k2 = 0.0;
  double norm() const;
};

/// Real samples of a scalar field, stored row-major: samples[iy * n + ix].
class RealField {
 public:
  RealField() = default;
  explicit RealField(GridSpec grid);
  RealField(GridSpec grid, std::vector<double> samples);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }
  double& at(int ix, int iy) { return samples_[static_cast<std::size_t>(iy) * grid_.n + ix]; }
  double at(int ix, int iy) const { return samples_[static_cast<std::size_t>(iy) * grid_.n + ix]; }
  /// Physical coordinate of sample index i along either axis.
  double coordinate(int i) const { return grid_.spacing() * i; }

  bool all_finite() const;

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double s);

 private:
  GridSpec grid_;
  std::vector<double> samples_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);

/// Fourier-series coefficients f(x) = sum_xi c(xi) exp(i xi.x), stored at
/// coeffs[iy * n + ix] with frequency indices given by GridSpec::frequency_index.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(GridSpec grid);
  SpectralField(GridSpec grid, std::vector<Complex> coeffs);

  const GridSpec& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex& at(int ix, int iy) { return coeffs_[static_cast<std::size_t>(iy) * grid_.n + ix]; }
  Complex at(int ix, int iy) const { return coeffs_[static_cast<std::size_t>(iy) * grid_.n + ix]; }

  /// Coefficient at integer frequency (m1, m2); both must lie in [-n/2, n/2).
  Complex mode(int m1, int m2) const;
  void set_mode(int m1, int m2, Complex value);

  Wavevector wavevector(int ix, int iy) const;
  Complex mean() const { return coeffs_.empty() ? Complex{} : coeffs_[0]; }

  /// Largest |c(xi) - conj(c(-xi))| over the lattice.
  double hermitian_defect() const;
  /// Largest coefficient modulus.
  double max_abs() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Calls fn(ix, iy, xi) for every lattice mode.
template <typename Fn>
void for_each_mode(const GridSpec& grid, Fn&& fn) {
  const double k0 = grid.base_wavenumber();
  for (int iy = 0; iy < grid.n; ++iy) {
    const double k2 = k0 * grid.frequency_index(iy);
    for (int ix = 0; ix < grid.n; ++ix) {
      fn(ix, iy, Wavevector{k0 * grid.frequency_index(ix), k2});
    }
  }
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace sqg
