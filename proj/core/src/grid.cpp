#include "sqg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sqg {

void GridSpec::validate() const {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("grid: n must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("grid: period must be positive and finite");
  }
}

double Wavevector::norm() const { return std::hypot(k1, k2); }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch (" + std::to_string(a.n) +
                                " vs " + std::to_string(b.n) + ")");
  }
}

// ---------------------------------------------------------------------------

RealField::RealField(GridSpec grid) : grid_(grid) {
  grid_.validate();
  samples_.assign(grid_.size(), 0.0);
}

RealField::RealField(GridSpec grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  grid_.validate();
  if (samples_.size() != grid_.size()) {
    throw std::invalid_argument("RealField: expected " + std::to_string(grid_.size()) +
                                " samples, got " + std::to_string(samples_.size()));
  }
}

bool RealField::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

RealField& RealField::operator+=(const RealField& other) {
  require_same_grid(grid_, other.grid_, "RealField +=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  require_same_grid(grid_, other.grid_, "RealField -=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

RealField& RealField::operator*=(double s) {
  for (double& v : samples_) v *= s;
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }

// ---------------------------------------------------------------------------

SpectralField::SpectralField(GridSpec grid) : grid_(grid) {
  grid_.validate();
  coeffs_.assign(grid_.size(), Complex{});
}

SpectralField::SpectralField(GridSpec grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  grid_.validate();
  if (coeffs_.size() != grid_.size()) {
    throw std::invalid_argument("SpectralField: coefficient count does not match grid");
  }
}

namespace {
int storage_index(int m, int n) {
  if (m < -n / 2 || m >= n / 2) {
    throw std::out_of_range("SpectralField: frequency " + std::to_string(m) + " outside lattice");
  }
  return m < 0 ? m + n : m;
}
}  // namespace

Complex SpectralField::mode(int m1, int m2) const {
  return at(storage_index(m1, grid_.n), storage_index(m2, grid_.n));
}

void SpectralField::set_mode(int m1, int m2, Complex value) {
  at(storage_index(m1, grid_.n), storage_index(m2, grid_.n)) = value;
}

Wavevector SpectralField::wavevector(int ix, int iy) const {
  const double k0 = grid_.base_wavenumber();
  return {k0 * grid_.frequency_index(ix), k0 * grid_.frequency_index(iy)};
}

double SpectralField::hermitian_defect() const {
  const int n = grid_.n;
  double worst = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const int jy = (n - iy) % n;
    for (int ix = 0; ix < n; ++ix) {
      const int jx = (n - ix) % n;
      worst = std::max(worst, std::abs(at(ix, iy) - std::conj(at(jx, jy))));
    }
  }
  return worst;
}

double SpectralField::max_abs() const {
  double worst = 0.0;
  for (const Complex& c : coeffs_) worst = std::max(worst, std::abs(c));
  return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (Complex& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

}  // namespace sqg
