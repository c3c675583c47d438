#include "sqg/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sqg/parallel.hpp"
#include "sqg/spectral.hpp"

namespace sqg {

SpectrumShape parse_spectrum_shape(const std::string& name) {
  if (name == "flat") return SpectrumShape::Flat;
  if (name == "decaying") return SpectrumShape::Decaying;
  if (name == "single-block") return SpectrumShape::SingleBlock;
  throw std::invalid_argument("unknown spectrum shape '" + name + "' (expected flat, decaying, single-block)");
}

std::string to_string(SpectrumShape shape) {
  switch (shape) {
    case SpectrumShape::Flat: return "flat";
    case SpectrumShape::Decaying: return "decaying";
    case SpectrumShape::SingleBlock: return "single-block";
  }
  return "flat";
}

void EnsembleSpec::validate() const {
  if (count < 0) throw std::invalid_argument("ensemble: count must be >= 0");
  if (j_hi < j_lo) throw std::invalid_argument("ensemble: j_hi must be >= j_lo");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("ensemble: amplitude must be finite and >= 0");
  if (max_index < 0) throw std::invalid_argument("ensemble: max_index must be >= 0");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

std::uint64_t substream_seed(std::uint64_t seed, const std::string& name) {
  // FNV-1a keeps the mapping from names to streams stable across platforms.
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return substream_seed(seed, h);
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

SpectralField ensemble_member_spectral(const EnsembleSpec& spec, const GridSpec& grid, int index) {
  spec.validate();
  grid.validate();
  const double k0 = grid.base_wavenumber();
  double r_lo = std::ldexp(0.75, spec.j_lo);
  double r_hi = std::ldexp(8.0 / 3.0, spec.j_hi);
  if (spec.shape == SpectrumShape::SingleBlock) {
    r_lo = std::ldexp(4.0 / 3.0, spec.j_lo);
    r_hi = std::ldexp(1.5, spec.j_lo);
  }
  int reach = static_cast<int>(std::ceil(r_hi / k0));
  if (spec.max_index > 0) reach = std::min(reach, spec.max_index);
  const int half = grid.n / 2;

  std::mt19937_64 rng(substream_seed(spec.seed, static_cast<std::uint64_t>(index)));
  SpectralField out(grid);
  // Upper half-plane in canonical order: m2 > 0, or m2 == 0 and m1 > 0.
  for (int m2 = 0; m2 <= reach; ++m2) {
    for (int m1 = -reach; m1 <= reach; ++m1) {
      if (m2 == 0 && m1 <= 0) continue;
      const double r = k0 * std::hypot(m1, m2);
      if (r < r_lo || r > r_hi) continue;
      const double magnitude = uniform01(rng);
      const double phase = 2.0 * std::numbers::pi * uniform01(rng);
      // Drawn even when the mode does not fit, so coarser grids see the same stream.
      if (m1 <= -half || m1 >= half || m2 >= half) continue;
      const double weight = spec.shape == SpectrumShape::Decaying ? 1.0 / r : 1.0;
      const Complex c = std::polar(weight * magnitude, phase);
      out.set_mode(m1, m2, c);
      out.set_mode(-m1, -m2, std::conj(c));
    }
  }
  const double norm = l2_norm(out);
  if (norm > 0.0) out *= spec.amplitude / norm;
  return out;
}

RealField ensemble_member(const EnsembleSpec& spec, const GridSpec& grid, int index) {
  return inverse_transform(ensemble_member_spectral(spec, grid, index));
}

std::vector<RealField> generate_ensemble(const EnsembleSpec& spec, const GridSpec& grid, unsigned threads) {
  spec.validate();
  std::vector<RealField> members(static_cast<std::size_t>(spec.count));
  parallel_for(members.size(), threads, [&](std::size_t i) {
    members[i] = ensemble_member(spec, grid, static_cast<int>(i));
  });
  return members;
}

}  // namespace sqg
