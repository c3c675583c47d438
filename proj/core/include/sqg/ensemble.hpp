#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqg/grid.hpp"

namespace sqg {

/// Radial spectrum of generated fields.
///   Flat:        every admitted mode has amplitude law U(0,1)
///   Decaying:    as Flat, times 1/|xi|
///   SingleBlock: Flat, restricted to 2^j [4/3, 3/2] where Delta_j acts as the identity
enum class SpectrumShape { Flat, Decaying, SingleBlock };

SpectrumShape parse_spectrum_shape(const std::string& name);
std::string to_string(SpectrumShape shape);

/// Seeded family of real, mean-zero random fields with random phases.
///
/// Modes are admitted by physical radius: 2^{j_lo} * 3/4 <= |xi| <= 2^{j_hi} * 8/3
/// (the support of blocks j_lo..j_hi), further clipped to |m| <= max_index per axis
/// when max_index > 0. Random draws walk the admitted modes in a canonical order
/// that does not depend on n, so the same member on a finer grid is the same
/// trigonometric polynomial. Each member is rescaled to ||f||_2 = amplitude.
struct EnsembleSpec {
  std::uint64_t seed = 1;
  int count = 100;
  SpectrumShape shape = SpectrumShape::Flat;
  int j_lo = 1;
  int j_hi = 4;
  double amplitude = 1.0;
  int max_index = 0;

  void validate() const;
};

/// SplitMix64 step; used to derive independent per-member and per-stream seeds.
std::uint64_t splitmix64(std::uint64_t x);
/// Seed of the named sub-stream `stream` of `seed`.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t substream_seed(std::uint64_t seed, const std::string& name);

/// Member `index` of the ensemble on `grid` (spectral form).
SpectralField ensemble_member_spectral(const EnsembleSpec& spec, const GridSpec& grid, int index);
RealField ensemble_member(const EnsembleSpec& spec, const GridSpec& grid, int index);
/// All members, generated in parallel (result independent of `threads`).
std::vector<RealField> generate_ensemble(const EnsembleSpec& spec, const GridSpec& grid, unsigned threads = 0);

}  // namespace sqg
