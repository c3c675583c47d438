#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "sqg/grid.hpp"
#include "sqg/spectral.hpp"

namespace sqg {

/// Which dyadic sum the blocks belong to.
///   Homogeneous:   sum_j Delta_j f = f - mean(f)
///   Inhomogeneous: S_0 f + sum_{j>=0} Delta_j f = f
enum class Localization { Homogeneous, Inhomogeneous };

/// Radial dyadic partition of unity on a periodic lattice.
///
/// chi is 1 on [0, 3/4], 0 on [4/3, inf) and decreases smoothly in between
/// (built from exp(-1/t)); phi(r) = chi(r/2) - chi(r) is supported in [3/4, 8/3].
/// The block range [j_min, j_max] is finite, so the boundary blocks absorb the
/// tails: the bottom homogeneous block carries chi(2^{-j_min-1} r) and the top
/// block carries 1 - chi(2^{-j_max} r). Both reconstructions are then exact.
/// The zero mode belongs to no block.
class DyadicFamily {
 public:
  /// Throws std::invalid_argument if the grid hosts fewer than 3 blocks.
  explicit DyadicFamily(const GridSpec& grid);

  static double chi(double r);
  static double phi(double r);

  const GridSpec& grid() const { return grid_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  /// First block index of the given localization (0 for inhomogeneous).
  int first_block(Localization loc) const;
  int block_count(Localization loc) const { return j_max_ - first_block(loc) + 1; }

  /// Multiplier of Delta_j at radius r (physical wavenumber units).
  double block_symbol(int j, double r, Localization loc = Localization::Homogeneous) const;
  /// Multiplier of S_j at radius r; identity for j > j_max.
  double low_symbol(int j, double r) const;

  struct Entry {
    std::uint32_t index;  ///< storage index iy * n + ix
    double value;
  };
  /// Nonzero lattice entries of Delta_j's multiplier. Tables are built once per
  /// grid and shared by every family on that grid.
  std::span<const Entry> block_entries(int j, Localization loc = Localization::Homogeneous) const;

 private:
  struct Tables;

  GridSpec grid_;
  int j_min_ = 0;
  int j_max_ = 0;
  std::shared_ptr<const Tables> tables_;
};

/// The pieces Delta_j f for j in [first, first + blocks.size()), plus the low part
/// (S_0 f when inhomogeneous, the mean when homogeneous).
struct BlockSet {
  int first = 0;
  std::vector<SpectralField> blocks;
  SpectralField low;

  const SpectralField& operator[](int j) const { return blocks.at(static_cast<std::size_t>(j - first)); }
  int last() const { return first + static_cast<int>(blocks.size()) - 1; }
};

/// Delta_j f. Throws std::out_of_range for j outside the family's range.
SpectralField block(const SpectralField& f, int j, const DyadicFamily& fam,
                    Localization loc = Localization::Homogeneous);
/// S_j f = chi(2^{-j} D) f (keeps the zero mode).
SpectralField low_pass(const SpectralField& f, int j, const DyadicFamily& fam);

BlockSet decompose(const SpectralField& f, const DyadicFamily& fam,
                   Localization loc = Localization::Homogeneous);
SpectralField reconstruct(const BlockSet& set);

/// Bony paraproduct pieces of u*v.
struct BonyParts {
  RealField t_uv;       ///< sum_j S_{j-1}u Delta_j v
  RealField t_vu;       ///< sum_j S_{j-1}v Delta_j u
  RealField remainder;  ///< sum_j Delta_j u (Delta_{j-1}+Delta_j+Delta_{j+1}) v, plus the mean terms
};

/// The low-pass S_{j-1} is realized as the partial block sum sum_{k<=j-2} Delta_k
/// of the mean-free parts; products involving a mean go to the remainder. Every
/// product is dealiased with the same rule, so the three parts sum to the
/// dealiased product u*v.
BonyParts bony_decompose(const RealField& u, const RealField& v, const DyadicFamily& fam,
                         DealiasRule rule = DealiasRule::TwoThirds);

/// CSV rows "r,chi,phi" for r = 0, dr, ..., r_max.
void write_profile_csv(std::ostream& os, double r_max, int samples);

}  // namespace sqg
