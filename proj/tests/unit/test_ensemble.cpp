#include <gtest/gtest.h>

#include <set>

#include "sqg/besov.hpp"
#include "sqg/ensemble.hpp"
#include "sqg_test_util.hpp"

using namespace sqg;
using test::grid_of;

TEST(Seeds, SubstreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 50; ++s) seen.insert(substream_seed(7, s));
  EXPECT_EQ(seen.size(), 50u);
  EXPECT_NE(substream_seed(7, "init"), substream_seed(7, "fields"));
  EXPECT_EQ(substream_seed(7, "init"), substream_seed(7, "init"));
  EXPECT_NE(splitmix64(1), splitmix64(2));
}

TEST(Ensemble, MembersAreRealMeanZeroAndNormalized) {
  const GridSpec g = grid_of(64);
  EnsembleSpec spec;
  spec.count = 5;
  spec.j_hi = 3;
  spec.amplitude = 2.5;
  for (int i = 0; i < spec.count; ++i) {
    const SpectralField f = ensemble_member_spectral(spec, g, i);
    EXPECT_LT(f.hermitian_defect(), 1e-15);
    EXPECT_EQ(f.mean(), Complex{});
    EXPECT_NEAR(l2_norm(f), 2.5, 1e-12);
  }
}

TEST(Ensemble, Deterministic) {
  EnsembleSpec spec;
  spec.count = 4;
  spec.seed = 99;
  const auto a = generate_ensemble(spec, grid_of(64), 1);
  const auto b = generate_ensemble(spec, grid_of(64), 4);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(test::max_abs_diff(a[i], b[i]), 0.0);
  spec.seed = 100;
  EXPECT_GT(test::max_abs_diff(a[0], ensemble_member(spec, grid_of(64), 0)), 1e-3);
}

TEST(Ensemble, SameMemberOnFinerGrid) {
  EnsembleSpec spec;
  spec.j_lo = 0;
  spec.j_hi = 2;
  spec.shape = SpectrumShape::Decaying;
  const SpectralField coarse = ensemble_member_spectral(spec, grid_of(64), 3);
  const SpectralField fine = ensemble_member_spectral(spec, grid_of(128), 3);
  EXPECT_LT(l2_norm(resample(coarse, 128) - fine), 1e-13);
}

TEST(Ensemble, SingleBlockShapeLivesInOneBlock) {
  const GridSpec g = grid_of(128);
  const DyadicFamily fam(g);
  EnsembleSpec spec;
  spec.shape = SpectrumShape::SingleBlock;
  spec.j_lo = spec.j_hi = 2;
  const SpectralField f = ensemble_member_spectral(spec, g, 0);
  EXPECT_LT(l2_norm(block(f, 2, fam) - f), 1e-14);
}

TEST(Ensemble, MaxIndexClipsModes) {
  const GridSpec g = grid_of(64);
  EnsembleSpec spec;
  spec.max_index = 5;
  const SpectralField f = ensemble_member_spectral(spec, g, 0);
  EXPECT_TRUE(is_band_limited(f, 5));
}

TEST(Ensemble, ValidationAndParsing) {
  EnsembleSpec spec;
  spec.j_hi = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  EXPECT_EQ(parse_spectrum_shape("decaying"), SpectrumShape::Decaying);
  EXPECT_EQ(to_string(SpectrumShape::SingleBlock), "single-block");
  EXPECT_THROW(parse_spectrum_shape("pink"), std::invalid_argument);
}
