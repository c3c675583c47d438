#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sqg/besov.hpp"
#include "sqg_test_util.hpp"

using namespace sqg;
using test::cosine;
using test::grid_of;

constexpr double kPi = std::numbers::pi;

// ||cos(m.x)||_2 on the 2 pi box.
const double kCosL2 = std::sqrt(2.0) * kPi;

TEST(Besov, WeightedLq) {
  const std::vector<double> v{1.0, 2.0, 0.5};
  EXPECT_NEAR(weighted_lq(v, 0, 0.0, 1.0), 3.5, 1e-15);
  EXPECT_NEAR(weighted_lq(v, 1, 1.0, 2.0), std::sqrt(4.0 + 64.0 + 16.0), 1e-13);
  EXPECT_NEAR(weighted_lq(v, -1, 1.0, kInfinity), 2.0, 1e-15);
}

TEST(Besov, SingleBlockModeClosedForm) {
  // (4,4) lies where Delta_2 is the identity: every Besov norm is 2^{2s} ||f||_p.
  const GridSpec g = grid_of(64);
  const DyadicFamily fam(g);
  const RealField f = cosine(g, 4, 4, 3.0);
  for (double s : {-0.5, 0.0, 1.0, 2.5}) {
    for (double q : {1.0, 2.0, kInfinity}) {
      const double expected = std::exp2(2 * s) * 3.0 * kCosL2;
      EXPECT_NEAR(besov_norm(f, {s, 2.0, q, true}, fam), expected, 1e-13 * expected);
    }
  }
  EXPECT_NEAR(besov_norm(f, {1.0, kInfinity, 2.0, true}, fam), 4.0 * 3.0, 1e-12);
}

TEST(Besov, TwoSeparatedModes) {
  const GridSpec g = grid_of(64);
  const DyadicFamily fam(g);
  // (1,0) sits in block 0, (11,0) in block 3; both blocks act as the identity there.
  const RealField f = cosine(g, 1, 0) + cosine(g, 11, 0, 2.0);
  const double expected = std::sqrt(std::pow(kCosL2, 2) + std::pow(8.0 * 2.0 * kCosL2, 2));
  EXPECT_NEAR(besov_norm(f, {1.0, 2.0, 2.0, true}, fam), expected, 1e-11);
}

TEST(Besov, HomogeneousRejectsMean) {
  const GridSpec g = grid_of(32 * 2);
  const DyadicFamily fam(g);
  const RealField f = test::sample(g, [](double x, double) { return 1.0 + std::cos(x); });
  EXPECT_THROW(besov_norm(f, {1.0, 2.0, 2.0, true}, fam), std::invalid_argument);
  EXPECT_FALSE(is_mean_zero(forward_transform(f)));
}

TEST(Besov, InhomogeneousAddsLowPart) {
  const GridSpec g = grid_of(64);
  const DyadicFamily fam(g);
  const RealField f = test::sample(g, [](double x, double) { return 0.5 + std::cos(11 * x); });
  // S_0 keeps only the mean; block 3 holds the cosine.
  const double low = 0.5 * 2 * kPi;
  EXPECT_NEAR(besov_norm(f, {1.0, 2.0, 2.0, false}, fam), low + 8.0 * kCosL2, 1e-11);
}

TEST(Besov, IndexValidation) {
  EXPECT_THROW((BesovIndex{0.0, 0.5, 2.0, true}.validate()), std::invalid_argument);
  EXPECT_THROW((BesovIndex{kInfinity, 2.0, 2.0, true}.validate()), std::invalid_argument);
}

TEST(CriticalIndex, Values) {
  EXPECT_DOUBLE_EQ(critical_sigma(0.5, 2.0).sigma, 1.0);
  EXPECT_DOUBLE_EQ(critical_sigma(0.25, 4.0).sigma, 1.0);
  EXPECT_DOUBLE_EQ(critical_sigma(1.0, kInfinity).sigma, -1.0);
  EXPECT_THROW(critical_sigma(0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(critical_sigma(0.5, 1.5), std::invalid_argument);
}

TEST(Rescale, InteriorBlockNormsInvariantAtCriticalIndex) {
  const GridSpec g = grid_of(128);
  const DyadicFamily fam(g);
  // Content in blocks 1..2 moves to 2..3, all interior for n = 128.
  const RealField f = test::random_trig(g, 3, 17);
  const SpectralField fh = truncate(block(forward_transform(f), 1, fam) + block(forward_transform(f), 2, fam),
                                    DealiasRule::TwoThirds);
  for (double alpha : {0.25, 0.5}) {
    const double sigma = critical_sigma(alpha, 2.0).sigma;
    const SpectralField r = rescale_dyadic(fh, sigma);
    const BesovIndex idx{sigma, 2.0, 2.0, true};
    EXPECT_NEAR(besov_norm(r, idx, fam), besov_norm(fh, idx, fam), 1e-12 * besov_norm(fh, idx, fam));
  }
}

TEST(CheminLerner, ConstantTrajectory) {
  const GridSpec g = grid_of(64);
  const DyadicFamily fam(g);
  const SpectralField f = forward_transform(cosine(g, 4, 4));
  const BesovIndex idx{1.0, 2.0, 2.0, true};
  CheminLernerAccumulator l1(1.0, idx, fam);
  CheminLernerAccumulator l2(2.0, idx, fam);
  CheminLernerAccumulator linf(kInfinity, idx, fam);
  for (auto* acc : {&l1, &l2, &linf}) {
    acc->start(f);
    for (int i = 0; i < 10; ++i) acc->accumulate(f, 0.3);
  }
  const double norm = besov_norm(f, idx, fam);
  EXPECT_NEAR(l1.finalize(), 3.0 * norm, 1e-12);
  EXPECT_NEAR(l2.finalize(), std::sqrt(3.0) * norm, 1e-12);
  EXPECT_NEAR(linf.finalize(), norm, 1e-12);
  EXPECT_NEAR(l1.elapsed(), 3.0, 1e-14);
}

TEST(CheminLerner, TrapezoidOnLinearDecay) {
  // ||Delta_j f(t)|| = (1 - t) c on [0, 1]: the trapezoid rule is exact for r = 1.
  const GridSpec g = grid_of(64);
  const DyadicFamily fam(g);
  const SpectralField f = forward_transform(cosine(g, 4, 4));
  CheminLernerAccumulator acc(1.0, {0.0, 2.0, 2.0, true}, fam);
  acc.start(f);
  for (int i = 1; i <= 8; ++i) acc.accumulate((1.0 - i / 8.0) * f, 1.0 / 8.0);
  EXPECT_NEAR(acc.finalize(), 0.5 * kCosL2, 1e-13);
}

TEST(CheminLerner, MergeEqualsSingleRun) {
  const GridSpec g = grid_of(64);
  const DyadicFamily fam(g);
  const SpectralField a = forward_transform(test::random_trig(g, 12, 1));
  const SpectralField b = forward_transform(test::random_trig(g, 12, 2));
  for (double r : {1.0, 2.0, kInfinity}) {
    const BesovIndex idx{0.5, 2.0, 2.0, false};
    CheminLernerAccumulator whole(r, idx, fam), first(r, idx, fam), second(r, idx, fam);
    whole.start(a);
    whole.accumulate(b, 0.2);
    whole.accumulate(a, 0.1);
    first.start(a);
    first.accumulate(b, 0.2);
    second.start(b);
    second.accumulate(a, 0.1);
    first.merge(second);
    EXPECT_NEAR(first.finalize(), whole.finalize(), 1e-12 * whole.finalize()) << r;
  }
}

TEST(CheminLerner, MinkowskiOrdering) {
  // L~^r_t B^s_{p,q} dominates L^r_t B^s_{p,q} when q >= r: check the r = 1 <= q = 2 case.
  const GridSpec g = grid_of(64);
  const DyadicFamily fam(g);
  const BesovIndex idx{1.0, 2.0, 2.0, true};
  CheminLernerAccumulator acc(1.0, idx, fam);
  std::vector<SpectralField> states;
  for (int i = 0; i < 5; ++i) states.push_back(forward_transform(test::random_trig(g, 12, 30 + i)));
  acc.start(states[0]);
  double bochner = 0.0;
  for (int i = 1; i < 5; ++i) {
    acc.accumulate(states[i], 0.25);
    bochner += 0.125 * (besov_norm(states[i - 1], idx, fam) + besov_norm(states[i], idx, fam));
  }
  EXPECT_LE(acc.finalize(), bochner * (1 + 1e-12));
}

TEST(CheminLerner, Errors) {
  const DyadicFamily fam(grid_of(64));
  EXPECT_THROW(CheminLernerAccumulator(0.5, {}, fam), std::invalid_argument);
  CheminLernerAccumulator acc(1.0, {}, fam);
  const SpectralField f(grid_of(64));
  EXPECT_THROW(acc.accumulate(f, 0.1), std::logic_error);
  acc.start(f);
  EXPECT_THROW(acc.accumulate(f, 0.0), std::invalid_argument);
}
