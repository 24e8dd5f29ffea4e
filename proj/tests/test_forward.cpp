#include <cmath>
#include <cstring>
#include <numbers>

#include <gtest/gtest.h>

#include "msrimg/errors.hpp"
#include "msrimg/forward.hpp"
#include "msrimg/spectral.hpp"
#include "oracles.hpp"

using namespace msrimg;

namespace {

constexpr double kPi = std::numbers::pi;

double omega_of(double lambda) { return 2.0 * kPi / lambda; }

ThinInclusion sigma1(double eps = 5.0, double mu = 5.0) {
  return ThinInclusion(catalog_curve("sigma1"), 0.015, eps, mu);
}

double symmetry_error(const ComplexMatrix& k) {
  return frobenius_norm(k - transpose(k)) / frobenius_norm(k);
}

bool bitwise_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data().data(), b.data().data(), a.data().size_bytes()) == 0;
}

}  // namespace

TEST(Directions, FourDirections) {
  const DirectionSet d = make_directions(4);
  ASSERT_EQ(d.size(), 4u);
  const Vec2 expected[] = {{-1, 0}, {0, -1}, {1, 0}, {0, 1}};
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_NEAR(d.incident(l).x, expected[l].x, 1e-15);
    EXPECT_NEAR(d.incident(l).y, expected[l].y, 1e-15);
    EXPECT_EQ(d.observation(l), -d.incident(l));
  }
}

TEST(Directions, FortyEightEquiangular) {
  const DirectionSet d = make_directions(48);
  ASSERT_EQ(d.size(), 48u);
  for (std::size_t l = 0; l < 48; ++l) {
    EXPECT_NEAR(norm(d.incident(l)), 1.0, 1e-15);
    const Vec2 a = d.incident(l), b = d.incident((l + 1) % 48);
    EXPECT_NEAR(std::acos(std::clamp(dot(a, b), -1.0, 1.0)), 2.0 * kPi / 48.0, 1e-7);
  }
}

TEST(Directions, SumVanishes) {
  for (int n = 2; n <= 200; n += 7) {
    const DirectionSet d = make_directions(n);
    Vec2 sum;
    for (Vec2 v : d.incident()) sum = sum + v;
    EXPECT_LT(norm(sum), 1e-12) << n;
  }
}

TEST(Directions, Validation) {
  EXPECT_THROW(make_directions(1), DomainError);
  EXPECT_THROW(DirectionSet({{1, 0}, {0.5, 0}}), DomainError);
  EXPECT_THROW(DirectionSet({{1, 0}, {1, 0}}), DomainError);
}

TEST(Frequencies, EqualWavelengthSpacing) {
  const FrequencySet f(0.5, 0.3, 10);
  ASSERT_EQ(f.size(), 10u);
  EXPECT_EQ(f.wavelength(0), 0.5);
  EXPECT_EQ(f.wavelength(9), 0.3);
  for (std::size_t i = 1; i < 10; ++i) {
    EXPECT_NEAR(f.wavelength(i - 1) - f.wavelength(i), 0.2 / 9.0, 1e-15);
    EXPECT_GT(f.omega(i), f.omega(i - 1));
  }
  EXPECT_NEAR(f.omega(0), 4.0 * kPi, 1e-14);
  EXPECT_THROW(FrequencySet(0.3, 0.5, 10), DomainError);
  EXPECT_THROW(FrequencySet(0.5, 0.3, 0), DomainError);
  EXPECT_THROW(FrequencySet(std::vector<double>{0.3, 0.5}), DomainError);
}

TEST(FarField, ZeroContrastIsZero) {
  const ThinInclusion inc(catalog_curve("sigma1"), 0.015, 1.0, 1.0);
  const DirectionSet d = make_directions(8);
  const auto samples = sample_curve(inc, 3);
  for (std::size_t j = 0; j < 8; ++j)
    for (std::size_t l = 0; l < 8; ++l)
      EXPECT_EQ(far_field_entry(j, l, d, 10.0, inc, samples), complex(0.0, 0.0));
}

TEST(FarField, SwapSymmetry) {
  const ThinInclusion inc = sigma1();
  const DirectionSet d = make_directions(12);
  const auto samples = sample_curve(inc, 5);
  for (std::size_t j = 0; j < 12; ++j)
    for (std::size_t l = 0; l < 12; ++l)
      EXPECT_EQ(far_field_entry(j, l, d, 12.0, inc, samples),
                far_field_entry(l, j, d, 12.0, inc, samples));
}

TEST(FarField, SingleSampleAtOriginHandEvaluated) {
  const ThinInclusion inc(polynomial_curve({0.0, 1.0}, {0.0}, -0.1, 0.1), 0.015, 3.0, 2.0);
  const CurveSample s{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, 0.2, 0.0};
  const DirectionSet d = make_directions(6);
  const double w = 9.0;
  const complex pre = 0.015 * w * w * complex(1.0, 1.0) / (4.0 * std::sqrt(w * kPi));
  EXPECT_NEAR(std::abs(far_field_prefactor(0.015, w) - pre), 0.0, 1e-15);
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t l = 0; l < 6; ++l) {
      const Vec2 tj = d.incident(j), tl = d.incident(l);
      const double bracket = (3.0 - 1.0) + 2.0 * (1.0 / 2.0 - 1.0) * tj.x * tl.x +
                             2.0 * (1.0 - 2.0) * tj.y * tl.y;
      const complex expected = pre * 0.2 * bracket;
      EXPECT_NEAR(std::abs(far_field_entry(j, l, d, w, inc, std::span(&s, 1)) - expected), 0.0,
                  1e-14);
    }
}

TEST(FarField, IndexOutOfRange) {
  const ThinInclusion inc = sigma1();
  const auto samples = sample_curve(inc, 2);
  const DirectionSet d = make_directions(4);
  EXPECT_THROW(far_field_entry(4, 0, d, 10.0, inc, samples), DomainError);
  EXPECT_THROW(far_field_entry(0, 7, d, 10.0, inc, samples), DomainError);
}

TEST(AssembleMsr, ZeroContrastGivesZeroMatrix) {
  const ThinInclusion inc(polynomial_curve({0.0, 0.2}, {0.0}, 0.0, 1.0), 0.015, 1.0, 1.0);
  const MsrMatrix k = assemble_msr(make_directions(4), omega_of(0.5), inc);
  EXPECT_TRUE(k.clean());
  EXPECT_EQ(frobenius_norm(k.entries), 0.0);
}

TEST(AssembleMsr, Sigma1Symmetric) {
  for (double lambda : {0.5, 0.4, 0.3}) {
    const MsrMatrix k = assemble_msr(make_directions(48), omega_of(lambda), sigma1());
    EXPECT_EQ(k.size(), 48u);
    EXPECT_LT(symmetry_error(k.entries), 1e-12) << lambda;
  }
}

TEST(AssembleMsr, PermittivityOnlyRankTracksSegmentCount) {
  for (double lambda : {0.5, 0.4, 0.3}) {
    const ThinInclusion inc = sigma1(5.0, 1.0);
    const MsrMatrix k = assemble_msr(make_directions(48), omega_of(lambda), inc);
    const int m = effective_segment_count(inc.curve, lambda);
    EXPECT_LE(std::abs(effective_rank(svd(k), 0.01) - m), 2) << lambda;
  }
}

TEST(AssembleMsr, RankBoundedByThreePerSegment) {
  for (const char* name : {"sigma1", "sigma2"})
    for (double lambda : {0.5, 0.4, 0.3}) {
      const ThinInclusion inc(catalog_curve(name), 0.015, 5.0, 5.0);
      const MsrMatrix k = assemble_msr(make_directions(48), omega_of(lambda), inc);
      const int m = effective_segment_count(inc.curve, lambda);
      const int rank = effective_rank(svd(k), 0.01);
      EXPECT_GE(rank, 1);
      EXPECT_LE(rank, 3 * m) << name << " " << lambda;
    }
}

TEST(AssembleMsr, ResolutionAssumption) {
  EXPECT_THROW(assemble_msr(make_directions(4), omega_of(0.3), sigma1()), ConfigurationError);
  EXPECT_THROW(assemble_msr(make_directions(48), -1.0, sigma1()), DomainError);
}

TEST(AssembleMsr, LinearInPermittivityContrast) {
  const DirectionSet d = make_directions(24);
  const MsrMatrix k2 = assemble_msr(d, omega_of(0.4), sigma1(2.0, 1.0));
  const MsrMatrix k5 = assemble_msr(d, omega_of(0.4), sigma1(5.0, 1.0));
  const auto a = k2.entries.data();
  const auto b = k5.entries.data();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(4.0 * a[i] - b[i]), 0.0, 1e-13);
}

TEST(AssembleMsr, PointSamplePrefactorScaling) {
  const ThinInclusion inc(polynomial_curve({0.0, 1.0}, {0.0}, -0.05, 0.05), 0.015, 5.0, 1.0);
  const CurveSample s{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, 0.1, 0.0};
  const DirectionSet d = make_directions(16);
  const double base = frobenius_norm(assemble_entries(d, 5.0, inc, std::span(&s, 1)));
  for (double w : {7.0, 12.0, 31.0}) {
    const double ratio = frobenius_norm(assemble_entries(d, w, inc, std::span(&s, 1))) / base;
    EXPECT_NEAR(ratio, std::pow(w / 5.0, 1.5), 1e-12 * ratio);
  }
}

TEST(AssembleMsr, MultipleInclusionsAddEntrywise) {
  const DirectionSet d = make_directions(48);
  const std::vector<ThinInclusion> both{sigma1(), ThinInclusion(catalog_curve("sigma2"), 0.015, 10.0, 10.0)};
  const MsrMatrix sum = assemble_msr(d, omega_of(0.3), both);
  const MsrMatrix a = assemble_msr(d, omega_of(0.3), both[0]);
  const MsrMatrix b = assemble_msr(d, omega_of(0.3), both[1]);
  for (std::size_t i = 0; i < sum.entries.data().size(); ++i)
    EXPECT_EQ(sum.entries.data()[i], a.entries.data()[i] + b.entries.data()[i]);
}

TEST(Noise, InfiniteSnrIsNoOp) {
  const MsrMatrix k = assemble_msr(make_directions(16), omega_of(0.5), sigma1());
  const MsrMatrix same = add_awgn(k, INFINITY, 3);
  EXPECT_TRUE(bitwise_equal(k.entries, same.entries));
  EXPECT_TRUE(same.clean());
}

TEST(Noise, SeededDeterminism) {
  const MsrMatrix k = assemble_msr(make_directions(48), omega_of(0.5), sigma1());
  const MsrMatrix a = add_awgn(k, 10.0, 42);
  const MsrMatrix b = add_awgn(k, 10.0, 42);
  EXPECT_TRUE(bitwise_equal(a.entries, b.entries));
  EXPECT_FALSE(bitwise_equal(a.entries, add_awgn(k, 10.0, 43).entries));
  EXPECT_FALSE(bitwise_equal(a.entries, add_awgn(k, 10.0, 42, 1).entries));
  ASSERT_EQ(a.noise.size(), 1u);
  EXPECT_EQ(a.noise[0], (NoiseRecord{10.0, 42, 0}));
}

TEST(Noise, Composes) {
  const MsrMatrix k = assemble_msr(make_directions(16), omega_of(0.5), sigma1());
  const MsrMatrix twice = add_awgn(add_awgn(k, 20.0, 1), 15.0, 2, 5);
  ASSERT_EQ(twice.noise.size(), 2u);
  EXPECT_EQ(twice.noise[1], (NoiseRecord{15.0, 2, 5}));
}

TEST(Noise, RejectsInvalidSnr) {
  const MsrMatrix k = assemble_msr(make_directions(8), omega_of(0.5),
                                   ThinInclusion(polynomial_curve({0.0, 0.2}, {0.0}, 0.0, 1.0), 0.015, 5, 5));
  EXPECT_THROW(add_awgn(k, NAN, 0), DomainError);
  EXPECT_THROW(add_awgn(k, -INFINITY, 0), DomainError);
}

TEST(Noise, CalibratedPowerAndCircularity) {
  const MsrMatrix k = assemble_msr(make_directions(48), omega_of(0.5), sigma1());
  const double ps = signal_power(k.entries);
  double noise = 0.0, re2 = 0.0, im2 = 0.0, reim = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const MsrMatrix n = add_awgn(k, 10.0, seed);
    const auto a = n.entries.data();
    const auto b = k.entries.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const complex eta = a[i] - b[i];
      noise += std::norm(eta);
      re2 += eta.real() * eta.real();
      im2 += eta.imag() * eta.imag();
      reim += eta.real() * eta.imag();
      ++count;
    }
  }
  const double snr = 10.0 * std::log10(ps / (noise / count));
  EXPECT_NEAR(snr, 10.0, 0.5);
  EXPECT_NEAR(re2 / im2, 1.0, 0.02);
  EXPECT_NEAR(reim / count / (ps / 10.0), 0.0, 0.01);
}
