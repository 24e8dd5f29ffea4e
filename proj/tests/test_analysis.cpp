#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "msrimg/analysis.hpp"
#include "msrimg/errors.hpp"
#include "oracles.hpp"

using namespace msrimg;

namespace {

constexpr double kPi = std::numbers::pi;
const BandLimits kBand(2.0 * kPi / 0.5, 2.0 * kPi / 0.3, 10);
const ScattererSet kOrigin({{0.0, 0.0}});

double band_integral(double r, auto&& weight) {
  return oracle::integrate([&](double w) { return weight(w) * oracle::j0sq(w * r); },
                           kBand.omega_min, kBand.omega_max);
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Band, Validation) {
  EXPECT_THROW(BandLimits(0.0, 1.0, 2), DomainError);
  EXPECT_THROW(BandLimits(2.0, 1.0, 2), DomainError);
  EXPECT_THROW(BandLimits(1.0, 2.0, 1), DomainError);
  EXPECT_THROW(ScattererSet({}), DomainError);
  EXPECT_THROW(ScattererSet({{NAN, 0.0}}), DomainError);
}

TEST(AnalyticSf, Examples) {
  EXPECT_EQ(analytic_sf({0.0, 0.0}, kOrigin, 12.0), 1.0);
  const double zero = 2.404825557695773;
  EXPECT_NEAR(analytic_sf({zero / 12.0, 0.0}, kOrigin, 12.0), 0.0, 1e-10);
  const ScattererSet pair({{-0.2, 0.0}, {0.2, 0.0}});
  const Point2 z{0.0, 0.3};
  EXPECT_NEAR(analytic_sf(z, pair, 15.0), 2.0 * analytic_sf(z, ScattererSet({{0.2, 0.0}}), 15.0), 1e-15);
  EXPECT_THROW(analytic_sf(z, pair, 0.0), DomainError);
}

TEST(AnalyticSf, BoundedByScattererCount) {
  const ScattererSet three({{0.1, 0.1}, {-0.3, 0.2}, {0.4, -0.5}});
  for (double x = -1.0; x <= 1.0; x += 0.05)
    for (double y = -1.0; y <= 1.0; y += 0.05) EXPECT_LT(analytic_sf({x, y}, three, 14.0), 3.0);
  const ScattererSet coincident({{0.2, 0.2}, {0.2, 0.2}});
  EXPECT_EQ(analytic_sf({0.2, 0.2}, coincident, 14.0), 2.0);
}

TEST(AnalyticMf, Examples) {
  EXPECT_NEAR(analytic_mf({0.0, 0.0}, kOrigin, kBand), 10.0, 1e-12);
  const double r = 100.0 / kBand.omega_min * 1.01;
  EXPECT_LT(analytic_mf({r, 0.0}, kOrigin, kBand), 0.05 * 10.0);
  const double brute = 10.0 / kBand.width() * band_integral(0.1, [](double) { return 1.0; });
  EXPECT_LT(relative(analytic_mf({0.1, 0.0}, kOrigin, kBand), brute), 1e-6);
}

TEST(AnalyticWmf, Examples) {
  for (double r : {0.0, 0.03, 0.2, 0.7}) {
    const Point2 z{r, 0.0};
    EXPECT_NEAR(analytic_wmf(z, kOrigin, kBand, 0), analytic_mf(z, kOrigin, kBand), 1e-10);
  }
  EXPECT_NEAR(analytic_wmf({0.0, 0.0}, kOrigin, kBand, 1),
              10.0 * (kBand.omega_max + kBand.omega_min) / 2.0, 1e-10);
  const double brute = 10.0 / kBand.width() * band_integral(0.1, [](double w) { return w; });
  EXPECT_LT(relative(analytic_wmf({0.1, 0.0}, kOrigin, kBand, 1), brute), 1e-6);
  EXPECT_THROW(analytic_wmf({0.0, 0.0}, kOrigin, kBand, -1), DomainError);
}

TEST(AnalyticWmf, RemainderVanishesForLinearWeight) {
  for (double r : {0.0, 0.05, 0.3, 2.0}) EXPECT_EQ(wmf_remainder(r, kBand, 1), 0.0);
  const double j1 = oracle::integrate([](double w) { return std::pow(oracle::bessel_j(1, 0.2 * w), 2); },
                                      kBand.omega_min, kBand.omega_max);
  EXPECT_NEAR(wmf_remainder(0.2, kBand, 0), j1 / kBand.width(), 1e-10);
}

TEST(AnalyticLog, Examples) {
  const double w1 = kBand.omega_min, wf = kBand.omega_max;
  const double at_zero = 10.0 / (wf - w1) * (wf * std::log(wf) - w1 * std::log(w1) - (wf - w1));
  EXPECT_NEAR(analytic_log({0.0, 0.0}, kOrigin, kBand), at_zero, 1e-10 * at_zero);
  const double near = analytic_log({0.1, 0.0}, kOrigin, kBand);
  EXPECT_GT(near, 0.0);
  EXPECT_GT(near, analytic_log({0.5, 0.0}, kOrigin, kBand));
  EXPECT_THROW(analytic_log({0.0, 0.0}, kOrigin, BandLimits(1.0, 3.0, 4)), DomainError);
  EXPECT_THROW(analytic_log({0.0, 0.0}, kOrigin, BandLimits(0.5, 3.0, 4)), DomainError);
}

TEST(AnalyticLog, MultipleScatterersMatchBruteForce) {
  const ScattererSet set({{0.1, -0.1}, {0.35, 0.2}, {-0.4, 0.0}});
  for (Point2 z : {Point2{0.0, 0.0}, Point2{0.3, 0.3}, Point2{-0.7, 0.4}}) {
    double brute = 0.0;
    for (Point2 y : set.points)
      brute += band_integral(distance(z, y), [](double w) { return std::log(w); });
    brute *= 10.0 / kBand.width();
    EXPECT_LT(relative(analytic_log(z, set, kBand), brute), 1e-6);
  }
}

class ClosedFormVsQuadrature : public ::testing::TestWithParam<double> {};

TEST_P(ClosedFormVsQuadrature, AllWeights) {
  const double r = GetParam();
  const Point2 z{r, 0.0};
  const double scale = 10.0 / kBand.width();
  EXPECT_LT(relative(analytic_mf(z, kOrigin, kBand),
                     scale * band_integral(r, [](double) { return 1.0; })), 1e-6);
  for (int n : {0, 1, 2, 3})
    EXPECT_LT(relative(analytic_wmf(z, kOrigin, kBand, n),
                       scale * band_integral(r, [n](double w) { return std::pow(w, n); })), 1e-6)
        << "n=" << n;
  EXPECT_LT(relative(analytic_log(z, kOrigin, kBand),
                     scale * band_integral(r, [](double w) { return std::log(w); })), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Radii, ClosedFormVsQuadrature, ::testing::Values(0.01, 0.05, 0.1, 0.3, 1.0));

TEST(E1E2, SmallRadiusLimit) {
  const E1E2 e = e1_e2(1e-4, kBand);
  EXPECT_NEAR(e.e1, kBand.width(), 1e-3);
  EXPECT_LT(std::abs(e.e2), 1e-4);
}

TEST(E1E2, DominanceNearScatterer) {
  const E1E2 e = e1_e2(0.05, kBand);
  EXPECT_GT(e.e1, e.e2);
}

TEST(E1E2, NegligibleFarAway) {
  const E1E2 e = e1_e2(10.0, kBand);
  EXPECT_LT(std::abs(e.e1), 0.1 * kBand.width());
  EXPECT_LT(std::abs(e.e2), 0.1 * kBand.width());
}

TEST(E1E2, NegativeDifferenceInsideSmallArgumentRegion) {
  const double r0 = std::sqrt(2.0) / kBand.omega_max;
  for (int i = 1; i <= 60; ++i) {
    const double r = r0 * i / 60.0;
    EXPECT_LT(e1_e2(r, kBand).difference(), 0.0) << r;
  }
}

TEST(E1E2, MatchesOracleAndValidates) {
  const E1E2 e = e1_e2(0.2, kBand);
  EXPECT_LT(relative(e.e1, band_integral(0.2, [](double) { return 1.0; })), 1e-8);
  const double e2 = oracle::integrate(
      [](double w) { return (std::log(w) - 1.0) * std::pow(oracle::bessel_j(1, 0.2 * w), 2); },
      kBand.omega_min, kBand.omega_max);
  EXPECT_LT(relative(e.e2, e2), 1e-8);
  EXPECT_THROW(e1_e2(0.0, kBand), DomainError);
}

TEST(E1E2, CsvExport) {
  std::ostringstream os;
  const std::vector<double> radii{0.01, 0.1, 1.0};
  write_e1e2_csv(os, radii, kBand);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("# msrimg e1-e2 v1", 0), 0u);
  std::getline(is, line);
  EXPECT_EQ(line, "r,E1,E2,minus_E1_plus_E2");
  int rows = 0;
  while (std::getline(is, line)) {
    double r, e1, e2, d;
    char c1, c2, c3;
    std::istringstream ls(line);
    ASSERT_TRUE(ls >> r >> c1 >> e1 >> c2 >> e2 >> c3 >> d);
    EXPECT_DOUBLE_EQ(d, -e1 + e2);
    EXPECT_EQ(r, radii[static_cast<std::size_t>(rows)]);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}
