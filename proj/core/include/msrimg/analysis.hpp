#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "msrimg/specfun.hpp"
#include "msrimg/types.hpp"

namespace msrimg {

// Effective scatterer points y_m (one per lambda/2 segment).
struct ScattererSet {
  explicit ScattererSet(std::vector<Point2> points);
  std::vector<Point2> points;
};

// Frequency band [omega_1, omega_F] sampled by F frequencies.
struct BandLimits {
  BandLimits(double omega_min, double omega_max, int count);
  double omega_min;
  double omega_max;
  int count;

  double width() const noexcept { return omega_max - omega_min; }
};

/// sum_m J0(omega |z - y_m|)^2.
double analytic_sf(Point2 z, const ScattererSet& scatterers, double omega);

/// Multi-frequency structure, for each r_m = |z - y_m|:
///   F/(wF - w1) { wF L(wF r) - w1 L(w1 r) + int_{w1}^{wF} J1(w r)^2 dw },
/// L = J0^2 + J1^2. This is the closed form of F/(wF - w1) int J0(w r)^2 dw.
double analytic_mf(Point2 z, const ScattererSet& scatterers, const BandLimits& band,
                   const Quadrature& q = {});

/// The remainder D(r, w1, wF; n) of the omega^n-weighted structure:
/// (1 - n)/(wF - w1) int_{w1}^{wF} w^n J1(w r)^2 dw. Identically zero for n = 1.
double wmf_remainder(double r, const BandLimits& band, int n, const Quadrature& q = {});

/// omega^n-weighted structure
///   F/(n+1) sum_m { wF^(n+1)/(wF-w1) L(wF r) - w1^(n+1)/(wF-w1) L(w1 r) + D },
/// equal to F/(wF - w1) int w^n J0(w r)^2 dw.
double analytic_wmf(Point2 z, const ScattererSet& scatterers, const BandLimits& band, int n,
                    const Quadrature& q = {});

/// ln(omega)-weighted structure
///   F/(wF-w1) sum_m { wF ln wF L(wF r) - w1 ln w1 L(w1 r)
///                     - int [J0(w r)^2 - (ln w - 1) J1(w r)^2] dw }.
/// Requires omega_1 > 1.
double analytic_log(Point2 z, const ScattererSet& scatterers, const BandLimits& band,
                    const Quadrature& q = {});

struct E1E2 {
  double e1;  // int J0(w r)^2 dw
  double e2;  // int (ln w - 1) J1(w r)^2 dw

  double difference() const noexcept { return -e1 + e2; }
};

/// Both integrals over [omega_1, omega_F] for r > 0.
E1E2 e1_e2(double r, const BandLimits& band, const Quadrature& q = {});

/// CSV "r,E1,E2,minus_E1_plus_E2" after a version line.
void write_e1e2_csv(std::ostream& os, std::span<const double> radii, const BandLimits& band,
                    const Quadrature& q = {});

}  // namespace msrimg
