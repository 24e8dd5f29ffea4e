#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "msrimg/geometry.hpp"
#include "msrimg/types.hpp"

namespace msrimg {

// N incident directions theta_l on the unit circle; observation directions are
// the opposites, vartheta_j = -theta_j.
class DirectionSet {
 public:
  explicit DirectionSet(std::vector<Vec2> incident);

  std::size_t size() const noexcept { return incident_.size(); }
  Vec2 incident(std::size_t l) const { return incident_.at(l); }
  Vec2 observation(std::size_t j) const { return -incident_.at(j); }
  std::span<const Vec2> incident() const noexcept { return incident_; }

  bool operator==(const DirectionSet&) const = default;

 private:
  std::vector<Vec2> incident_;
};

/// theta_l = -(cos 2 pi (l-1)/N, sin 2 pi (l-1)/N), l = 1..N (stored 0-based).
DirectionSet make_directions(int n);

// Wavelengths lambda_1 >= ... >= lambda_F, equally spaced, with omega_f = 2 pi / lambda_f.
class FrequencySet {
 public:
  FrequencySet(double lambda_max, double lambda_min, int count);
  explicit FrequencySet(std::vector<double> wavelengths);

  std::size_t size() const noexcept { return wavelengths_.size(); }
  double wavelength(std::size_t f) const { return wavelengths_.at(f); }
  double omega(std::size_t f) const;
  std::span<const double> wavelengths() const noexcept { return wavelengths_; }

 private:
  std::vector<double> wavelengths_;
};

struct NoiseRecord {
  double snr_db;
  std::uint64_t seed;
  std::uint64_t stream;

  bool operator==(const NoiseRecord&) const = default;
};

// Far-field MSR matrix at one frequency. Entry (j, l) pairs observation
// direction j with incident direction l. Clean iff no noise was applied.
struct MsrMatrix {
  DirectionSet directions;
  double omega;
  ComplexMatrix entries;
  std::vector<NoiseRecord> noise;

  std::size_t size() const noexcept { return directions.size(); }
  bool clean() const noexcept { return noise.empty(); }
};

/// h * omega^2 (1 + i) / (4 sqrt(omega pi)).
complex far_field_prefactor(double half_thickness, double omega);

/// One MSR element from a sampled inclusion (0-based j, l):
///   prefactor * sum_m w_m [ (eps - eps0) + 2 (1/mu - 1/mu0)(theta_j.t_m)(theta_l.t_m)
///                          + 2 (1/mu0 - mu/mu0^2)(theta_j.n_m)(theta_l.n_m) ]
///                       * exp(i omega (theta_j + theta_l).y_m)
/// where w_m = |sigma| / M is the sample weight.
complex far_field_entry(std::size_t j, std::size_t l, const DirectionSet& dirs, double omega,
                        const ThinInclusion& inclusion, std::span<const CurveSample> samples);

/// Matrix for explicitly sampled scatterers; no resolution check.
ComplexMatrix assemble_entries(const DirectionSet& dirs, double omega,
                               const ThinInclusion& inclusion,
                               std::span<const CurveSample> samples);

/// Samples each inclusion with M = effective_segment_count(curve, 2 pi / omega)
/// and sums the per-inclusion matrices. Throws ConfigurationError if any M >= N.
MsrMatrix assemble_msr(const DirectionSet& dirs, double omega, const ThinInclusion& inclusion,
                       const Quadrature& q = {});
MsrMatrix assemble_msr(const DirectionSet& dirs, double omega,
                       std::span<const ThinInclusion> inclusions, const Quadrature& q = {});

/// Mean squared entry magnitude (1/N^2) sum |K_jl|^2.
double signal_power(const ComplexMatrix& k);

/// Adds circular complex Gaussian noise with per-entry variance
/// signal_power(K) * 10^(-snr_db/10), drawn row-major (real then imaginary part)
/// from GaussianStream(seed, stream). snr_db = +inf means no noise and returns
/// K unchanged; NaN or -inf are domain errors.
MsrMatrix add_awgn(const MsrMatrix& k, double snr_db, std::uint64_t seed,
                   std::uint64_t stream = 0);

}  // namespace msrimg
