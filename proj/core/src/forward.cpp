#include "msrimg/forward.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "msrimg/errors.hpp"
#include "msrimg/rng.hpp"

namespace msrimg {

DirectionSet::DirectionSet(std::vector<Vec2> incident) : incident_(std::move(incident)) {
  if (incident_.size() < 2) throw DomainError("DirectionSet: requires N >= 2");
  for (const Vec2& d : incident_) {
    if (std::fabs(norm(d) - 1.0) > 1e-12) throw DomainError("DirectionSet: directions must be unit vectors");
  }
  for (std::size_t a = 0; a < incident_.size(); ++a)
    for (std::size_t b = a + 1; b < incident_.size(); ++b)
      if (distance(incident_[a], incident_[b]) < 1e-12)
        throw DomainError("DirectionSet: directions must be distinct");
}

DirectionSet make_directions(int n) {
  if (n < 2) throw DomainError("make_directions: requires N >= 2");
  std::vector<Vec2> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const double angle = 2.0 * std::numbers::pi * l / n;
    dirs.push_back({-std::cos(angle), -std::sin(angle)});
  }
  return DirectionSet(std::move(dirs));
}

FrequencySet::FrequencySet(double lambda_max, double lambda_min, int count) {
  if (count < 1) throw DomainError("FrequencySet: requires F >= 1");
  if (!(lambda_min > 0.0) || !(lambda_min <= lambda_max))
    throw DomainError("FrequencySet: requires 0 < lambda_min <= lambda_max");
  if (count > 1 && !(lambda_min < lambda_max))
    throw DomainError("FrequencySet: F > 1 requires lambda_min < lambda_max");
  wavelengths_.reserve(static_cast<std::size_t>(count));
  for (int f = 0; f < count; ++f) {
    const double lambda = (count == 1) ? lambda_max
                          : (f + 1 == count)
                              ? lambda_min
                              : lambda_max + (lambda_min - lambda_max) * f / (count - 1);
    wavelengths_.push_back(lambda);
  }
}

FrequencySet::FrequencySet(std::vector<double> wavelengths) : wavelengths_(std::move(wavelengths)) {
  if (wavelengths_.empty()) throw DomainError("FrequencySet: requires F >= 1");
  for (std::size_t f = 0; f < wavelengths_.size(); ++f) {
    if (!(wavelengths_[f] > 0.0)) throw DomainError("FrequencySet: wavelengths must be > 0");
    if (f > 0 && !(wavelengths_[f] < wavelengths_[f - 1]))
      throw DomainError("FrequencySet: wavelengths must be strictly decreasing");
  }
}

double FrequencySet::omega(std::size_t f) const { return 2.0 * std::numbers::pi / wavelength(f); }

complex far_field_prefactor(double half_thickness, double omega) {
  return half_thickness * omega * omega * complex(1.0, 1.0) /
         (4.0 * std::sqrt(omega * std::numbers::pi));
}

namespace {

struct Contrast {
  double permittivity;  // eps - eps0
  double tangential;    // 2 (1/mu - 1/mu0)
  double normal;        // 2 (1/mu0 - mu/mu0^2)
};

Contrast contrast_of(const ThinInclusion& inc) {
  const double mu0 = inc.background_permeability;
  return {inc.permittivity - inc.background_permittivity,
          2.0 * (1.0 / inc.permeability - 1.0 / mu0),
          2.0 * (1.0 / mu0 - inc.permeability / (mu0 * mu0))};
}

complex entry_sum(Vec2 theta_j, Vec2 theta_l, double omega, const Contrast& c,
                  std::span<const CurveSample> samples) {
  complex sum = 0.0;
  const Vec2 phase_dir = theta_j + theta_l;
  for (const CurveSample& s : samples) {
    // Products grouped so the summand is bitwise symmetric under j <-> l.
    const double bracket = c.permittivity +
                           c.tangential * (dot(theta_j, s.tangent) * dot(theta_l, s.tangent)) +
                           c.normal * (dot(theta_j, s.normal) * dot(theta_l, s.normal));
    sum += s.weight * bracket * std::polar(1.0, omega * dot(phase_dir, s.point));
  }
  return sum;
}

}  // namespace

complex far_field_entry(std::size_t j, std::size_t l, const DirectionSet& dirs, double omega,
                        const ThinInclusion& inclusion, std::span<const CurveSample> samples) {
  if (j >= dirs.size() || l >= dirs.size())
    throw DomainError("far_field_entry: index out of range");
  return far_field_prefactor(inclusion.half_thickness, omega) *
         entry_sum(dirs.incident(j), dirs.incident(l), omega, contrast_of(inclusion), samples);
}

ComplexMatrix assemble_entries(const DirectionSet& dirs, double omega,
                               const ThinInclusion& inclusion,
                               std::span<const CurveSample> samples) {
  if (!(omega > 0.0)) throw DomainError("assemble_entries: omega must be > 0");
  const std::size_t n = dirs.size();
  const complex pref = far_field_prefactor(inclusion.half_thickness, omega);
  const Contrast c = contrast_of(inclusion);
  ComplexMatrix k(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
      k(j, l) = pref * entry_sum(dirs.incident(j), dirs.incident(l), omega, c, samples);
  return k;
}

MsrMatrix assemble_msr(const DirectionSet& dirs, double omega, const ThinInclusion& inclusion,
                       const Quadrature& q) {
  return assemble_msr(dirs, omega, std::span<const ThinInclusion>(&inclusion, 1), q);
}

MsrMatrix assemble_msr(const DirectionSet& dirs, double omega,
                       std::span<const ThinInclusion> inclusions, const Quadrature& q) {
  if (!(omega > 0.0)) throw DomainError("assemble_msr: omega must be > 0");
  if (inclusions.empty()) throw ConfigurationError("assemble_msr: no inclusions");
  const std::size_t n = dirs.size();
  const double wavelength = 2.0 * std::numbers::pi / omega;
  MsrMatrix out{dirs, omega, ComplexMatrix(n, n), {}};
  for (const ThinInclusion& inc : inclusions) {
    const int m = effective_segment_count(inc.curve, wavelength, q);
    if (static_cast<std::size_t>(m) >= n) {
      throw ConfigurationError("assemble_msr: " + std::to_string(m) + " segments on '" +
                               inc.curve.name() + "' is not below N = " + std::to_string(n));
    }
    const auto samples = sample_curve(inc, m, q);
    const ComplexMatrix part = assemble_entries(dirs, omega, inc, samples);
    auto dst = out.entries.data();
    auto src = part.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  return out;
}

double signal_power(const ComplexMatrix& k) {
  if (k.data().empty()) return 0.0;
  double sum = 0.0;
  for (const complex& v : k.data()) sum += std::norm(v);
  return sum / static_cast<double>(k.data().size());
}

MsrMatrix add_awgn(const MsrMatrix& k, double snr_db, std::uint64_t seed, std::uint64_t stream) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
    throw DomainError("add_awgn: snr_db must be finite or +inf");
  if (snr_db == std::numeric_limits<double>::infinity()) return k;

  const double variance = signal_power(k.entries) * std::pow(10.0, -snr_db / 10.0);
  const double component_sd = std::sqrt(variance / 2.0);
  GaussianStream rng(seed, stream);
  MsrMatrix out = k;
  for (complex& v : out.entries.data()) {
    const double re = rng.normal();
    const double im = rng.normal();
    v += complex(component_sd * re, component_sd * im);
  }
  out.noise.push_back({snr_db, seed, stream});
  return out;
}

}  // namespace msrimg
