#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msrimg/forward.hpp"
#include "msrimg/geometry.hpp"
#include "msrimg/imaging.hpp"

namespace msrimg {

/// Curve text: a catalog name ("sigma1", "sigma2") or
/// "poly(x: a0 a1 ...; y: b0 b1 ...; s: s_min s_max)" with ascending-power coefficients.
ParametricCurve parse_curve(const std::string& text);

struct InclusionSpec {
  std::string curve;
  double half_thickness{0.015};
  double permittivity{5.0};
  double permeability{5.0};

  ThinInclusion build() const;
};

// Per-inclusion lists (curves, eps, mu, h) broadcast when they hold a single value.
struct ExperimentConfig {
  std::string name{"custom"};
  std::vector<std::string> curves{"sigma1"};
  std::vector<double> eps{5.0};
  std::vector<double> mu{5.0};
  std::vector<double> h{0.015};
  int directions{48};
  int frequencies{10};
  double lambda_max{0.5};
  double lambda_min{0.3};
  std::optional<double> snr_db{10.0};  // nullopt: clean data
  std::uint64_t seed{0};
  std::vector<Functional> functionals{Functional::mf(), Functional::wmf(1), Functional::log()};
  int grid_nx{201};
  int grid_ny{201};
  double half_width{1.0};
  double tau{0.01};
  std::array<double, 3> c{1.0, 0.0, 1.0};
  bool expected_failure{false};     // preset known not to show the LOG improvement
  std::filesystem::path out_dir{};  // empty: nothing persisted; not part of the snapshot

  std::vector<InclusionSpec> inclusions() const;
  void validate() const;

  /// Canonical key=value text; parse_config(serialize()) reproduces every field but out_dir.
  std::string serialize() const;
  std::uint64_t hash() const;  // FNV-1a of serialize()
};

/// "fig1" .. "fig4".
ExperimentConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Applies one key=value setting. Keys: preset, name, curve, curves, eps, mu, h, N, F,
/// lambda_max, lambda_min, snr_db, seed, functional, functionals, grid, domain, tau, c,
/// expected_failure, out_dir. "preset" replaces everything set so far.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat key=value lines; '#' starts a comment. Starts from the default configuration.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config_file(const std::filesystem::path& path);

struct FunctionalMetrics {
  std::string tag;
  double sidelobe_energy;
  double localization_error;
  double peak_value;
  Point2 peak_location;
};

struct FrequencySpectrum {
  double wavelength;
  double omega;
  std::vector<double> singular_values;
  int effective_rank;
};

struct Provenance {
  std::uint64_t config_hash;
  std::uint64_t seed;
  std::string timestamp;  // UTC, ISO 8601
  std::string version;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ImageMap> maps;  // in requested order
  std::vector<FunctionalMetrics> metrics;
  std::vector<FrequencySpectrum> spectra;
  std::vector<MsrMatrix> measurements;
  double tube_radius;
  int localization_k;
  Provenance provenance;

  const ImageMap& map(std::string_view tag) const;
  const FunctionalMetrics& metric(std::string_view tag) const;
};

/// Assemble, perturb and factor every frequency, build every requested map, score them,
/// and persist to cfg.out_dir when it is set. Errors carry the configuration name and hash.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Fraction of map mass at grid points farther than tube_radius from every curve.
double sidelobe_energy(const ImageMap& map, std::span<const ParametricCurve> curves,
                       double tube_radius);

/// Mean distance to the nearest curve over the k largest grid values (ties: lower index first).
double localization_error(const ImageMap& map, std::span<const ParametricCurve> curves, int k);

/// Writes config.cfg, msr_fNN.txt, sv_fNN.csv, map_TAG.csv, map_TAG.pgm and report.json.
void persist_report(const ExperimentReport& report, const std::filesystem::path& dir);

void write_report_json(std::ostream& os, const ExperimentReport& report);

}  // namespace msrimg
