#include "msrimg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "msrimg/errors.hpp"
#include "msrimg/io.hpp"
#include "msrimg/spectral.hpp"
#include "parallel.hpp"

#ifndef MSRIMG_VERSION
#define MSRIMG_VERSION "unknown"
#endif

namespace msrimg {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string frequency_stem(const char* prefix, std::size_t f) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s_f%02zu", prefix, f + 1);
  return buf;
}

std::vector<double> nearest_curve_distance(const ImageGrid& grid,
                                           std::span<const ParametricCurve> curves) {
  if (curves.empty()) throw DomainError("metrics: at least one curve is required");
  std::vector<CurvePolyline> polylines;
  polylines.reserve(curves.size());
  for (const ParametricCurve& c : curves) polylines.emplace_back(c);
  std::vector<double> dist(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      double best = std::numeric_limits<double>::infinity();
      for (const CurvePolyline& poly : polylines) best = std::min(best, poly.distance(grid.point(p)));
      dist[p] = best;
    }
  });
  return dist;
}

std::ofstream open_output(const std::filesystem::path& path, bool binary = false) {
  std::ofstream os(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
  if (!os) throw IoError("cannot write '" + path.string() + "'");
  return os;
}

}  // namespace

const ImageMap& ExperimentReport::map(std::string_view tag) const {
  for (const ImageMap& m : maps)
    if (m.functional.tag() == tag) return m;
  throw ConfigurationError("report has no map '" + std::string(tag) + "'");
}

const FunctionalMetrics& ExperimentReport::metric(std::string_view tag) const {
  for (const FunctionalMetrics& m : metrics)
    if (m.tag == tag) return m;
  throw ConfigurationError("report has no metrics for '" + std::string(tag) + "'");
}

double sidelobe_energy(const ImageMap& map, std::span<const ParametricCurve> curves,
                       double tube_radius) {
  if (!(tube_radius > 0.0)) throw DomainError("sidelobe_energy: tube radius must be > 0");
  const std::vector<double> values = map.normalized();
  const std::vector<double> dist = nearest_curve_distance(map.grid, curves);
  double outside = 0.0;
  double total = 0.0;
  for (std::size_t p = 0; p < values.size(); ++p) {
    total += values[p];
    if (dist[p] > tube_radius) outside += values[p];
  }
  if (!(total > 0.0)) throw NumericalError("sidelobe_energy: map has no mass");
  return outside / total;
}

double localization_error(const ImageMap& map, std::span<const ParametricCurve> curves, int k) {
  if (k < 1) throw DomainError("localization_error: k must be >= 1");
  if (static_cast<std::size_t>(k) > map.values.size())
    throw DomainError("localization_error: k exceeds the grid size");
  std::vector<std::size_t> order(map.values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (map.values[a] != map.values[b]) return map.values[a] > map.values[b];
                      return a < b;
                    });
  std::vector<CurvePolyline> polylines;
  for (const ParametricCurve& c : curves) polylines.emplace_back(c);
  if (polylines.empty()) throw DomainError("localization_error: at least one curve is required");
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const Point2 z = map.grid.point(order[static_cast<std::size_t>(i)]);
    double best = std::numeric_limits<double>::infinity();
    for (const CurvePolyline& poly : polylines) best = std::min(best, poly.distance(z));
    sum += best;
  }
  return sum / k;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  try {
    cfg.validate();
    std::vector<ThinInclusion> inclusions;
    std::vector<ParametricCurve> curves;
    for (const InclusionSpec& spec : cfg.inclusions()) {
      inclusions.push_back(spec.build());
      curves.push_back(inclusions.back().curve);
    }
    const DirectionSet dirs = make_directions(cfg.directions);
    const FrequencySet freqs(cfg.lambda_max, cfg.lambda_min, cfg.frequencies);
    const std::size_t count = freqs.size();

    std::vector<std::optional<SpectralData>> slots(count);
    detail::parallel_for(
        count,
        [&](std::size_t begin, std::size_t end) {
          for (std::size_t f = begin; f < end; ++f) {
            MsrMatrix k = assemble_msr(dirs, freqs.omega(f), inclusions);
            if (cfg.snr_db) k = add_awgn(k, *cfg.snr_db, cfg.seed, f);
            SvdFactors factors = svd(k);
            slots[f] = SpectralData{std::move(k), std::move(factors)};
          }
        },
        1);
    std::vector<SpectralData> data;
    data.reserve(count);
    for (auto& s : slots) data.push_back(std::move(*s));

    const ImageGrid grid(-cfg.half_width, cfg.half_width, -cfg.half_width, cfg.half_width,
                         cfg.grid_nx, cfg.grid_ny);
    const SteeringConfig steering{cfg.c, true};
    std::size_t needed = 0;
    for (const Functional& f : cfg.functionals) {
      needed = std::max(needed, f.kind == FunctionalKind::single ? std::size_t{1} : count);
      for (std::size_t i = 0; i < (f.kind == FunctionalKind::single ? 1 : count); ++i)
        frequency_weight(f, freqs.omega(i));
    }
    std::vector<std::vector<complex>> terms;
    std::vector<double> omegas;
    for (std::size_t f = 0; f < needed; ++f) {
      terms.push_back(subspace_terms(data[f].msr, data[f].factors, grid, steering, cfg.tau));
      omegas.push_back(data[f].msr.omega);
    }

    ExperimentReport report{.config = cfg,
                            .maps = {},
                            .metrics = {},
                            .spectra = {},
                            .measurements = {},
                            .tube_radius = freqs.wavelength(count - 1) / 2.0,
                            .localization_k = effective_rank(data.back().factors, cfg.tau),
                            .provenance = {cfg.hash(), cfg.seed, utc_timestamp(), MSRIMG_VERSION}};

    for (const Functional& functional : cfg.functionals) {
      const std::size_t used = functional.kind == FunctionalKind::single ? 1 : count;
      ImageMap map = combine_terms(std::span(terms).first(used), std::span(omegas).first(used),
                                   functional, grid);
      const auto peak = std::max_element(map.values.begin(), map.values.end());
      const auto peak_index = static_cast<std::size_t>(peak - map.values.begin());
      FunctionalMetrics m{functional.tag(), sidelobe_energy(map, curves, report.tube_radius),
                          localization_error(map, curves, report.localization_k), *peak,
                          grid.point(peak_index)};
      for (double v : {m.sidelobe_energy, m.localization_error, m.peak_value})
        if (!std::isfinite(v)) throw NumericalError("non-finite metric for " + m.tag);
      report.metrics.push_back(std::move(m));
      report.maps.push_back(std::move(map));
    }

    for (std::size_t f = 0; f < count; ++f) {
      report.spectra.push_back({freqs.wavelength(f), data[f].msr.omega, data[f].factors.s,
                                effective_rank(data[f].factors, cfg.tau)});
      report.measurements.push_back(std::move(data[f].msr));
    }

    if (!cfg.out_dir.empty()) persist_report(report, cfg.out_dir);
    return report;
  } catch (Error& e) {
    e.add_context("experiment '" + cfg.name + "' [config " + hex64(cfg.hash()) + "]");
    throw;
  }
}

void write_report_json(std::ostream& os, const ExperimentReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format"] = "msrimg-report 1";
  j["name"] = report.config.name;
  j["expected_failure"] = report.config.expected_failure;
  j["provenance"] = {{"config_hash", hex64(report.provenance.config_hash)},
                     {"seed", report.provenance.seed},
                     {"timestamp", report.provenance.timestamp},
                     {"version", report.provenance.version},
                     {"grid", {report.config.grid_nx, report.config.grid_ny}}};
  j["tube_radius"] = report.tube_radius;
  j["localization_k"] = report.localization_k;
  ordered_json metrics = ordered_json::object();
  for (const FunctionalMetrics& m : report.metrics)
    metrics[m.tag] = {{"sidelobe_energy", m.sidelobe_energy},
                      {"localization_error", m.localization_error},
                      {"peak_value", m.peak_value},
                      {"peak_location", {m.peak_location.x, m.peak_location.y}}};
  j["metrics"] = std::move(metrics);
  ordered_json spectra = ordered_json::array();
  for (const FrequencySpectrum& s : report.spectra)
    spectra.push_back({{"wavelength", s.wavelength},
                       {"omega", s.omega},
                       {"effective_rank", s.effective_rank},
                       {"singular_values", s.singular_values}});
  j["spectra"] = std::move(spectra);
  os << j.dump(2) << '\n';
}

void persist_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  open_output(dir / "config.cfg") << report.config.serialize();
  for (std::size_t f = 0; f < report.measurements.size(); ++f) {
    const MsrMatrix& k = report.measurements[f];
    write_msr_file(dir / (frequency_stem("msr", f) + ".txt"), k);
    auto sv = open_output(dir / (frequency_stem("sv", f) + ".csv"));
    SvdFactors only_values{ComplexMatrix(0, 0), report.spectra[f].singular_values,
                           ComplexMatrix(0, 0)};
    write_singular_values_csv(sv, only_values);
  }
  for (const ImageMap& map : report.maps) {
    const std::string stem = "map_" + map.functional.file_tag();
    auto csv = open_output(dir / (stem + ".csv"));
    write_map_csv(csv, map);
    auto pgm = open_output(dir / (stem + ".pgm"), true);
    write_map_pgm(pgm, map);
  }
  auto json = open_output(dir / "report.json");
  write_report_json(json, report);
}

}  // namespace msrimg
