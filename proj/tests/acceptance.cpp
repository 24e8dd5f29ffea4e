// Acceptance gate: one PASS/FAIL line per criterion. Tolerances are fixed here and
// never adjusted to fit the results.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "msrimg/analysis.hpp"
#include "msrimg/harness.hpp"
#include "msrimg/spectral.hpp"
#include "oracles.hpp"

using namespace msrimg;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

BandLimits reference_band() { return BandLimits(2.0 * kPi / 0.5, 2.0 * kPi / 0.3, 10); }

Verdict log_identity_check() {
  Stopwatch clock;
  double worst = 0.0;
  for (auto [a, b] : {std::pair{0.5, 5.0}, std::pair{1.0, 20.0}, std::pair{3.0, 50.0}}) {
    const double brute = oracle::log_j0sq_integral(a, b);
    worst = std::max(worst, std::abs(integral_log_j0sq(a, b) - brute) / std::abs(brute));
  }
  const double t = clock.seconds();
  return {worst < 1e-7 && t < 1.0, "max rel err " + fmt(worst) + " (< 1e-7), " + fmt(t) + " s (< 1 s)"};
}

Verdict j0sq_identity() {
  double worst = 0.0;
  for (auto [a, b] : {std::pair{0.0, 10.0}, std::pair{1.0, 30.0}}) {
    const double brute = oracle::j0sq_integral(a, b);
    worst = std::max(worst, std::abs(integral_j0sq(a, b) - brute) / std::abs(brute));
  }
  return {worst < 1e-7, "max rel err " + fmt(worst) + " (< 1e-7)"};
}

Verdict msr_symmetry() {
  const FrequencySet freqs(0.5, 0.3, 10);
  const ThinInclusion inc(catalog_curve("sigma1"), 0.015, 5.0, 5.0);
  double worst = 0.0;
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    const MsrMatrix k = assemble_msr(make_directions(48), freqs.omega(f), inc);
    worst = std::max(worst, frobenius_norm(k.entries - transpose(k.entries)) / frobenius_norm(k.entries));
  }
  return {worst < 1e-12, "max ||K-K^T||/||K|| " + fmt(worst) + " over 10 frequencies (< 1e-12)"};
}

Verdict svd_contract() {
  double residual = 0.0;
  int matrices = 0;
  const FrequencySet freqs(0.5, 0.3, 10);
  for (const std::string& name : preset_names()) {
    std::vector<ThinInclusion> incs;
    for (const InclusionSpec& s : preset(name).inclusions()) incs.push_back(s.build());
    for (std::size_t f = 0; f < freqs.size(); ++f) {
      const MsrMatrix clean = assemble_msr(make_directions(48), freqs.omega(f), incs);
      for (const MsrMatrix& k : {clean, add_awgn(clean, 10.0, 0, f)}) {
        const SvdResiduals r = svd_residuals(k.entries, svd(k));
        residual = std::max({residual, r.reconstruction, r.u_orthonormality, r.v_orthonormality});
        ++matrices;
      }
    }
  }
  double eig = 0.0;
  for (unsigned seed = 0; seed < 100; ++seed) {
    const ComplexMatrix k = oracle::random_matrix(8, 8, seed);
    const SvdFactors f = svd(k);
    const auto ref = oracle::singular_values(k);
    for (std::size_t m = 0; m < 8; ++m) eig = std::max(eig, std::abs(f.s[m] - ref[m]) / ref[m]);
    const SvdResiduals r = svd_residuals(k, f);
    residual = std::max({residual, r.reconstruction, r.u_orthonormality, r.v_orthonormality});
  }
  return {residual < 1e-10 && eig < 1e-8,
          "max residual " + fmt(residual) + " over " + std::to_string(matrices) +
              " assembled + 100 random (< 1e-10); eigen-oracle rel diff " + fmt(eig) + " (< 1e-8)"};
}

double point_scatterer_correlation(double eps, double mu, std::array<double, 3> c) {
  const ThinInclusion inc(polynomial_curve({0.0, 0.05}, {0.0}, -0.5, 0.5, "point"), 0.015, eps, mu);
  const double omega = 2.0 * kPi / 0.5;
  const MsrMatrix k = assemble_msr(make_directions(48), omega, inc);
  const ImageGrid grid = ImageGrid::square(101);
  const ImageMap map = map_single(k, svd(k), grid, SteeringConfig{c, true}, 0.01);
  const auto samples = sample_curve(inc, effective_segment_count(inc.curve, 0.5));
  std::vector<Point2> pts;
  for (const CurveSample& s : samples) pts.push_back(s.point);
  const ScattererSet set(pts);
  std::vector<double> analytic(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) analytic[p] = analytic_sf(grid.point(p), set, omega);
  return oracle::pearson(map.values, analytic);
}

Verdict single_frequency_structure() {
  Stopwatch clock;
  const double corr = point_scatterer_correlation(5.0, 1.0, {1.0, 0.0, 0.0});
  const double t = clock.seconds();
  const double dipole_steering = point_scatterer_correlation(5.0, 1.0, {1.0, 0.0, 1.0});
  const double both = point_scatterer_correlation(5.0, 5.0, {1.0, 0.0, 1.0});
  return {corr > 0.9 && t < 30.0,
          "Pearson " + fmt(corr) + " (> 0.9), " + fmt(t) + " s (< 30 s) [eps-only, c=(1,0,0)]; info: c=(1,0,1) " +
              fmt(dipole_steering) + ", eps=mu=5 " + fmt(both)};
}

Verdict dominance_sign() {
  const BandLimits band = reference_band();
  bool ok = true;
  std::string detail;
  for (double r : {0.001, 0.01, 0.05}) {
    const double d = e1_e2(r, band).difference();
    ok = ok && d < 0.0;
    detail += "r=" + fmt(r) + ": " + fmt(d) + "; ";
  }
  for (double r : {5.0, 10.0}) {
    const double d = e1_e2(r, band).difference();
    ok = ok && std::abs(d) < 0.1 * band.width();
    detail += "r=" + fmt(r) + ": " + fmt(d) + "; ";
  }
  return {ok, detail + "bound 0.1*(wF-w1) = " + fmt(0.1 * band.width())};
}

std::string sidelobes(const ExperimentReport& r) {
  return "sidelobe LOG " + fmt(r.metric("LOG").sidelobe_energy) + ", WMF(1) " +
         fmt(r.metric("WMF(1)").sidelobe_energy) + ", MF " + fmt(r.metric("MF").sidelobe_energy);
}

Verdict fig1_preset_check() {
  Stopwatch clock;
  ExperimentConfig cfg = preset("fig1");
  cfg.seed = 0;
  const ExperimentReport r = run_experiment(cfg);
  const double t = clock.seconds();
  const double log = r.metric("LOG").sidelobe_energy;
  const double wmf = r.metric("WMF(1)").sidelobe_energy;
  const double mf = r.metric("MF").sidelobe_energy;
  const double loc = r.metric("LOG").localization_error;
  const bool ordering = log < wmf && wmf < mf;
  return {ordering && loc <= 0.15 && t < 300.0,
          sidelobes(r) + " (need LOG < WMF(1) < MF: " + (ordering ? "yes" : "no") +
              "); localization LOG " + fmt(loc) + " with k=" + std::to_string(r.localization_k) +
              " (<= 0.15); " + fmt(t) + " s"};
}

Verdict fig4_preset_check() {
  const ExperimentReport r = run_experiment(preset("fig4"));
  const double log = r.metric("LOG").sidelobe_energy;
  const bool ok = log < r.metric("MF").sidelobe_energy && log < r.metric("WMF(1)").sidelobe_energy;
  return {ok, sidelobes(r) + " (need LOG below both)"};
}

Verdict noise_calibration() {
  const MsrMatrix k = assemble_msr(make_directions(48), 2.0 * kPi / 0.5,
                                   ThinInclusion(catalog_curve("sigma1"), 0.015, 5.0, 5.0));
  const double ps = signal_power(k.entries);
  double noise = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const MsrMatrix n = add_awgn(k, 10.0, seed);
    double sum = 0.0;
    for (std::size_t i = 0; i < n.entries.data().size(); ++i)
      sum += std::norm(n.entries.data()[i] - k.entries.data()[i]);
    noise += sum / static_cast<double>(n.entries.data().size());
  }
  const double snr = 10.0 * std::log10(ps / (noise / 200.0));
  return {std::abs(snr - 10.0) <= 0.5, "empirical SNR " + fmt(snr) + " dB (10 +/- 0.5)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict determinism() {
  const fs::path base = fs::temp_directory_path() / "msrimg_acceptance_determinism";
  fs::remove_all(base);
  ExperimentConfig a = preset("fig1");
  a.out_dir = base / "a";
  ExperimentConfig b = preset("fig1");
  b.out_dir = base / "b";
  run_experiment(a);
  run_experiment(b);
  int compared = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(a.out_dir)) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    if (slurp(entry.path()) != slurp(b.out_dir / entry.path().filename())) ++differing;
  }
  fs::remove_all(base);
  return {compared > 0 && differing == 0,
          std::to_string(compared) + " CSV files compared, " + std::to_string(differing) + " differ"};
}

// Clean-data artifact ordering on sigma1; reported alongside the criteria.
Verdict clean_ordering() {
  ExperimentConfig cfg = preset("fig1");
  cfg.snr_db.reset();
  const ExperimentReport r = run_experiment(cfg);
  const double log = r.metric("LOG").sidelobe_energy;
  const double wmf = r.metric("WMF(1)").sidelobe_energy;
  const double mf = r.metric("MF").sidelobe_energy;
  return {log <= wmf && wmf <= mf, sidelobes(r) + " (need LOG <= WMF(1) <= MF, clean data)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"msrimg acceptance criteria"};
  int only = 0;
  bool invariant = false;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_flag("--clean-ordering", invariant, "Run only the clean-data ordering check");
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<const char*, std::function<Verdict()>>> criteria{
      {1, {"log-weighted Bessel identity", log_identity_check}},
      {2, {"J0^2 antiderivative identity", j0sq_identity}},
      {3, {"clean MSR symmetry", msr_symmetry}},
      {4, {"SVD contract", svd_contract}},
      {5, {"single-frequency Bessel structure", single_frequency_structure}},
      {6, {"E1/E2 sign diagnostics", dominance_sign}},
      {7, {"fig1 reproduction", fig1_preset_check}},
      {8, {"fig4 reproduction", fig4_preset_check}},
      {9, {"noise calibration", noise_calibration}},
      {10, {"determinism", determinism}},
  };

  bool all = true;
  auto report = [&](const std::string& label, const std::function<Verdict()>& check) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.pass ? "PASS " : "FAIL ") << label << ": " << v.detail << std::endl;
    all = all && v.pass;
  };

  if (invariant) {
    report("invariant clean-ordering", clean_ordering);
  } else {
    for (const auto& [id, entry] : criteria)
      if (only == 0 || only == id)
        report("criterion " + std::to_string(id) + " (" + entry.first + ")", entry.second);
  }
  return all ? 0 : 1;
}
