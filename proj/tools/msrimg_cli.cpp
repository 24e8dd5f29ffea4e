#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msrimg/analysis.hpp"
#include "msrimg/errors.hpp"
#include "msrimg/harness.hpp"
#include "msrimg/io.hpp"
#include "msrimg/spectral.hpp"

namespace {

struct RunOptions {
  std::string config_file;
  std::string preset;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> functionals;
};

void add_override(CLI::App* cmd, RunOptions& opts, const std::string& flag, const std::string& key,
                  const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&opts, key](const std::string& v) { opts.overrides[key] = v; }, help);
}

int run_command(const RunOptions& opts) {
  msrimg::ExperimentConfig cfg;
  if (!opts.config_file.empty()) cfg = msrimg::load_config_file(opts.config_file);
  if (!opts.preset.empty()) msrimg::apply_setting(cfg, "preset", opts.preset);
  // "curve(s)" must land before per-inclusion lists so broadcast checks see the final count.
  for (const char* key : {"curves", "eps", "mu", "h"})
    if (auto it = opts.overrides.find(key); it != opts.overrides.end())
      msrimg::apply_setting(cfg, it->first, it->second);
  for (const auto& [key, value] : opts.overrides)
    if (key != "curves" && key != "eps" && key != "mu" && key != "h")
      msrimg::apply_setting(cfg, key, value);
  if (!opts.functionals.empty()) {
    std::string joined;
    for (const auto& f : opts.functionals) joined += (joined.empty() ? "" : ",") + f;
    msrimg::apply_setting(cfg, "functionals", joined);
  }

  const msrimg::ExperimentReport report = msrimg::run_experiment(cfg);
  std::cout << "experiment " << cfg.name << (cfg.expected_failure ? " (expected failure)" : "")
            << "  tube=" << report.tube_radius << "  k=" << report.localization_k << '\n';
  for (const auto& m : report.metrics)
    std::cout << "  " << std::left << std::setw(8) << m.tag << " sidelobe=" << std::setprecision(6)
              << m.sidelobe_energy << "  localization=" << m.localization_error
              << "  peak=" << m.peak_value << " at (" << m.peak_location.x << ", "
              << m.peak_location.y << ")\n";
  if (!cfg.out_dir.empty()) std::cout << "wrote " << cfg.out_dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subspace imaging of thin inclusions from far-field data"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run an imaging experiment");
  run_cmd->add_option("--config", run.config_file, "Flat key = value configuration file")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--preset", run.preset, "fig1, fig2, fig3 or fig4 (applied after --config)");
  add_override(run_cmd, run, "--curve", "curves", "Single curve: catalog name or poly(...)");
  add_override(run_cmd, run, "--curves", "curves", "Comma separated curve list");
  add_override(run_cmd, run, "--eps", "eps", "Permittivity, one value or one per curve");
  add_override(run_cmd, run, "--mu", "mu", "Permeability, one value or one per curve");
  add_override(run_cmd, run, "--h", "h", "Half-thickness, one value or one per curve");
  add_override(run_cmd, run, "--N", "n", "Number of directions");
  add_override(run_cmd, run, "--F", "f", "Number of frequencies");
  add_override(run_cmd, run, "--lambda-max", "lambda_max", "Longest wavelength");
  add_override(run_cmd, run, "--lambda-min", "lambda_min", "Shortest wavelength");
  add_override(run_cmd, run, "--snr-db", "snr_db", "Noise level in dB, or 'none'");
  add_override(run_cmd, run, "--seed", "seed", "Noise seed");
  run_cmd->add_option("--functional", run.functionals, "SF, MF, WMF(n) or LOG; repeatable");
  add_override(run_cmd, run, "--grid", "grid", "Grid resolution R or NXxNY");
  add_override(run_cmd, run, "--domain", "domain", "Half-width of the square search domain");
  add_override(run_cmd, run, "--tau", "tau", "Relative singular-value threshold");
  add_override(run_cmd, run, "--c", "c", "Steering coefficients c0,c1,c2");
  add_override(run_cmd, run, "--out-dir", "out_dir", "Run directory for all outputs");

  double lambda_max = 0.5, lambda_min = 0.3, r_min = 1e-3, r_max = 10.0;
  int frequencies = 10, points = 200;
  std::string e1e2_out;
  auto* e1e2_cmd = app.add_subcommand("e1e2", "Sweep the E1/E2 dominance integrals over r");
  e1e2_cmd->add_option("--lambda-max", lambda_max, "Longest wavelength")->capture_default_str();
  e1e2_cmd->add_option("--lambda-min", lambda_min, "Shortest wavelength")->capture_default_str();
  e1e2_cmd->add_option("--F", frequencies, "Number of frequencies")->capture_default_str();
  e1e2_cmd->add_option("--r-min", r_min, "Smallest radius")->capture_default_str();
  e1e2_cmd->add_option("--r-max", r_max, "Largest radius")->capture_default_str();
  e1e2_cmd->add_option("--points", points, "Log-spaced sample count")->capture_default_str();
  e1e2_cmd->add_option("--out", e1e2_out, "CSV path (stdout when omitted)");

  auto* id_cmd = app.add_subcommand("identities", "Compare Bessel closed forms with quadrature");

  std::string msr_in, sv_out;
  auto* svd_cmd = app.add_subcommand("svd", "Singular values of a stored MSR matrix");
  svd_cmd->add_option("msr", msr_in, "MSR file")->required()->check(CLI::ExistingFile);
  svd_cmd->add_option("--out", sv_out, "CSV path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_command(run);

    if (e1e2_cmd->parsed()) {
      if (!(r_min > 0.0) || !(r_max > r_min) || points < 2)
        throw msrimg::ConfigurationError("e1e2: requires 0 < r-min < r-max and points >= 2");
      const msrimg::BandLimits band(2.0 * std::numbers::pi / lambda_max, 2.0 * std::numbers::pi / lambda_min, frequencies);
      std::vector<double> radii;
      for (int i = 0; i < points; ++i)
        radii.push_back(r_min * std::pow(r_max / r_min, static_cast<double>(i) / (points - 1)));
      if (e1e2_out.empty()) {
        msrimg::write_e1e2_csv(std::cout, radii, band);
      } else {
        std::ofstream os(e1e2_out);
        if (!os) throw msrimg::IoError("cannot write '" + e1e2_out + "'");
        msrimg::write_e1e2_csv(os, radii, band);
      }
      return 0;
    }

    if (id_cmd->parsed()) {
      std::cout << "integral,a,b,closed_form,quadrature,relative_difference\n";
      const msrimg::Quadrature tight{1e-12, 1e-12, 50};
      auto row = [&](const char* name, double a, double b, double closed, auto&& integrand) {
        const double brute = msrimg::quad_adaptive(integrand, a, b, tight);
        std::cout << name << ',' << a << ',' << b << ',' << msrimg::format_real(closed) << ','
                  << msrimg::format_real(brute) << ','
                  << msrimg::format_real(std::abs(closed - brute) / std::abs(brute)) << '\n';
      };
      auto j0sq = [](double x) { const double j = msrimg::bessel_j(0, x); return j * j; };
      for (auto [a, b] : {std::pair{0.0, 10.0}, std::pair{1.0, 30.0}})
        row("J0^2", a, b, msrimg::integral_j0sq(a, b), j0sq);
      for (auto [a, b] : {std::pair{0.5, 5.0}, std::pair{1.0, 20.0}, std::pair{3.0, 50.0}})
        row("ln*J0^2", a, b, msrimg::integral_log_j0sq(a, b),
            [&](double x) { return std::log(x) * j0sq(x); });
      return 0;
    }

    if (svd_cmd->parsed()) {
      const msrimg::MsrMatrix k = msrimg::read_msr_file(msr_in);
      const msrimg::SvdFactors f = msrimg::svd(k);
      if (sv_out.empty()) {
        msrimg::write_singular_values_csv(std::cout, f);
      } else {
        std::ofstream os(sv_out);
        if (!os) throw msrimg::IoError("cannot write '" + sv_out + "'");
        msrimg::write_singular_values_csv(os, f);
      }
      return 0;
    }
  } catch (const msrimg::Error& e) {
    std::cerr << "msrimg: " << msrimg::to_string(e.kind()) << " error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
