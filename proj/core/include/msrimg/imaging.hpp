#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "msrimg/forward.hpp"
#include "msrimg/spectral.hpp"

namespace msrimg {

// Test-vector weights: component l of W(z; omega) is
// (c0 + c1 theta_l.x + c2 theta_l.y) exp(i omega theta_l . z).
struct SteeringConfig {
  std::array<double, 3> c{1.0, 0.0, 1.0};
  bool normalize{true};

  void validate() const;
};

// Uniform nx-by-ny lattice on [x_min, x_max] x [y_min, y_max], endpoints
// included. Point index = iy * nx + ix, so y varies slowest.
class ImageGrid {
 public:
  ImageGrid(double x_min, double x_max, double y_min, double y_max, int nx, int ny);
  static ImageGrid square(int resolution, double half_width = 1.0);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }
  double x(int ix) const;
  double y(int iy) const;
  Point2 point(std::size_t index) const;
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_min() const noexcept { return y_min_; }
  double y_max() const noexcept { return y_max_; }
  double cell_diagonal() const;

  bool operator==(const ImageGrid&) const = default;

 private:
  double x_min_, x_max_, y_min_, y_max_;
  int nx_, ny_;
};

enum class FunctionalKind { single, multi, weighted, log };

struct Functional {
  FunctionalKind kind{FunctionalKind::single};
  int power{0};  // WMF exponent n

  static Functional sf() { return {FunctionalKind::single, 0}; }
  static Functional mf() { return {FunctionalKind::multi, 0}; }
  static Functional wmf(int n) { return {FunctionalKind::weighted, n}; }
  static Functional log() { return {FunctionalKind::log, 0}; }

  /// "SF", "MF", "WMF(n)", "LOG".
  std::string tag() const;
  /// File-name friendly tag: "SF", "MF", "WMFn", "LOG".
  std::string file_tag() const;
  /// Accepts tag() and file_tag() spellings, case-insensitive.
  static Functional parse(const std::string& text);

  bool operator==(const Functional&) const = default;
};

struct ImageMap {
  ImageGrid grid;
  std::vector<double> values;
  Functional functional;
  std::vector<double> omegas;

  double max_value() const;
  /// Values divided by the maximum (all zeros if the map is identically zero).
  std::vector<double> normalized() const;
};

struct SpectralData {
  MsrMatrix msr;
  SvdFactors factors;
};

std::vector<complex> test_vector(Point2 z, double omega, const DirectionSet& dirs,
                                 const SteeringConfig& cfg = {});

/// Per-point complex sum  sum_{m <= M_f} <W(z), U_m> <W(z), conj(V_m)>,
/// <a, b> = conj(a) . b, M_f = effective_rank(factors, tau). This is the
/// quantity every functional takes the modulus of (after weighting).
std::vector<complex> subspace_terms(const MsrMatrix& k, const SvdFactors& factors,
                                    const ImageGrid& grid, const SteeringConfig& cfg,
                                    double tau);

/// Single-frequency subspace migration |subspace_terms|.
ImageMap map_single(const MsrMatrix& k, const SvdFactors& factors, const ImageGrid& grid,
                    const SteeringConfig& cfg = {}, double tau = 0.01);

/// Weight xi(omega) of a multi-frequency functional: 1 (MF), omega^n (WMF),
/// ln omega (LOG). LOG requires omega > 1.
double frequency_weight(const Functional& functional, double omega);

/// |sum_f xi(omega_f) terms_f(z)|, divided by F for MF.
ImageMap combine_terms(std::span<const std::vector<complex>> terms,
                       std::span<const double> omegas, const Functional& functional,
                       const ImageGrid& grid);

/// Multi-frequency map over all frequencies in `data` (which must share one
/// direction set). SF uses the first entry only.
ImageMap map_multi(std::span<const SpectralData> data, const ImageGrid& grid,
                   const SteeringConfig& cfg, double tau, const Functional& functional);

/// CSV "x,y,value,normalized" after a version line; rows in point-index order.
void write_map_csv(std::ostream& os, const ImageMap& map);

/// Binary PGM (P5), max-normalized, 8 or 16 bits. The first image row is the
/// largest y, so y increases upward when viewed.
void write_map_pgm(std::ostream& os, const ImageMap& map, int bits = 16);

}  // namespace msrimg
