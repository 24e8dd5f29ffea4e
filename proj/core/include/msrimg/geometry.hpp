#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "msrimg/specfun.hpp"
#include "msrimg/types.hpp"

namespace msrimg {

// Regular parametric curve s in [s_min, s_max] -> R^2. The derivative must not
// vanish anywhere on the parameter range.
class ParametricCurve {
 public:
  using Map = std::function<Vec2(double)>;

  ParametricCurve(Map position, Map derivative, double s_min, double s_max,
                  std::string name = "curve");

  Vec2 position(double s) const { return position_(s); }
  Vec2 derivative(double s) const { return derivative_(s); }
  double s_min() const noexcept { return s_min_; }
  double s_max() const noexcept { return s_max_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Map position_;
  Map derivative_;
  double s_min_;
  double s_max_;
  std::string name_;
};

/// Curve (sum_k x_k s^k, sum_k y_k s^k) on [s_min, s_max].
ParametricCurve polynomial_curve(std::vector<double> x_coeffs, std::vector<double> y_coeffs,
                                 double s_min, double s_max, std::string name = "poly");

/// Built-in curves: "sigma1" = (s - 0.2, -0.5 s^2 + 0.5) and
/// "sigma2" = (s + 0.2, s^3 + s^2 - 0.6), both for s in [-0.5, 0.5].
ParametricCurve catalog_curve(std::string_view name);

/// Thin tubular inclusion of half-thickness h around a curve, embedded in a
/// background (eps0, mu0). Zero contrast (eps == eps0, mu == mu0) is allowed.
struct ThinInclusion {
  ThinInclusion(ParametricCurve curve, double half_thickness, double permittivity,
                double permeability, double background_permittivity = 1.0,
                double background_permeability = 1.0);

  ParametricCurve curve;
  double half_thickness;
  double permittivity;
  double permeability;
  double background_permittivity;
  double background_permeability;
};

struct Frame {
  Vec2 tangent;
  Vec2 normal;
};

struct CurveSample {
  Point2 point;
  Vec2 tangent;
  Vec2 normal;
  double weight{0.0};     // arclength share |sigma| / M
  double parameter{0.0};  // curve parameter s of the sample
};

double curve_length(const ParametricCurve& curve, const Quadrature& q = {});

/// Unit tangent and left normal (tangent rotated by +pi/2) at parameter s.
Frame frames(const ParametricCurve& curve, double s);

/// M = ceil(2 |sigma| / lambda), at least 1. A ratio within 1e-9 (relative)
/// of an integer is treated as that integer.
int effective_segment_count(double length, double wavelength);
int effective_segment_count(const ParametricCurve& curve, double wavelength,
                            const Quadrature& q = {});

/// Arclength of the curve from s_min up to s.
double arclength_to(const ParametricCurve& curve, double s, const Quadrature& q = {});

/// M samples at the arclength midpoints of M equal-arclength segments.
std::vector<CurveSample> sample_curve(const ThinInclusion& inclusion, int m,
                                      const Quadrature& q = {});

/// Distance from p to the curve, through a dense polyline (segments short
/// enough that the chord error is negligible at grid scales).
double distance_to_curve(const ParametricCurve& curve, Point2 p);

// Precomputed dense polyline for repeated distance queries.
class CurvePolyline {
 public:
  explicit CurvePolyline(const ParametricCurve& curve, int segments = 4096);
  double distance(Point2 p) const;

 private:
  std::vector<Point2> vertices_;
};

}  // namespace msrimg
