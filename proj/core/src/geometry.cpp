#include "msrimg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "msrimg/errors.hpp"

namespace msrimg {

namespace {

constexpr int kRegularityProbes = 257;
constexpr int kArclengthTable = 512;

double speed(const ParametricCurve& c, double s) { return norm(c.derivative(s)); }

double horner(const std::vector<double>& coeffs, double s) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * s + *it;
  return v;
}

std::vector<double> differentiate(const std::vector<double>& coeffs) {
  std::vector<double> d;
  for (std::size_t k = 1; k < coeffs.size(); ++k) d.push_back(coeffs[k] * static_cast<double>(k));
  return d;
}

}  // namespace

ParametricCurve::ParametricCurve(Map position, Map derivative, double s_min, double s_max,
                                 std::string name)
    : position_(std::move(position)),
      derivative_(std::move(derivative)),
      s_min_(s_min),
      s_max_(s_max),
      name_(std::move(name)) {
  if (!position_ || !derivative_) throw DomainError("ParametricCurve: empty map");
  if (!std::isfinite(s_min_) || !std::isfinite(s_max_) || !(s_min_ < s_max_))
    throw DomainError("ParametricCurve: requires finite s_min < s_max");
  for (int i = 0; i < kRegularityProbes; ++i) {
    const double s = s_min_ + (s_max_ - s_min_) * i / (kRegularityProbes - 1);
    const double v = norm(derivative_(s));
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("ParametricCurve '" + name_ + "': derivative vanishes or is not finite");
  }
}

ParametricCurve polynomial_curve(std::vector<double> x_coeffs, std::vector<double> y_coeffs,
                                 double s_min, double s_max, std::string name) {
  if (x_coeffs.empty() || y_coeffs.empty())
    throw DomainError("polynomial_curve: empty coefficient list");
  auto dx = differentiate(x_coeffs);
  auto dy = differentiate(y_coeffs);
  return ParametricCurve(
      [x = std::move(x_coeffs), y = std::move(y_coeffs)](double s) {
        return Vec2{horner(x, s), horner(y, s)};
      },
      [dx = std::move(dx), dy = std::move(dy)](double s) {
        return Vec2{horner(dx, s), horner(dy, s)};
      },
      s_min, s_max, std::move(name));
}

ParametricCurve catalog_curve(std::string_view name) {
  if (name == "sigma1")
    return polynomial_curve({-0.2, 1.0}, {0.5, 0.0, -0.5}, -0.5, 0.5, "sigma1");
  if (name == "sigma2")
    return polynomial_curve({0.2, 1.0}, {-0.6, 0.0, 1.0, 1.0}, -0.5, 0.5, "sigma2");
  throw ConfigurationError("unknown catalog curve '" + std::string(name) + "'");
}

ThinInclusion::ThinInclusion(ParametricCurve curve_, double half_thickness_, double permittivity_,
                             double permeability_, double background_permittivity_,
                             double background_permeability_)
    : curve(std::move(curve_)),
      half_thickness(half_thickness_),
      permittivity(permittivity_),
      permeability(permeability_),
      background_permittivity(background_permittivity_),
      background_permeability(background_permeability_) {
  if (!(half_thickness > 0.0)) throw DomainError("ThinInclusion: half-thickness must be > 0");
  if (!(background_permittivity > 0.0) || !(background_permeability > 0.0))
    throw DomainError("ThinInclusion: background parameters must be > 0");
  if (!(permittivity >= background_permittivity) || !(permeability >= background_permeability))
    throw DomainError("ThinInclusion: requires eps >= eps0 and mu >= mu0");
  if (!std::isfinite(permittivity) || !std::isfinite(permeability))
    throw DomainError("ThinInclusion: material parameters must be finite");
}

double curve_length(const ParametricCurve& curve, const Quadrature& q) {
  return quad_adaptive([&](double s) { return speed(curve, s); }, curve.s_min(), curve.s_max(), q);
}

double arclength_to(const ParametricCurve& curve, double s, const Quadrature& q) {
  if (s < curve.s_min() || s > curve.s_max())
    throw DomainError("arclength_to: parameter outside curve range");
  return quad_adaptive([&](double u) { return speed(curve, u); }, curve.s_min(), s, q);
}

Frame frames(const ParametricCurve& curve, double s) {
  if (!(s >= curve.s_min() && s <= curve.s_max()))
    throw DomainError("frames: parameter " + std::to_string(s) + " outside [" +
                      std::to_string(curve.s_min()) + ", " + std::to_string(curve.s_max()) + "]");
  const Vec2 d = curve.derivative(s);
  const double len = norm(d);
  const Vec2 t{d.x / len, d.y / len};
  return {t, Vec2{-t.y, t.x}};
}

int effective_segment_count(double length, double wavelength) {
  if (!(wavelength > 0.0)) throw DomainError("effective_segment_count: wavelength must be > 0");
  if (!(length > 0.0)) throw DomainError("effective_segment_count: length must be > 0");
  const double ratio = 2.0 * length / wavelength;
  const double nearest = std::round(ratio);
  const double m = (std::fabs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) ? nearest
                                                                                 : std::ceil(ratio);
  return std::max(1, static_cast<int>(m));
}

int effective_segment_count(const ParametricCurve& curve, double wavelength, const Quadrature& q) {
  return effective_segment_count(curve_length(curve, q), wavelength);
}

std::vector<CurveSample> sample_curve(const ThinInclusion& inclusion, int m, const Quadrature& q) {
  if (m < 1) throw DomainError("sample_curve: M must be >= 1");
  const ParametricCurve& curve = inclusion.curve;
  auto sp = [&](double u) { return speed(curve, u); };

  // Cumulative arclength on a uniform parameter table.
  std::vector<double> knots(kArclengthTable + 1);
  std::vector<double> cumulative(kArclengthTable + 1, 0.0);
  const double ds = (curve.s_max() - curve.s_min()) / kArclengthTable;
  for (int i = 0; i <= kArclengthTable; ++i)
    knots[i] = (i == kArclengthTable) ? curve.s_max() : curve.s_min() + ds * i;
  for (int i = 0; i < kArclengthTable; ++i)
    cumulative[i + 1] = cumulative[i] + quad_adaptive(sp, knots[i], knots[i + 1], q);
  const double length = cumulative.back();

  std::vector<CurveSample> samples;
  samples.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double target = length * (k + 0.5) / m;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto cell = static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(it - cumulative.begin() - 1, 0, kArclengthTable - 1));
    double lo = knots[cell];
    double hi = knots[cell + 1];
    const double base = cumulative[cell];
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (base + quad_adaptive(sp, knots[cell], mid, q) < target) lo = mid;
      else hi = mid;
    }
    if (hi - lo > 1e-8)
      throw ConvergenceError("sample_curve: arclength inversion did not converge", 0.5 * (lo + hi));
    const double s = 0.5 * (lo + hi);
    const Frame f = frames(curve, s);
    samples.push_back({curve.position(s), f.tangent, f.normal, length / m, s});
  }
  return samples;
}

CurvePolyline::CurvePolyline(const ParametricCurve& curve, int segments) {
  if (segments < 1) throw DomainError("CurvePolyline: segments must be >= 1");
  vertices_.reserve(static_cast<std::size_t>(segments) + 1);
  for (int i = 0; i <= segments; ++i) {
    const double s = (i == segments) ? curve.s_max()
                                     : curve.s_min() + (curve.s_max() - curve.s_min()) * i / segments;
    vertices_.push_back(curve.position(s));
  }
}

double CurvePolyline::distance(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    const Vec2 a = vertices_[i];
    const Vec2 ab = vertices_[i + 1] - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, msrimg::distance(p, a + ab * t));
  }
  return best;
}

double distance_to_curve(const ParametricCurve& curve, Point2 p) {
  return CurvePolyline(curve).distance(p);
}

}  // namespace msrimg
