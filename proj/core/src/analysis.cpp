#include "msrimg/analysis.hpp"

#include <cmath>
#include <ostream>

#include "msrimg/errors.hpp"
#include "msrimg/io.hpp"

namespace msrimg {

ScattererSet::ScattererSet(std::vector<Point2> pts) : points(std::move(pts)) {
  if (points.empty()) throw DomainError("ScattererSet: requires at least one point");
  for (const Point2& p : points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw DomainError("ScattererSet: coordinates must be finite");
}

BandLimits::BandLimits(double lo, double hi, int f) : omega_min(lo), omega_max(hi), count(f) {
  if (!(lo > 0.0) || !(lo < hi)) throw DomainError("BandLimits: requires 0 < omega_1 < omega_F");
  if (f < 2) throw DomainError("BandLimits: requires F >= 2");
}

namespace {

double j0sq(double x) {
  const double v = bessel_j(0, x);
  return v * v;
}

double j1sq(double x) {
  const double v = bessel_j(1, x);
  return v * v;
}

}  // namespace

double analytic_sf(Point2 z, const ScattererSet& scatterers, double omega) {
  if (!(omega > 0.0)) throw DomainError("analytic_sf: omega must be > 0");
  double sum = 0.0;
  for (const Point2& y : scatterers.points) sum += j0sq(omega * distance(z, y));
  return sum;
}

double analytic_mf(Point2 z, const ScattererSet& scatterers, const BandLimits& band,
                   const Quadrature& q) {
  const double w1 = band.omega_min;
  const double wf = band.omega_max;
  double sum = 0.0;
  for (const Point2& y : scatterers.points) {
    const double r = distance(z, y);
    const double tail = quad_adaptive([r](double w) { return j1sq(w * r); }, w1, wf, q);
    sum += wf * bessel_envelope(wf * r) - w1 * bessel_envelope(w1 * r) + tail;
  }
  return band.count * sum / band.width();
}

double wmf_remainder(double r, const BandLimits& band, int n, const Quadrature& q) {
  if (n < 0) throw DomainError("wmf_remainder: n must be >= 0");
  if (!(r >= 0.0)) throw DomainError("wmf_remainder: r must be >= 0");
  if (n == 1) return 0.0;
  const double integral = quad_adaptive(
      [r, n](double w) { return std::pow(w, n) * j1sq(w * r); }, band.omega_min, band.omega_max, q);
  return (1.0 - n) * integral / band.width();
}

double analytic_wmf(Point2 z, const ScattererSet& scatterers, const BandLimits& band, int n,
                    const Quadrature& q) {
  if (n < 0) throw DomainError("analytic_wmf: n must be >= 0");
  const double w1 = band.omega_min;
  const double wf = band.omega_max;
  const double w1p = std::pow(w1, n + 1);
  const double wfp = std::pow(wf, n + 1);
  double sum = 0.0;
  for (const Point2& y : scatterers.points) {
    const double r = distance(z, y);
    sum += (wfp * bessel_envelope(wf * r) - w1p * bessel_envelope(w1 * r)) / band.width() +
           wmf_remainder(r, band, n, q);
  }
  return band.count * sum / (n + 1.0);
}

double analytic_log(Point2 z, const ScattererSet& scatterers, const BandLimits& band,
                    const Quadrature& q) {
  const double w1 = band.omega_min;
  const double wf = band.omega_max;
  if (!(w1 > 1.0)) throw DomainError("analytic_log: requires omega_1 > 1");
  double sum = 0.0;
  for (const Point2& y : scatterers.points) {
    const double r = distance(z, y);
    const double remainder = quad_adaptive(
        [r](double w) { return j0sq(w * r) - (std::log(w) - 1.0) * j1sq(w * r); }, w1, wf, q);
    sum += wf * std::log(wf) * bessel_envelope(wf * r) - w1 * std::log(w1) * bessel_envelope(w1 * r) -
           remainder;
  }
  return band.count * sum / band.width();
}

E1E2 e1_e2(double r, const BandLimits& band, const Quadrature& q) {
  if (!(r > 0.0)) throw DomainError("e1_e2: r must be > 0");
  const double e1 = quad_adaptive([r](double w) { return j0sq(w * r); }, band.omega_min,
                                  band.omega_max, q);
  const double e2 = quad_adaptive([r](double w) { return (std::log(w) - 1.0) * j1sq(w * r); },
                                  band.omega_min, band.omega_max, q);
  return {e1, e2};
}

void write_e1e2_csv(std::ostream& os, std::span<const double> radii, const BandLimits& band,
                    const Quadrature& q) {
  os << "# msrimg e1-e2 v1 omega_1=" << format_real(band.omega_min)
     << " omega_F=" << format_real(band.omega_max) << '\n';
  os << "r,E1,E2,minus_E1_plus_E2\n";
  for (double r : radii) {
    const E1E2 e = e1_e2(r, band, q);
    os << format_real(r) << ',' << format_real(e.e1) << ',' << format_real(e.e2) << ','
       << format_real(e.difference()) << '\n';
  }
}

}  // namespace msrimg
