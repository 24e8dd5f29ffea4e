#pragma once

#include <functional>

namespace msrimg {

// Tolerances for adaptive Simpson integration. Convergence is declared when
// the Richardson error estimate is below max(abs_tol, rel_tol * |I|).
struct Quadrature {
  double abs_tol{1e-10};
  double rel_tol{1e-10};
  int max_depth{40};

  void validate() const;
};

/// Bessel function of the first kind J_n(x), integer order n >= 0, x >= 0.
///
/// Power series (accumulated in extended precision) below x = 20, Hankel
/// asymptotic expansion above; orders n >= 2 on the asymptotic branch come
/// from upward recurrence, which is stable while n < x. Accuracy targets:
/// 1e-12 absolute for x <= 30, 1e-10 relative beyond, for n in {0, 1}.
double bessel_j(int n, double x);

/// Crossover between the series and asymptotic branches of bessel_j.
inline constexpr double kBesselSeam = 20.0;

// Branches exposed for seam-agreement tests.
double bessel_j_series(int n, double x);
double bessel_j_asymptotic(int n, double x);

/// Gamma function for x > 0 (Lanczos, g = 7, nine coefficients).
double gamma_fn(double x);

/// J0(x)^2 + J1(x)^2, the envelope shared by all the closed-form map structures.
double bessel_envelope(double x);

/// Adaptive Simpson on [a, b]. Throws ConvergenceError (with the best
/// estimate) when a panel hits max_depth without meeting its tolerance.
double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                     const Quadrature& q = {});

/// Integral of J0(x)^2 over [a, b] through [x (J0^2 + J1^2)] + int J1^2.
double integral_j0sq(double a, double b, const Quadrature& q = {});

/// Integral of ln(x) J0(x)^2 over [a, b], 0 < a <= b, through
/// [(x ln x - x)(J0^2 + J1^2)] + int (ln x - 2) J1^2.
double integral_log_j0sq(double a, double b, const Quadrature& q = {});

}  // namespace msrimg
