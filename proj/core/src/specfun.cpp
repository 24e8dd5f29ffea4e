#include "msrimg/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "msrimg/errors.hpp"

namespace msrimg {

namespace {

void check_bessel_args(int n, double x) {
  if (n < 0) throw DomainError("bessel_j: negative order " + std::to_string(n));
  if (!std::isfinite(x)) throw DomainError("bessel_j: non-finite argument");
  if (x < 0.0) throw DomainError("bessel_j: negative argument");
}

// P and Q of the Hankel expansion J_n(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - n pi/2 - pi/4. Summation stops at the smallest term.
void hankel_pq(int n, double x, double& p, double& q) {
  const double mu = 4.0 * n * n;
  const double eight_x = 8.0 * x;
  p = 1.0;
  q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * eight_x);
    const double mag = std::fabs(term);
    if (mag > last) break;
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (mag < 1e-18) break;
    last = mag;
  }
}

}  // namespace

double bessel_j_series(int n, double x) {
  check_bessel_args(n, x);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const long double half = static_cast<long double>(x) / 2.0L;
  const long double half_sq = half * half;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= half / i;
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= -half_sq / (static_cast<long double>(k) * (k + n));
    sum += term;
    if (k > half && std::fabs(term) <= 1e-22L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

double bessel_j_asymptotic(int n, double x) {
  check_bessel_args(n, x);
  if (x == 0.0) throw DomainError("bessel_j_asymptotic: zero argument");
  if (n > 1) {
    double jm = bessel_j_asymptotic(0, x);
    double j = bessel_j_asymptotic(1, x);
    for (int k = 1; k < n; ++k) {
      const double next = 2.0 * k / x * j - jm;
      jm = j;
      j = next;
    }
    return j;
  }
  double p = 0.0;
  double q = 0.0;
  hankel_pq(n, x, p, q);
  // cos/sin of x - pi/4 without forming the shifted argument.
  const double c = std::cos(x);
  const double s = std::sin(x);
  double cos_chi = (c + s) * std::numbers::sqrt2 / 2.0;
  double sin_chi = (s - c) * std::numbers::sqrt2 / 2.0;
  if (n == 1) {
    // chi -> chi - pi/2
    const double tmp = cos_chi;
    cos_chi = sin_chi;
    sin_chi = -tmp;
  }
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

double bessel_j(int n, double x) {
  check_bessel_args(n, x);
  if (x < kBesselSeam || n >= x) return bessel_j_series(n, x);
  return bessel_j_asymptotic(n, x);
}

double bessel_envelope(double x) {
  const double j0 = bessel_j(0, x);
  const double j1 = bessel_j(1, x);
  return j0 * j0 + j1 * j1;
}

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("gamma_fn: argument must be positive and finite");
  static constexpr std::array<double, 9> coeff = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  double a = coeff[0];
  const double t = z + 7.5;
  for (int i = 1; i < 9; ++i) a += coeff[i] / (z + i);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

void Quadrature::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw DomainError("Quadrature: tolerances must be positive");
  if (max_depth < 10) throw DomainError("Quadrature: max_depth must be >= 10");
}

namespace {

constexpr int kInitialPanels = 32;

struct SimpsonState {
  const std::function<double(double)>& f;
  int max_depth;
  bool failed{false};
};

double eval(const SimpsonState& st, double x) {
  const double v = st.f(x);
  if (!std::isfinite(v))
    throw DomainError("quad_adaptive: integrand not finite at x = " + std::to_string(x));
  return v;
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(SimpsonState& st, double a, double b, double fa, double fm, double fb,
              double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = eval(st, lm);
  const double frm = eval(st, rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= st.max_depth) {
    st.failed = true;
    return left + right + delta / 15.0;
  }
  return refine(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         refine(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                     const Quadrature& q) {
  q.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("quad_adaptive: non-finite limits");
  if (a > b) throw DomainError("quad_adaptive: requires a <= b");
  if (a == b) return 0.0;

  SimpsonState st{f, q.max_depth};
  const double width = (b - a) / kInitialPanels;
  std::array<double, 2 * kInitialPanels + 1> fx{};
  for (int i = 0; i <= 2 * kInitialPanels; ++i) {
    const double x = (i == 2 * kInitialPanels) ? b : a + 0.5 * width * i;
    fx[i] = eval(st, x);
  }
  double coarse = 0.0;
  std::array<double, kInitialPanels> panel{};
  for (int i = 0; i < kInitialPanels; ++i) {
    const double pa = a + width * i;
    const double pb = (i + 1 == kInitialPanels) ? b : pa + width;
    panel[i] = simpson(pa, pb, fx[2 * i], fx[2 * i + 1], fx[2 * i + 2]);
    coarse += panel[i];
  }
  const double tol = std::max(q.abs_tol, q.rel_tol * std::fabs(coarse)) / kInitialPanels;

  double total = 0.0;
  for (int i = 0; i < kInitialPanels; ++i) {
    const double pa = a + width * i;
    const double pb = (i + 1 == kInitialPanels) ? b : pa + width;
    total += refine(st, pa, pb, fx[2 * i], fx[2 * i + 1], fx[2 * i + 2], panel[i], tol, 1);
  }
  if (st.failed) {
    throw ConvergenceError("quad_adaptive: max_depth " + std::to_string(q.max_depth) +
                               " reached on [" + std::to_string(a) + ", " + std::to_string(b) + "]",
                           total);
  }
  return total;
}

double integral_j0sq(double a, double b, const Quadrature& q) {
  if (!(a >= 0.0) || !(b >= a)) throw DomainError("integral_j0sq: requires 0 <= a <= b");
  if (a == b) return 0.0;
  const double boundary = b * bessel_envelope(b) - a * bessel_envelope(a);
  const double remainder = quad_adaptive(
      [](double x) {
        const double j1 = bessel_j(1, x);
        return j1 * j1;
      },
      a, b, q);
  return boundary + remainder;
}

double integral_log_j0sq(double a, double b, const Quadrature& q) {
  if (!(a > 0.0)) throw DomainError("integral_log_j0sq: requires a > 0");
  if (!(b >= a)) throw DomainError("integral_log_j0sq: requires a <= b");
  if (a == b) return 0.0;
  auto antiderivative_part = [](double x) {
    return (x * std::log(x) - x) * bessel_envelope(x);
  };
  const double boundary = antiderivative_part(b) - antiderivative_part(a);
  const double remainder = quad_adaptive(
      [](double x) {
        const double j1 = bessel_j(1, x);
        return (std::log(x) - 2.0) * j1 * j1;
      },
      a, b, q);
  return boundary + remainder;
}

}  // namespace msrimg
