#include "msrimg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "msrimg/errors.hpp"
#include "msrimg/io.hpp"

namespace msrimg {

namespace {

constexpr int kMaxSweeps = 80;

// Column-major scratch so column operations are contiguous.
struct Columns {
  std::size_t n;
  std::vector<complex> data;
  complex* col(std::size_t c) { return data.data() + c * n; }
  const complex* col(std::size_t c) const { return data.data() + c * n; }
};

double col_norm2(const complex* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
  return s;
}

complex col_dot(const complex* a, const complex* b, std::size_t n) {
  complex s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Replace column c with a unit vector orthogonal to columns [0, c), built from the standard
// basis vector whose residual is largest (its squared length is at least (n - c) / n).
void complete_column(Columns& u, std::size_t c) {
  const std::size_t n = u.n;
  std::vector<complex> best;
  double best_len = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<complex> cand(n, 0.0);
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) {
        const complex proj = col_dot(u.col(p), cand.data(), n);
        for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * u.col(p)[i];
      }
    }
    const double len = std::sqrt(col_norm2(cand.data(), n));
    if (len > best_len) {
      best_len = len;
      best = std::move(cand);
    }
  }
  if (!(best_len > 0.5 / std::sqrt(static_cast<double>(n))))
    throw NumericalError("svd: failed to complete orthonormal basis");
  for (std::size_t i = 0; i < n; ++i) u.col(c)[i] = best[i] / best_len;
}

}  // namespace

SvdFactors svd(const ComplexMatrix& k) {
  if (!k.square() || k.rows() == 0) throw DomainError("svd: requires a non-empty square matrix");
  for (const complex& v : k.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("svd: matrix has non-finite entries");

  const std::size_t n = k.rows();
  Columns a{n, std::vector<complex>(n * n)};
  Columns v{n, std::vector<complex>(n * n, 0.0)};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a.col(c)[r] = k(r, c);
  for (std::size_t c = 0; c < n; ++c) v.col(c)[c] = 1.0;

  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(n);
  // Columns at or below this squared norm are roundoff relative to the whole matrix; they are
  // treated as null directions, since their relative orthogonality cannot improve.
  const double scale2 = std::accumulate(a.data.begin(), a.data.end(), 0.0,
                                        [](double acc, const complex& x) { return acc + std::norm(x); });
  const double null2 = tol * tol * scale2;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        complex* ap = a.col(p);
        complex* aq = a.col(q);
        const double alpha = col_norm2(ap, n);
        const double beta = col_norm2(aq, n);
        if (alpha <= null2 || beta <= null2) continue;
        const complex gamma = col_dot(ap, aq, n);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
        converged = false;

        // Rotate in the plane of (a_p, e^{-i phi} a_q), where gamma = g e^{i phi}.
        const complex phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        auto rotate = [&](complex* x, complex* y) {
          for (std::size_t i = 0; i < n; ++i) {
            const complex xi = x[i];
            const complex yi = phase * y[i];
            x[i] = c * xi - s * yi;
            y[i] = s * xi + c * yi;
          }
        };
        rotate(ap, aq);
        rotate(v.col(p), v.col(q));
      }
    }
  }
  if (!converged) throw NumericalError("svd: Jacobi sweeps did not converge");

  std::vector<double> sigma(n);
  for (std::size_t c = 0; c < n; ++c) sigma[c] = std::sqrt(col_norm2(a.col(c), n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdFactors out{ComplexMatrix(n, n), std::vector<double>(n), ComplexMatrix(n, n)};
  Columns u{n, std::vector<complex>(n * n, 0.0)};
  Columns vs{n, std::vector<complex>(n * n, 0.0)};
  const double floor = std::max(std::sqrt(null2),
                                std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon());
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.s[c] = sigma[src];
    std::copy_n(v.col(src), n, vs.col(c));
    if (sigma[src] > floor) {
      for (std::size_t i = 0; i < n; ++i) u.col(c)[i] = a.col(src)[i] / sigma[src];
    } else {
      out.s[c] = 0.0;
      complete_column(u, c);
    }
  }

  for (std::size_t c = 0; c < n; ++c) {
    complex* uc = u.col(c);
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(uc[i]) > std::abs(uc[best])) best = i;
    const double mag = std::abs(uc[best]);
    if (mag == 0.0) continue;
    const complex unphase = std::conj(uc[best]) / mag;
    for (std::size_t i = 0; i < n; ++i) {
      uc[i] *= unphase;
      vs.col(c)[i] *= unphase;
    }
    uc[best] = complex(std::abs(uc[best]), 0.0);
  }

  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      out.u(r, c) = u.col(c)[r];
      out.v(r, c) = vs.col(c)[r];
    }
  return out;
}

int effective_rank(const SvdFactors& f, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("effective_rank: requires 0 < tau < 1");
  if (f.s.empty() || f.s.front() == 0.0) return 0;
  const double cut = tau * f.s.front();
  return static_cast<int>(std::count_if(f.s.begin(), f.s.end(), [&](double x) { return x >= cut; }));
}

SvdResiduals svd_residuals(const ComplexMatrix& k, const SvdFactors& f) {
  const std::size_t n = k.rows();
  ComplexMatrix us = f.u;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) us(r, c) *= f.s[c];
  const double diff = frobenius_norm(k - us * adjoint(f.v));
  const double scale = frobenius_norm(k);

  auto ortho = [n](const ComplexMatrix& m) {
    const ComplexMatrix g = adjoint(m) * m;
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        worst = std::max(worst, std::abs(g(r, c) - (r == c ? complex(1.0) : complex(0.0))));
    return worst;
  };
  return {scale > 0.0 ? diff / scale : diff, ortho(f.u), ortho(f.v)};
}

void write_singular_values_csv(std::ostream& os, const SvdFactors& f) {
  os << "# msrimg singular-values v1\n";
  os << "m,rho,rho_relative\n";
  const double top = f.s.empty() ? 0.0 : f.s.front();
  for (std::size_t m = 0; m < f.s.size(); ++m) {
    os << (m + 1) << ',' << format_real(f.s[m]) << ','
       << format_real(top > 0.0 ? f.s[m] / top : 0.0) << '\n';
  }
}

}  // namespace msrimg
