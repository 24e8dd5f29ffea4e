#pragma once

#include <iosfwd>
#include <vector>

#include "msrimg/forward.hpp"
#include "msrimg/types.hpp"

namespace msrimg {

// K = U diag(s) V^H with U, V unitary (columns are the singular vectors) and
// s sorted descending. Each column of U has its largest-magnitude entry (first
// one on ties) real and positive; the matching column of V carries the same
// phase so the factorization is unchanged.
struct SvdFactors {
  ComplexMatrix u;
  std::vector<double> s;
  ComplexMatrix v;

  std::size_t size() const noexcept { return s.size(); }
};

/// One-sided (Hestenes) Jacobi SVD of a square complex matrix. Throws
/// NumericalError if the sweep cap is hit before convergence.
SvdFactors svd(const ComplexMatrix& k);
inline SvdFactors svd(const MsrMatrix& k) { return svd(k.entries); }

/// #{m : s_m >= tau * s_1}; 0 only when s_1 = 0. Requires 0 < tau < 1.
int effective_rank(const SvdFactors& f, double tau);

/// Residuals used by the SVD contract: ||K - U S V^H||_F / ||K||_F (absolute
/// when K = 0), max |U^H U - I| and max |V^H V - I|.
struct SvdResiduals {
  double reconstruction;
  double u_orthonormality;
  double v_orthonormality;
};
SvdResiduals svd_residuals(const ComplexMatrix& k, const SvdFactors& f);

/// CSV "m,rho,rho_relative" (m is 1-based) preceded by a version line.
void write_singular_values_csv(std::ostream& os, const SvdFactors& f);

}  // namespace msrimg
