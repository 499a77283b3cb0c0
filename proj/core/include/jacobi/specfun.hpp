#pragma once

// Exponential integrals on the cut plane C \ (-inf, 0].

#include <complex>

namespace jacobi::specfun {

using cplx = std::complex<double>;

inline constexpr double euler_gamma = 0.57721566490153286061;

enum class Side { none, above, below };

struct CutPlanePoint {
  cplx z;
  Side side = Side::none;
};

// Boundary value of an analytic function on the cut, split as pv -/+ i*pi*delta
// for the limits from above/below.
struct BoundaryValue {
  double pv = 0.0;
  double delta = 0.0;

  [[nodiscard]] cplx from(Side side) const;
};

// E_{n+1}(z). With side = above/below, z must lie on the cut and the
// corresponding boundary value is returned.
// Throws std::domain_error for n = 0, z = 0 or an off-cut point with a side.
cplx generalized_expint(int n, cplx z, Side side = Side::none);
cplx generalized_expint(int n, const CutPlanePoint& p);

// PV and delta part of E_{n+1}(-lambda +- i0), lambda > 0.
BoundaryValue expint_boundary(int n, double lambda);

// All of E_1(z) .. E_{nmax+1}(z) in one pass; out[k] = E_{k+1}(z).
void generalized_expint_table(int nmax, cplx z, cplx* out);
// PV E_1(-lambda) .. PV E_{nmax+1}(-lambda).
void expint_boundary_pv_table(int nmax, double lambda, double* out);

// e^z E_1(z) off the cut, finite where E_1 itself would overflow.
cplx expint_E1_scaled(cplx z);

// Ei(x) for x > 0; throws std::domain_error otherwise.
double expint_Ei(double x);
// exp(-x) * Ei(x), finite for large x.
double expint_Ei_scaled(double x);

// lambda^n / n!
double delta_part_E(int n, double lambda);

// digamma(k) = -gamma + H_{k-1}
double digamma_posint(int k);

}  // namespace jacobi::specfun
