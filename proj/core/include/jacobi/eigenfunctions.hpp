#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "jacobi/lattice.hpp"

namespace jacobi {

// Spectral parameter. With on_spectrum set, z is a real lambda >= 0 and
// resolvent quantities are principal values.
struct ComplexEnergy {
  cplx z;
  bool on_spectrum = false;

  static ComplexEnergy off(cplx z) { return {z, false}; }
  static ComplexEnergy spectrum(double lambda) { return {lambda, true}; }
  void validate() const;
};

// phi_lambda(0..xmax) from the three-term recursion, phi(0) = 1, phi(1) = 1 - lambda.
LatticeVector phi_recursion(cplx lambda, int xmax);
void phi_real(double lambda, int xmax, double* out);
std::vector<double> phi_real(double lambda, int xmax);

// phi_lambda(x) from its power series in double-double arithmetic.
cplx phi_series(cplx lambda, int x);

// f_z = psi_z(0) = e^{-z} E_1(-z), z off [0, inf).
cplx resolvent_f(cplx z);

// psi_z = (L0 - z)^{-1} chi_0. Off the spectrum, sites x <= 30 use the
// alternating E_{k+1} sum and larger sites the decaying solution of the
// recursion. On the spectrum the principal value PV f * phi + xi is returned.
// Throws std::domain_error at z = 0.
LatticeVector psi_resolvent(const ComplexEnergy& z, int xmax);

struct PsiDiagnostics {
  double overlap_discrepancy = 0.0;  // max |binomial - minimal| over the overlap, / max|psi|
  int recursion_length = 0;          // start index of the backward recursion
};
LatticeVector psi_resolvent(const ComplexEnergy& z, int xmax, PsiDiagnostics* diag);

// The two off-spectrum routes, exposed for cross-checks.
LatticeVector psi_binomial_route(cplx z, int xmax);
LatticeVector psi_minimal_route(cplx z, int xmax, int* recursion_length = nullptr);

// xi_z = psi_z - psi_z(0) phi_z: the polynomial solution of (L0 - z) xi = chi_0
// with xi(0) = 0. Defined for every complex z, including the spectrum.
LatticeVector xi_aux(const ComplexEnergy& z, int xmax);
void xi_real(double lambda, int xmax, double* out);
std::vector<double> xi_real(double lambda, int xmax);

// xi_z(x) from its integral over eta against e^{-eta}, by Gauss-Laguerre
// quadrature of the divided difference (exact for this polynomial integrand).
cplx xi_integral(cplx z, int x);

// phi^L_lambda = phi_lambda + q xi_lambda.
LatticeVector phi_perturbed(double lambda, double q, int xmax);
void phi_perturbed_real(double lambda, double q, int xmax, double* out);

// Generating functions sum_x u(x) s^x, |s| < 1. The reduced forms carry an
// extra factor (1 - s). Throws std::domain_error for |s| >= 1.
cplx generating_phi(cplx lambda, cplx s);
cplx generating_phi_reduced(cplx lambda, cplx s);
// Closed form of the reduced xi generating function for real lambda.
cplx generating_xi_reduced(double lambda, cplx s);
// Same quantity by direct quadrature of the eta integral of K(eta, lambda, s).
cplx generating_xi_reduced_quadrature(double lambda, cplx s);

struct ContourResult {
  cplx value;
  double err_est = 0.0;
  int nodes = 0;
  bool converged = false;
  std::vector<double> history;  // successive node-doubling differences
};

// Coefficient of s^x of a generating function, by the trapezoid rule on
// |s| = 1 - 1/(x + kappa). Starts at 8(x+2) nodes and doubles until successive
// values agree to tol.
ContourResult contour_reconstruct(const std::function<cplx(cplx)>& zeta, int x, double kappa,
                                  double tol = 1e-10, int max_doublings = 8);

struct BoundViolation {
  std::string check;
  int n = 0;
  int x = 0;
  double lambda = 0.0;
  double theta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct BoundCheckTally {
  std::string check;
  long samples = 0;
  long violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs
};

struct BoundReport {
  double kappa = 0.0;
  std::vector<BoundCheckTally> checks;
  std::vector<BoundViolation> violations;  // first few per check
  [[nodiscard]] long violation_count() const;
  [[nodiscard]] bool ok() const { return violation_count() == 0; }
};

struct BoundSuiteConfig {
  std::vector<double> lambdas;
  std::vector<int> xs;
  std::vector<int> ns{0, 1, 2};
  int theta_points = 720;
  // The xi derivative check needs the closed-form generating function at every
  // (theta, lambda, x); this subsamples x for that check only (1 = all).
  int xi_generating_x_stride = 1;
};

// Samples the generating-function and derivative bounds (see README).
BoundReport lemma_bound_suite(const BoundSuiteConfig& cfg, double kappa);

struct KappaScan {
  std::vector<double> kappas;
  std::vector<bool> passed;
  double smallest_passing = 0.0;  // 0 if none passed
};
KappaScan kappa_scan(const BoundSuiteConfig& cfg,
                     const std::vector<double>& kappas = {1.5, 2.0, 3.0, 4.0, 6.0});

enum class TableKind { phi, xi, phi_perturbed };

struct SpectralTables {
  TableKind kind = TableKind::phi;
  double q = 0.0;
  std::vector<double> lambdas;
  int xmax = 0;
  std::vector<double> values;  // lambda-major, (xmax + 1) per lambda

  [[nodiscard]] double at(std::size_t i_lambda, int x) const {
    return values[i_lambda * static_cast<std::size_t>(xmax + 1) + static_cast<std::size_t>(x)];
  }
};

SpectralTables build_tables(TableKind kind, const std::vector<double>& lambdas, int xmax,
                            double q = 0.0);
// CSV columns lambda, x, re, im.
void write_csv(std::ostream& os, const SpectralTables& t);
std::string to_string(TableKind k);

}  // namespace jacobi
