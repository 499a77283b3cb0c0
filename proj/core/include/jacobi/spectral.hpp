#pragma once

#include <ostream>
#include <vector>

#include "jacobi/lattice.hpp"
#include "jacobi/quadrature.hpp"
#include "jacobi/specfun.hpp"

namespace jacobi {

double weight_free(double lambda);

// f_z = e^{-z} E_1(-z) off [0, inf). Throws std::domain_error at z = 0 and on
// the spectrum.
cplx resolvent_function_f(cplx z);
// Boundary values on the spectrum: pv = -e^{-lambda} Ei(lambda), delta = e^{-lambda};
// f(lambda + i0) = pv + i pi delta.
specfun::BoundaryValue resolvent_function_f_boundary(double lambda);
// f^L_z = f_z / (1 - q f_z).
cplx resolvent_function_fL(cplx z, double q);

struct GFactor {
  double lambda = 0.0;
  double q = 0.0;
  double value = 0.0;    // g_lambda
  double pv_f = 0.0;     // PV f_lambda
  double delta_f = 0.0;  // w_lambda
  double w_L = 0.0;      // g_lambda * w_lambda
  bool threshold = false;
};

// g_lambda = [(1 - q PV f)^2 + (q pi w)^2]^{-1}. At lambda = 0 returns the
// limit 0 with the threshold flag set.
GFactor g_factor(double lambda, double q);

struct BoundState {
  double q = 0.0;
  double lambda0 = 0.0;  // = -a
  double a = 0.0;
  double secular_residual = 0.0;  // |1 - q e^{-lambda0} E_1(-lambda0)|
  double psi_norm_sq = 0.0;       // ||psi_{lambda0}||^2 = 1/a - 1/q
  LatticeVector vector;           // normalised, vector(0) > 0
};

// Unique negative eigenvalue of L and its eigenvector on x = 0..xmax.
BoundState bound_state_solve(double q, int xmax = 200);

// ||(L^{(N)} - lambda0) v|| / ||v|| for v truncated to 0..N.
double bound_state_truncated_residual(const BoundState& bs, int N);

// g_lambda [PVf phi - q PVf xi + xi - q PVf^2 phi - q (pi w)^2 phi].
LatticeVector pv_psi_perturbed(double lambda, double q, int xmax);

// w phi(x1) phi(x2) (free) or w^L phi^L(x1) phi^L(x2) (perturbed).
double spectral_kernel(OperatorKind kind, double q, double lambda, int x1, int x2);

// Spectral weight and eigenfunction values at one lambda; shared by the
// quadrature based modules.
struct SpectralSample {
  double weight = 0.0;
  std::vector<double> eigenfunction;  // x = 0..xmax
};
SpectralSample spectral_sample(OperatorKind kind, double q, double lambda, int xmax);

// Upper integration limit past which e^{-lambda/2} |u_lambda(x)| < threshold
// for all x <= xmax (u = phi or phi^L). Never below the last turning point
// 4 xmax + 2.
double spectral_cutoff(OperatorKind kind, double q, int xmax, double threshold = 1e-10);

struct MeshConfig {
  double cutoff = 0.0;  // 0: spectral_cutoff of the requested window
  double sigma = 0.5;   // geometric grading ratio towards the threshold
  double floor = 1e-12;
  int panels_per_period = 4;  // per 2 pi of eigenfunction phase 2 sqrt(x lambda)
  double max_width = 4.0;

  void validate() const;
};

// Panels covering [0, cutoff]: uniform in sqrt(lambda), resolving the
// eigenfunction oscillation up to site x_phase, with the first panel replaced
// by geometric panels down to cfg.floor for the perturbed operator.
std::vector<quad::Panel> spectral_mesh(OperatorKind kind, int x_phase, double cutoff,
                                       const MeshConfig& cfg);

// |P_{lambda0}(x1,x2) + int F(lambda,x1,x2) d lambda - delta_{x1,x2}|; no projector
// for the free operator.
double completeness_check(OperatorKind kind, double q, int x1, int x2,
                          const MeshConfig& cfg = {}, int nodes_per_panel = 24);

// (lambda, g, w^L) table.
void write_g_table(std::ostream& os, double q, const std::vector<double>& lambdas);
nlohmann::json to_json(const BoundState& bs);

}  // namespace jacobi
