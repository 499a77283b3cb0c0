#pragma once

#include <ostream>
#include <vector>

#include "jacobi/lattice.hpp"
#include "jacobi/spectral.hpp"

namespace jacobi {

struct QuadratureConfig {
  MeshConfig mesh;
  int filon_degree = 15;     // interpolation degree per panel (degree + 1 nodes)
  int max_doublings = 2;     // degree doublings allowed beyond the first comparison
  double tolerance = 1e-9;   // on the degree-doubling difference
  double cutoff_threshold = 1e-13;

  void validate() const;
};

// e^{-itH}(x1, x2) on x1 <= xmax, x2 <= cmax for each t. For the perturbed
// operator the continuum part (e^{-itL} P_e) and the bound-state part are kept
// separately.
struct KernelTable {
  OperatorKind kind = OperatorKind::free;
  double q = 0.0;
  QuadratureConfig cfg;
  std::vector<double> ts;
  int xmax = 0;
  int cmax = 0;
  std::vector<cplx> continuum;  // [t][x1][x2]
  std::vector<cplx> bound;      // [t][x1][x2]; empty for the free operator
  std::vector<double> err;      // degree-doubling estimate per entry
  int nodes = 0;                // quadrature nodes of the accepted rule
  int panels = 0;
  double lambda_cutoff = 0.0;

  [[nodiscard]] std::size_t index(std::size_t it, int x1, int x2) const;
  [[nodiscard]] cplx continuum_at(std::size_t it, int x1, int x2) const { return continuum[index(it, x1, x2)]; }
  [[nodiscard]] cplx bound_at(std::size_t it, int x1, int x2) const {
    return bound.empty() ? cplx() : bound[index(it, x1, x2)];
  }
  [[nodiscard]] cplx at(std::size_t it, int x1, int x2) const { return continuum_at(it, x1, x2) + bound_at(it, x1, x2); }
  [[nodiscard]] double err_at(std::size_t it, int x1, int x2) const { return err[index(it, x1, x2)]; }
  [[nodiscard]] double max_err() const;
};

KernelTable kernel_table(OperatorKind kind, double q, const std::vector<double>& ts, int xmax, int cmax,
                         const QuadratureConfig& cfg = {});

struct KernelValue {
  cplx continuum;
  cplx bound;
  double err_est = 0.0;
  [[nodiscard]] cplx full() const { return continuum + bound; }
};

cplx kernel_free(double t, int x1, int x2, const QuadratureConfig& cfg = {}, double* err_est = nullptr);
KernelValue kernel_perturbed(double t, int x1, int x2, double q, const QuadratureConfig& cfg = {});

// Columns t, x1, x2, re, im, err_est of the full kernel.
void write_csv(std::ostream& os, const KernelTable& table);

// (K v)(x1) for x1 <= table.xmax; v must have length table.cmax + 1.
LatticeVector apply_kernel(const KernelTable& table, std::size_t it, const LatticeVector& v);
// Builds the kernel for v's support window and rows x1 <= xout (default: same window).
LatticeVector evolve_state(const LatticeVector& v, double t, const OperatorSpec& spec,
                           const QuadratureConfig& cfg = {}, int xout = -1);

// Eigenpairs of the truncated matrix L^{(N)} below a cutoff, with eigenvector
// rows on a window x <= X. Eigenvalues come from Sturm bisection and a
// bracketed Newton step on the characteristic recursion.
class TruncatedSpectrum {
 public:
  TruncatedSpectrum(const OperatorSpec& spec, int window, double cutoff);

  [[nodiscard]] const std::vector<double>& eigenvalues() const { return eig_; }
  [[nodiscard]] int window() const { return window_; }
  [[nodiscard]] int N() const { return spec_.N; }
  // Eigenvector j at site x <= window.
  [[nodiscard]] double row(std::size_t j, int x) const {
    return rows_[j * static_cast<std::size_t>(window_ + 1) + static_cast<std::size_t>(x)];
  }
  // max over x <= window of 1 - sum_j row(j, x)^2.
  [[nodiscard]] double discarded_weight() const;
  // e^{-itL^{(N)}}(x1, x2) for x1, x2 <= window.
  [[nodiscard]] std::vector<cplx> kernel(double t) const;
  // e^{-itL^{(N)}} v on all sites 0..N; v supported in the window.
  [[nodiscard]] LatticeVector evolve(const LatticeVector& v, double t) const;

 private:
  OperatorSpec spec_;
  Tridiagonal T_;
  int window_;
  std::vector<double> eig_;
  std::vector<double> rows_;
  std::vector<double> full_negative_;  // full eigenvector of a negative eigenvalue, if any

  [[nodiscard]] std::vector<double> eigenvector(double lambda) const;
};

struct OracleOptions {
  bool adaptive = true;  // double N until converged; otherwise only verify spec.N
  double tolerance = 1e-8;
  int max_N = 1 << 17;
  int window = 10;  // comparison window beyond the support of v
};

struct OracleKernel {
  std::vector<double> ts;
  int window = 0;
  int N = 0;
  double doubling_discrepancy = 0.0;
  double discarded_weight = 0.0;
  std::vector<cplx> values;  // [t][x1][x2]

  [[nodiscard]] cplx at(std::size_t it, int x1, int x2) const {
    const auto w = static_cast<std::size_t>(window + 1);
    return values[(it * w + static_cast<std::size_t>(x1)) * w + static_cast<std::size_t>(x2)];
  }
};

// Truncated-matrix kernel on x1, x2 <= window with an N-doubling check.
OracleKernel oracle_kernel(const std::vector<double>& ts, const OperatorSpec& spec, int window,
                           const OracleOptions& opt = {});

struct OracleResult {
  LatticeVector state;  // sites 0..N
  int N = 0;
  double doubling_discrepancy = 0.0;
  double discarded_weight = 0.0;
};

OracleResult oracle_evolve(const LatticeVector& v, double t, const OperatorSpec& spec,
                           const OracleOptions& opt = {});

}  // namespace jacobi
