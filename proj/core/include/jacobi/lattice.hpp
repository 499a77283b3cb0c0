#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace jacobi {

using cplx = std::complex<double>;

// Complex sequence on x = 0..N.
struct LatticeVector {
  std::vector<cplx> values;
  // Declared finitely supported: every entry past the last stored index is zero.
  bool finite_support = true;

  LatticeVector() = default;
  explicit LatticeVector(std::size_t n, bool finite = true) : values(n), finite_support(finite) {}
  explicit LatticeVector(std::vector<cplx> v, bool finite = true)
      : values(std::move(v)), finite_support(finite) {}

  static LatticeVector unit(std::size_t x, std::size_t length);
  static LatticeVector ones(std::size_t length);
  static LatticeVector from_real(const std::vector<double>& v, bool finite = true);

  [[nodiscard]] std::size_t size() const { return values.size(); }
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }

  // Largest index holding a nonzero value; 0 for the zero vector.
  [[nodiscard]] std::size_t support_hint() const;
  [[nodiscard]] bool is_zero() const;
};

struct WeightSpec {
  double kappa = 4.0;
  double tau = -3.0;
};

enum class OperatorKind { free, perturbed };

struct OperatorSpec {
  OperatorKind kind = OperatorKind::free;
  double q = 1.0;
  int N = 400;

  void validate() const;
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples i and i+1

  [[nodiscard]] std::size_t size() const { return diag.size(); }
};

struct Norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double sup = 0.0;
};

struct SemiAnalyticEntry {
  int k = 0;
  double norm = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct SemiAnalyticReport {
  std::size_t x_v = 0;
  double l1 = 0.0;
  std::vector<SemiAnalyticEntry> entries;
  [[nodiscard]] bool ok() const;
};

// Stencil of L0 with the row 0 boundary term; the value past the last index is
// treated as zero.
LatticeVector apply_L0(const LatticeVector& v);
std::vector<double> apply_L0(const std::vector<double>& v);
LatticeVector apply_L(const LatticeVector& v, double q);

// Tv(k) = sum_x (-1)^x C(k,x) v(x) for k = 0..k_out.
LatticeVector binomial_transform(const LatticeVector& v, std::size_t k_out);
// Exact integer path; throws std::overflow_error when an intermediate leaves int64.
std::vector<std::int64_t> binomial_transform_exact(const std::vector<std::int64_t>& v,
                                                   std::size_t k_out);

LatticeVector apply_weight(const LatticeVector& v, const WeightSpec& w);
double weight_factor(double x, const WeightSpec& w);

Tridiagonal truncated_matrix(const OperatorSpec& spec);

Norms norms(const LatticeVector& v);
cplx inner(const LatticeVector& u, const LatticeVector& v);  // sum conj(u) v

SemiAnalyticReport semi_analytic_bound_report(const LatticeVector& v, int kmax);

// JSON array of [re, im] pairs.
nlohmann::json to_json(const LatticeVector& v);
LatticeVector lattice_from_json(const nlohmann::json& j);

}  // namespace jacobi
