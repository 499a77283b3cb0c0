#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "jacobi/lattice.hpp"
#include "jacobi/propagator.hpp"

namespace jacobi {

enum class KernelPart { full, continuum };

struct DecayConfig {
  WeightSpec weight;
  int xmax = 40;
  // Rows xmax < x1 <= tail_factor * xmax are evaluated to check that the
  // weighted sup is attained inside the window.
  int tail_factor = 2;
  double tail_ratio_limit = 1.0;
  QuadratureConfig quad;

  void validate() const;
};

struct DecayCurve {
  OperatorKind kind = OperatorKind::free;
  double q = 0.0;
  KernelPart part = KernelPart::full;
  DecayConfig cfg;
  std::vector<double> ts;
  // sup_{x1 <= X} sum_{x2 <= X} |(x1+k)^tau K(t,x1,x2) (x2+k)^tau|
  std::vector<double> values;
  std::vector<double> err_est;
  // sup_{x1 <= X, x2 <= X} |(x1+k)^tau K (x2+k)^tau|, the exact l1 -> l_inf norm on the window
  std::vector<double> entry_sup;
  // weighted row sums for X < x1 <= tail_factor X, and their ratio to values
  std::vector<double> tail;
};

// Throws std::runtime_error when a sampled row beyond the window exceeds
// tail_ratio_limit times the window value.
DecayCurve decay_curve(OperatorKind kind, double q, const std::vector<double>& ts, KernelPart part,
                       const DecayConfig& cfg = {});

double weighted_kernel_norm(double t, const OperatorSpec& spec, const DecayConfig& cfg = {});
// Same norm with the bound-state part removed.
double essential_part_norm(double t, double q, const DecayConfig& cfg = {});

std::vector<double> log_spaced(double a, double b, int n);

enum class FitModel { pure_power, power_log };

struct DecayFitReport {
  FitModel model = FitModel::pure_power;
  double slope = 0.0;      // exponent p, or log-power m
  double intercept = 0.0;  // log c
  std::vector<double> residuals;
  double rms_residual = 0.0;
  double max_residual = 0.0;
  std::size_t samples = 0;
};

// pure_power: log D against log t. power_log: log(t D) against log log t.
// Needs >= 8 samples spanning >= 2 decades (and t > 1 for power_log).
DecayFitReport fit_decay(const std::vector<double>& ts, const std::vector<double>& values, FitModel model);

struct ConstantCheck {
  double constant = 73.0;
  long samples = 0;
  long violations = 0;
  double worst_ratio = 0.0;  // max |K| t / (C (x1+k)^3 (x2+k)^3)
  double worst_t = 0.0;
  int worst_x1 = 0;
  int worst_x2 = 0;
};

// |K_free(t,x1,x2)| <= C (x1+kappa)^3 (x2+kappa)^3 / t on x1, x2 <= xmax.
ConstantCheck constant_bound_check(const std::vector<double>& ts, int xmax, double kappa,
                                   double constant = 73.0, const QuadratureConfig& cfg = {});

struct GThresholdSample {
  double lambda = 0.0;
  double g = 0.0;
  double g_log2 = 0.0;   // g log^2 lambda
  double dg_prod = 0.0;  // g' lambda |log lambda|^3
  double d2g_prod = 0.0; // g'' lambda^2 log^2 lambda
  double F00 = 0.0;      // w^L phi^L(0)^2 = w^L
};

struct GThresholdReport {
  double q = 0.0;
  std::vector<GThresholdSample> samples;
  double limit_target = 0.0;         // 1 / q^2
  double limit_relative_error = 0.0; // at the smallest lambda
  double sup_g_log2 = 0.0;
  double sup_dg_prod = 0.0;
  double sup_d2g_prod = 0.0;
  double ghat0 = 0.0;  // sampled sup of g on [0, inf)
  // max |product| over the lowest decade / max over the highest decade
  double dg_growth = 0.0;
  double d2g_growth = 0.0;
  bool products_bounded = false;  // finite, and neither product grows more than 2x towards the threshold
  bool F_decreasing_to_zero = false;  // F(lambda,0,0) < 1e-2 and monotone on lambda <= 1e-3
};

// Samples on log-spaced lambda in [lambda_min, lambda_max]; derivatives by
// Richardson-extrapolated central differences with relative step 1e-3.
GThresholdReport g_threshold_hypotheses_report(double q, double lambda_min = 1e-8, double lambda_max = 1e-1,
                                               int samples = 29);

std::string to_string(FitModel m);
std::string to_string(KernelPart p);

// Columns t, value, err_est.
void write_csv(std::ostream& os, const DecayCurve& c);
nlohmann::json to_json(const DecayFitReport& r);
nlohmann::json to_json(const GThresholdReport& r);
nlohmann::json to_json(const ConstantCheck& c);

}  // namespace jacobi
