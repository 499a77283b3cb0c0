#include "jacobi/decay.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "jacobi/fd.hpp"
#include "jacobi/io.hpp"
#include "jacobi/spectral.hpp"

namespace jacobi {

void DecayConfig::validate() const {
  if (!(weight.kappa > 0.0)) throw std::invalid_argument("DecayConfig: kappa must be positive");
  if (xmax < 0) throw std::invalid_argument("DecayConfig: xmax must be nonnegative");
  if (tail_factor < 1) throw std::invalid_argument("DecayConfig: tail_factor must be >= 1");
  if (!(tail_ratio_limit > 0.0)) throw std::invalid_argument("DecayConfig: tail_ratio_limit must be positive");
  quad.validate();
}

DecayCurve decay_curve(OperatorKind kind, double q, const std::vector<double>& ts, KernelPart part,
                       const DecayConfig& cfg) {
  cfg.validate();
  if (kind == OperatorKind::free) part = KernelPart::full;
  const int X = cfg.xmax;
  const int R = cfg.tail_factor * X;
  const KernelTable tab = kernel_table(kind, q, ts, R, X, cfg.quad);

  std::vector<double> wt(static_cast<std::size_t>(R) + 1);
  for (int x = 0; x <= R; ++x) wt[static_cast<std::size_t>(x)] = weight_factor(x, cfg.weight);

  DecayCurve c;
  c.kind = kind;
  c.q = kind == OperatorKind::free ? 0.0 : q;
  c.part = part;
  c.cfg = cfg;
  c.ts = ts;
  for (std::size_t it = 0; it < ts.size(); ++it) {
    double value = 0.0;
    double err = 0.0;
    double entry = 0.0;
    double tail = 0.0;
    for (int x1 = 0; x1 <= R; ++x1) {
      double row = 0.0;
      double row_err = 0.0;
      for (int x2 = 0; x2 <= X; ++x2) {
        const cplx k = part == KernelPart::full ? tab.at(it, x1, x2) : tab.continuum_at(it, x1, x2);
        const double w = wt[static_cast<std::size_t>(x1)] * wt[static_cast<std::size_t>(x2)];
        const double a = w * std::abs(k);
        row += a;
        row_err += w * tab.err_at(it, x1, x2);
        if (x1 <= X) entry = std::max(entry, a);
      }
      if (x1 <= X) {
        value = std::max(value, row);
        err = std::max(err, row_err);
      } else {
        tail = std::max(tail, row);
      }
    }
    if (value > 0.0 && tail > cfg.tail_ratio_limit * value) {
      std::ostringstream msg;
      msg << "decay_curve: weighted tail not negligible at t = " << ts[it] << " (rows beyond x = " << X
          << " reach " << tail << " against window value " << value << "); increase xmax";
      throw std::runtime_error(msg.str());
    }
    c.values.push_back(value);
    c.err_est.push_back(err);
    c.entry_sup.push_back(entry);
    c.tail.push_back(tail);
  }
  return c;
}

double weighted_kernel_norm(double t, const OperatorSpec& spec, const DecayConfig& cfg) {
  if (spec.kind == OperatorKind::perturbed) spec.validate();
  return decay_curve(spec.kind, spec.q, {t}, KernelPart::full, cfg).values.front();
}

double essential_part_norm(double t, double q, const DecayConfig& cfg) {
  return decay_curve(OperatorKind::perturbed, q, {t}, KernelPart::continuum, cfg).values.front();
}

std::vector<double> log_spaced(double a, double b, int n) {
  if (!(a > 0.0 && b > a) || n < 2) throw std::invalid_argument("log_spaced: need 0 < a < b and n >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double la = std::log(a);
  const double lb = std::log(b);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
  out.front() = a;
  out.back() = b;
  return out;
}

DecayFitReport fit_decay(const std::vector<double>& ts, const std::vector<double>& values, FitModel model) {
  if (ts.size() != values.size()) throw std::invalid_argument("fit_decay: size mismatch");
  if (ts.size() < 8) throw std::invalid_argument("fit_decay: need at least 8 samples");
  const auto [mn, mx] = std::minmax_element(ts.begin(), ts.end());
  if (!(*mn > 0.0) || *mx / *mn < 100.0) throw std::invalid_argument("fit_decay: samples must span two decades");
  if (model == FitModel::power_log && !(*mn > 1.0))
    throw std::invalid_argument("fit_decay: power_log needs t > 1");
  std::vector<double> X(ts.size());
  std::vector<double> Y(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(values[i] > 0.0)) throw std::invalid_argument("fit_decay: values must be positive");
    if (model == FitModel::pure_power) {
      X[i] = std::log(ts[i]);
      Y[i] = std::log(values[i]);
    } else {
      X[i] = std::log(std::log(ts[i]));
      Y[i] = std::log(ts[i] * values[i]);
    }
  }
  const double n = static_cast<double>(X.size());
  double mxv = 0.0;
  double myv = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mxv += X[i];
    myv += Y[i];
  }
  mxv /= n;
  myv /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mxv) * (X[i] - mxv);
    sxy += (X[i] - mxv) * (Y[i] - myv);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_decay: degenerate abscissae");
  DecayFitReport r;
  r.model = model;
  r.samples = X.size();
  r.slope = sxy / sxx;
  r.intercept = myv - r.slope * mxv;
  double ss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double res = Y[i] - (r.intercept + r.slope * X[i]);
    r.residuals.push_back(res);
    ss += res * res;
    r.max_residual = std::max(r.max_residual, std::abs(res));
  }
  r.rms_residual = std::sqrt(ss / n);
  return r;
}

ConstantCheck constant_bound_check(const std::vector<double>& ts, int xmax, double kappa, double constant,
                                   const QuadratureConfig& cfg) {
  for (double t : ts)
    if (!(t > 0.0)) throw std::invalid_argument("constant_bound_check: t must be positive");
  const KernelTable tab = kernel_table(OperatorKind::free, 0.0, ts, xmax, xmax, cfg);
  ConstantCheck c;
  c.constant = constant;
  for (std::size_t it = 0; it < ts.size(); ++it)
    for (int x1 = 0; x1 <= xmax; ++x1)
      for (int x2 = 0; x2 <= xmax; ++x2) {
        const double rhs = constant * std::pow(x1 + kappa, 3) * std::pow(x2 + kappa, 3) / ts[it];
        const double ratio = (std::abs(tab.at(it, x1, x2)) + tab.err_at(it, x1, x2)) / rhs;
        ++c.samples;
        if (ratio >= 1.0) ++c.violations;
        if (ratio > c.worst_ratio) {
          c.worst_ratio = ratio;
          c.worst_t = ts[it];
          c.worst_x1 = x1;
          c.worst_x2 = x2;
        }
      }
  return c;
}

GThresholdReport g_threshold_hypotheses_report(double q, double lambda_min, double lambda_max, int samples) {
  if (!(q > 0.0)) throw std::domain_error("g_threshold_hypotheses_report: q must be positive");
  GThresholdReport r;
  r.q = q;
  r.limit_target = 1.0 / (q * q);
  auto g = [q](double l) { return g_factor(l, q).value; };
  for (double l : log_spaced(lambda_min, lambda_max, samples)) {
    const auto d = fd::richardson(g, l, 1e-3 * l);
    const double lg = std::log(l);
    GThresholdSample s;
    s.lambda = l;
    s.g = d.d0;
    s.g_log2 = d.d0 * lg * lg;
    s.dg_prod = d.d1 * l * std::abs(lg * lg * lg);
    s.d2g_prod = d.d2 * l * l * lg * lg;
    s.F00 = g_factor(l, q).w_L;
    r.sup_g_log2 = std::max(r.sup_g_log2, std::abs(s.g_log2));
    r.sup_dg_prod = std::max(r.sup_dg_prod, std::abs(s.dg_prod));
    r.sup_d2g_prod = std::max(r.sup_d2g_prod, std::abs(s.d2g_prod));
    r.samples.push_back(s);
  }
  r.limit_relative_error = std::abs(r.samples.front().g_log2 - r.limit_target) / r.limit_target;
  for (double l : log_spaced(1e-12, 1e3, 301)) r.ghat0 = std::max(r.ghat0, g(l));
  auto decade_max = [&](bool lowest, auto field) {
    double m = 0.0;
    for (const auto& s : r.samples) {
      const bool in = lowest ? s.lambda <= 10.0 * lambda_min : s.lambda >= 0.1 * lambda_max;
      if (in) m = std::max(m, std::abs(s.*field));
    }
    return m;
  };
  r.dg_growth = decade_max(true, &GThresholdSample::dg_prod) / decade_max(false, &GThresholdSample::dg_prod);
  r.d2g_growth = decade_max(true, &GThresholdSample::d2g_prod) / decade_max(false, &GThresholdSample::d2g_prod);
  r.products_bounded = std::isfinite(r.sup_dg_prod) && std::isfinite(r.sup_d2g_prod) && r.dg_growth <= 2.0 &&
                       r.d2g_growth <= 2.0;
  bool mono = true;
  for (std::size_t i = 1; i < r.samples.size(); ++i)
    if (r.samples[i].lambda <= 1e-3 && !(r.samples[i].F00 > r.samples[i - 1].F00)) mono = false;
  r.F_decreasing_to_zero = mono && r.samples.front().F00 < 1e-2;
  return r;
}

std::string to_string(FitModel m) { return m == FitModel::pure_power ? "pure_power" : "power_log"; }
std::string to_string(KernelPart p) { return p == KernelPart::full ? "full" : "continuum"; }

void write_csv(std::ostream& os, const DecayCurve& c) {
  io::CsvWriter w(os, "jacobi.decay_curve", 1, {"t", "value", "err_est"});
  for (std::size_t i = 0; i < c.ts.size(); ++i) {
    w.cell(c.ts[i]).cell(c.values[i]).cell(c.err_est[i]);
    w.end_row();
  }
}

nlohmann::json to_json(const DecayFitReport& r) {
  return {{"model", to_string(r.model)},     {"slope", r.slope},
          {"intercept", r.intercept},        {"residuals", r.residuals},
          {"rms_residual", r.rms_residual},  {"max_residual", r.max_residual},
          {"samples", r.samples}};
}

nlohmann::json to_json(const GThresholdReport& r) {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& x : r.samples)
    s.push_back({{"lambda", x.lambda}, {"g", x.g}, {"g_log2", x.g_log2}, {"dg_prod", x.dg_prod},
                 {"d2g_prod", x.d2g_prod}, {"F00", x.F00}});
  return {{"q", r.q},
          {"limit_target", r.limit_target},
          {"limit_relative_error", r.limit_relative_error},
          {"sup_g_log2", r.sup_g_log2},
          {"sup_dg_prod", r.sup_dg_prod},
          {"sup_d2g_prod", r.sup_d2g_prod},
          {"ghat0", r.ghat0},
          {"dg_growth", r.dg_growth},
          {"d2g_growth", r.d2g_growth},
          {"products_bounded", r.products_bounded},
          {"F_decreasing_to_zero", r.F_decreasing_to_zero},
          {"samples", s}};
}

nlohmann::json to_json(const ConstantCheck& c) {
  return {{"constant", c.constant}, {"samples", c.samples},   {"violations", c.violations},
          {"worst_ratio", c.worst_ratio}, {"worst_t", c.worst_t}, {"worst_x1", c.worst_x1},
          {"worst_x2", c.worst_x2}};
}

}  // namespace jacobi
