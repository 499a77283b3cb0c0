#include "jacobi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "jacobi/eigenfunctions.hpp"
#include "jacobi/io.hpp"

namespace jacobi {

namespace {

constexpr double kPi = std::numbers::pi;

void check_q(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw std::domain_error("q must be finite and nonnegative");
}

// q e^a E_1(a) - 1, decreasing in a > 0.
double secular(double a, double q) { return q * specfun::expint_E1_scaled(a).real() - 1.0; }

}  // namespace

double weight_free(double lambda) {
  if (lambda < 0.0) throw std::domain_error("weight_free: lambda must be nonnegative");
  return std::exp(-lambda);
}

cplx resolvent_function_f(cplx z) { return resolvent_f(z); }

specfun::BoundaryValue resolvent_function_f_boundary(double lambda) {
  if (lambda == 0.0) throw std::domain_error("resolvent_function_f: threshold lambda = 0");
  if (!(lambda > 0.0)) throw std::domain_error("resolvent_function_f: lambda must be positive");
  return {-specfun::expint_Ei_scaled(lambda), std::exp(-lambda)};
}

cplx resolvent_function_fL(cplx z, double q) {
  check_q(q);
  const cplx f = resolvent_f(z);
  return f / (1.0 - q * f);
}

GFactor g_factor(double lambda, double q) {
  check_q(q);
  if (lambda < 0.0) throw std::domain_error("g_factor: lambda must be nonnegative");
  GFactor g;
  g.lambda = lambda;
  g.q = q;
  if (lambda == 0.0) {
    g.threshold = true;
    g.delta_f = 1.0;
    return g;
  }
  const auto b = resolvent_function_f_boundary(lambda);
  g.pv_f = b.pv;
  g.delta_f = b.delta;
  const double re = 1.0 - q * b.pv;
  const double im = q * kPi * b.delta;
  g.value = 1.0 / (re * re + im * im);
  g.w_L = g.value * b.delta;
  return g;
}

BoundState bound_state_solve(double q, int xmax) {
  if (!(q > 0.0) || !std::isfinite(q)) throw std::domain_error("bound_state_solve: q must be positive");
  if (xmax < 0) throw std::invalid_argument("bound_state_solve: xmax must be nonnegative");
  double lo = 1e-300;
  double hi = 1.0;
  if (!(secular(lo, q) > 0.0))
    throw std::runtime_error("bound_state_solve: bracket failure, root below a = 1e-300");
  int expansions = 0;
  while (secular(hi, q) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 60) throw std::runtime_error("bound_state_solve: bracket expansion failed");
  }
  while (hi - lo > 1e-14 * hi) {
    const double mid = hi < 2.0 * lo ? 0.5 * (lo + hi) : std::sqrt(lo) * std::sqrt(hi);
    if (secular(mid, q) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double e = specfun::expint_E1_scaled(a).real();
    const double h = q * e - 1.0;
    const double dh = q * (e - 1.0 / a);
    const double next = a - h / dh;
    if (!(next > lo * (1.0 - 1e-12) && next < hi * (1.0 + 1e-12))) break;
    a = next;
  }

  BoundState bs;
  bs.q = q;
  bs.a = a;
  bs.lambda0 = -a;
  bs.secular_residual = std::abs(secular(a, q));
  bs.psi_norm_sq = 1.0 / a - 1.0 / q;
  LatticeVector psi = psi_resolvent(ComplexEnergy::off(cplx(-a, 0.0)), xmax);
  const double scale = 1.0 / std::sqrt(bs.psi_norm_sq);
  bs.vector = LatticeVector(psi.size(), false);
  for (std::size_t x = 0; x < psi.size(); ++x) bs.vector[x] = cplx(psi[x].real() * scale, 0.0);
  return bs;
}

double bound_state_truncated_residual(const BoundState& bs, int N) {
  if (N < 2) throw std::invalid_argument("bound_state_truncated_residual: N must be >= 2");
  LatticeVector v(static_cast<std::size_t>(N) + 1, true);
  if (bs.vector.size() > static_cast<std::size_t>(N)) {
    for (int x = 0; x <= N; ++x) v[static_cast<std::size_t>(x)] = bs.vector[static_cast<std::size_t>(x)];
  } else {
    const LatticeVector psi = psi_resolvent(ComplexEnergy::off(cplx(bs.lambda0, 0.0)), N);
    const double scale = 1.0 / std::sqrt(bs.psi_norm_sq);
    for (int x = 0; x <= N; ++x) v[static_cast<std::size_t>(x)] = psi[static_cast<std::size_t>(x)] * scale;
  }
  LatticeVector r = apply_L(v, bs.q);
  for (std::size_t x = 0; x < r.size(); ++x) r[x] -= bs.lambda0 * v[x];
  return norms(r).l2 / norms(v).l2;
}

LatticeVector pv_psi_perturbed(double lambda, double q, int xmax) {
  if (lambda == 0.0) throw std::domain_error("pv_psi_perturbed: threshold lambda = 0");
  if (!(lambda > 0.0)) throw std::domain_error("pv_psi_perturbed: lambda must be positive");
  check_q(q);
  const GFactor g = g_factor(lambda, q);
  const std::vector<double> phi = phi_real(lambda, xmax);
  const std::vector<double> xi = xi_real(lambda, xmax);
  const double pw = kPi * g.delta_f;
  const double cphi = g.pv_f - q * g.pv_f * g.pv_f - q * pw * pw;
  const double cxi = 1.0 - q * g.pv_f;
  LatticeVector out(phi.size(), false);
  for (std::size_t x = 0; x < phi.size(); ++x) out[x] = g.value * (cphi * phi[x] + cxi * xi[x]);
  return out;
}

SpectralSample spectral_sample(OperatorKind kind, double q, double lambda, int xmax) {
  if (lambda < 0.0) throw std::domain_error("spectral_sample: lambda must be nonnegative");
  SpectralSample s;
  s.eigenfunction.resize(static_cast<std::size_t>(std::max(xmax, 0)) + 1);
  if (kind == OperatorKind::free) {
    s.weight = std::exp(-lambda);
    phi_real(lambda, xmax, s.eigenfunction.data());
  } else {
    s.weight = g_factor(lambda, q).w_L;
    phi_perturbed_real(lambda, q, xmax, s.eigenfunction.data());
  }
  return s;
}

double spectral_kernel(OperatorKind kind, double q, double lambda, int x1, int x2) {
  if (x1 < 0 || x2 < 0) throw std::invalid_argument("spectral_kernel: sites must be nonnegative");
  const SpectralSample s = spectral_sample(kind, q, lambda, std::max(x1, x2));
  return s.weight * s.eigenfunction[static_cast<std::size_t>(x1)] *
         s.eigenfunction[static_cast<std::size_t>(x2)];
}

double spectral_cutoff(OperatorKind kind, double q, int xmax, double threshold) {
  if (xmax < 0) throw std::invalid_argument("spectral_cutoff: xmax must be nonnegative");
  if (!(threshold > 0.0)) throw std::invalid_argument("spectral_cutoff: threshold must be positive");
  const double qq = kind == OperatorKind::free ? 0.0 : q;
  std::vector<double> u(static_cast<std::size_t>(xmax) + 1);
  std::vector<double> xi(u.size());
  // Past the last turning point every e^{-lambda/2} u_lambda(x) decays monotonically.
  for (double lambda = 4.0 * xmax + 2.0;; lambda += 2.0) {
    phi_real(lambda, xmax, u.data());
    if (qq != 0.0) {
      xi_real(lambda, xmax, xi.data());
      for (std::size_t x = 0; x < u.size(); ++x) u[x] += qq * xi[x];
    }
    // log-scale comparison keeps large lambda finite
    double worst = -INFINITY;
    for (double v : u) worst = std::max(worst, std::log(std::abs(v) + 1e-300));
    if (worst - 0.5 * lambda < std::log(threshold)) return lambda;
    if (lambda > 1e5) throw std::runtime_error("spectral_cutoff: no cutoff found");
  }
}

void MeshConfig::validate() const {
  if (cutoff < 0.0) throw std::invalid_argument("MeshConfig: cutoff must be nonnegative");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("MeshConfig: sigma must lie in (0, 1)");
  if (!(floor > 0.0)) throw std::invalid_argument("MeshConfig: floor must be positive");
  if (panels_per_period < 4) throw std::invalid_argument("MeshConfig: panels_per_period must be >= 4");
  if (!(max_width > 0.0)) throw std::invalid_argument("MeshConfig: max_width must be positive");
}

std::vector<quad::Panel> spectral_mesh(OperatorKind kind, int x_phase, double cutoff,
                                       const MeshConfig& cfg) {
  cfg.validate();
  if (!(cutoff > 0.0)) throw std::invalid_argument("spectral_mesh: cutoff must be positive");
  const double du = 2.0 * kPi / cfg.panels_per_period / (2.0 * std::sqrt(x_phase + 1.0));
  const double umax = std::sqrt(cutoff);
  std::vector<quad::Panel> panels;
  double first = std::min(du * du, cutoff);
  if (kind == OperatorKind::perturbed) {
    auto graded = quad::geometric_panels(first, cfg.floor, cfg.sigma);
    std::reverse(graded.begin(), graded.end());
    panels.insert(panels.end(), graded.begin(), graded.end());
  } else {
    panels.push_back({0.0, first});
  }
  double a = first;
  double u = std::sqrt(first);
  while (a < cutoff) {
    u = std::min(u + du, umax);
    double b = std::min(u * u, cutoff);
    if (b - a > cfg.max_width) {
      b = a + cfg.max_width;
      u = std::sqrt(b);
    }
    if (cutoff - b < 1e-9 * cutoff) b = cutoff;
    panels.push_back({a, b});
    a = b;
  }
  return panels;
}

double completeness_check(OperatorKind kind, double q, int x1, int x2, const MeshConfig& cfg,
                          int nodes_per_panel) {
  if (x1 < 0 || x2 < 0) throw std::invalid_argument("completeness_check: sites must be nonnegative");
  if (kind == OperatorKind::perturbed && !(q > 0.0))
    throw std::domain_error("completeness_check: perturbed operator needs q > 0");
  const int xm = std::max(x1, x2);
  const double cutoff = cfg.cutoff > 0.0 ? cfg.cutoff : spectral_cutoff(kind, q, std::min(x1, x2));
  const auto panels = spectral_mesh(kind, xm, cutoff, cfg);
  const quad::Rule& ref = quad::gauss_legendre(nodes_per_panel);
  double integral = 0.0;
  for (const auto& p : panels)
    integral += quad::integrate(ref, p.a, p.b, [&](double lambda) {
      return spectral_kernel(kind, q, lambda, x1, x2);
    });
  double projector = 0.0;
  if (kind == OperatorKind::perturbed) {
    const BoundState bs = bound_state_solve(q, xm);
    projector = bs.vector[static_cast<std::size_t>(x1)].real() * bs.vector[static_cast<std::size_t>(x2)].real();
  }
  return std::abs(projector + integral - (x1 == x2 ? 1.0 : 0.0));
}

void write_g_table(std::ostream& os, double q, const std::vector<double>& lambdas) {
  io::CsvWriter w(os, "jacobi.g_table", 1, {"lambda", "g", "w_L", "g_log2_lambda"});
  for (double lambda : lambdas) {
    const GFactor g = g_factor(lambda, q);
    const double l = std::log(lambda);
    w.cell(lambda).cell(g.value).cell(g.w_L).cell(lambda > 0.0 ? g.value * l * l : 0.0);
    w.end_row();
  }
}

nlohmann::json to_json(const BoundState& bs) {
  return {{"q", bs.q},
          {"lambda0", bs.lambda0},
          {"a", bs.a},
          {"secular_residual", bs.secular_residual},
          {"psi_norm_sq", bs.psi_norm_sq},
          {"vector", to_json(bs.vector)}};
}

}  // namespace jacobi
