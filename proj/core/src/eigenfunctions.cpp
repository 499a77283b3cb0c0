#include "jacobi/eigenfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jacobi/ddouble.hpp"
#include "jacobi/fd.hpp"
#include "jacobi/io.hpp"
#include "jacobi/quadrature.hpp"
#include "jacobi/specfun.hpp"

namespace jacobi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kBinomialRouteMax = 30;
constexpr int kOverlapFrom = 25;

void check_xmax(int xmax) {
  if (xmax < 0) throw std::invalid_argument("xmax must be nonnegative");
}

template <class T>
void phi_fill(T lambda, int xmax, T* out) {
  out[0] = 1.0;
  if (xmax >= 1) out[1] = 1.0 - lambda;
  for (int x = 1; x < xmax; ++x)
    out[x + 1] = ((2.0 * x + 1.0 - lambda) * out[x] - static_cast<double>(x) * out[x - 1]) / (x + 1.0);
}

template <class T>
void xi_fill(T z, int xmax, T* out) {
  out[0] = 0.0;
  if (xmax >= 1) out[1] = -1.0;
  for (int x = 1; x < xmax; ++x)
    out[x + 1] = ((2.0 * x + 1.0 - z) * out[x] - static_cast<double>(x) * out[x - 1]) / (x + 1.0);
}

// exp(w) - 1 without cancellation for small |w|.
cplx expm1c(cplx w) {
  const double a = w.real();
  const double b = w.imag();
  const double sh = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * sh * sh, std::exp(a) * std::sin(b)};
}

void check_disc(cplx s) {
  if (!(std::abs(s) < 1.0)) throw std::domain_error("generating function needs |s| < 1");
}

}  // namespace

void ComplexEnergy::validate() const {
  if (on_spectrum) {
    if (z.imag() != 0.0 || z.real() < 0.0)
      throw std::domain_error("ComplexEnergy: on-spectrum point must be real and nonnegative");
  }
}

LatticeVector phi_recursion(cplx lambda, int xmax) {
  check_xmax(xmax);
  LatticeVector v(static_cast<std::size_t>(xmax) + 1, false);
  phi_fill(lambda, xmax, v.values.data());
  return v;
}

void phi_real(double lambda, int xmax, double* out) {
  check_xmax(xmax);
  phi_fill(lambda, xmax, out);
}

std::vector<double> phi_real(double lambda, int xmax) {
  std::vector<double> v(static_cast<std::size_t>(std::max(xmax, 0)) + 1);
  phi_real(lambda, xmax, v.data());
  return v;
}

cplx phi_series(cplx lambda, int x) {
  if (x < 0) throw std::invalid_argument("phi_series: x must be nonnegative");
  const dd::Complex lam(lambda);
  dd::Complex term(dd::Real(1.0));  // C(x,k) lambda^k / k!
  dd::Complex sum = term;
  for (int k = 0; k < x; ++k) {
    const dd::Real ratio = dd::Real(static_cast<double>(x - k)) /
                           (dd::Real(static_cast<double>(k + 1)) * dd::Real(static_cast<double>(k + 1)));
    term = term * lam * ratio;
    sum += ((k + 1) % 2 == 0) ? term : dd::Complex(-term.re, -term.im);
  }
  return sum.value();
}

cplx resolvent_f(cplx z) {
  if (z == cplx(0.0)) throw std::domain_error("resolvent_f: threshold z = 0");
  if (z.imag() == 0.0 && z.real() > 0.0)
    throw std::domain_error("resolvent_f: z on the spectrum; use the boundary-value form");
  return specfun::expint_E1_scaled(-z);
}

namespace {

// f_z in double-double from the continued fraction 1 / ((1 - z) - r_0), where
// r_0 = psi(1)/psi(0) comes from the backward ratio recursion. An error d in
// f_z enters psi(x) as d * phi_z(x), which grows quickly for z off the spectrum.
dd::Complex resolvent_f_dd(cplx z) {
  const dd::Complex zz(z);
  auto ratio0 = [&](int n) {
    dd::Complex r;
    for (int x = n; x >= 1; --x) {
      dd::Complex den(dd::Real(2.0 * x + 1.0) - zz.re, -zz.im);
      den = den - r * dd::Real(x + 1.0);
      r = dd::Complex(dd::Real(static_cast<double>(x))) / den;
    }
    return r;
  };
  auto f_of = [&](const dd::Complex& r0) {
    const dd::Complex den(dd::Real(1.0) - zz.re - r0.re, -zz.im - r0.im);
    return dd::Complex(dd::Real(1.0)) / den;
  };
  int n = 256;
  dd::Complex prev = f_of(ratio0(n));
  for (int it = 0; it < 14; ++it) {
    n *= 2;
    const dd::Complex cur = f_of(ratio0(n));
    const dd::Complex d = cur - prev;
    const double diff = std::abs(d.value());
    if (diff <= 1e-28 * std::abs(cur.value())) return cur;
    prev = cur;
  }
  throw std::runtime_error("resolvent_f: continued fraction did not converge");
}

}  // namespace

LatticeVector psi_binomial_route(cplx z, int xmax) {
  check_xmax(xmax);
  const cplx f_check = resolvent_f(z);
  // near threshold phi_z stays O(1) up to x = 30, so the double value suffices
  const dd::Complex f = std::abs(z) < 1e-3 ? dd::Complex(f_check) : resolvent_f_dd(z);
  if (std::abs(f.value() - f_check) > 1e-12 * std::abs(f_check))
    throw std::runtime_error("psi_binomial_route: resolvent function routes disagree");
  // T psi(k) = e^{-z} E_{k+1}(-z), generated by (k+1) T(k+1) = z T(k) + 1.
  std::vector<dd::Complex> tpsi(static_cast<std::size_t>(xmax) + 1);
  tpsi[0] = f;
  const dd::Complex zz(z);
  for (int k = 0; k < xmax; ++k) {
    dd::Complex next = zz * tpsi[k];
    next.re += dd::Real(1.0);
    tpsi[k + 1] = next / dd::Real(static_cast<double>(k + 1));
  }
  LatticeVector out(static_cast<std::size_t>(xmax) + 1, false);
  std::vector<dd::Real> row(static_cast<std::size_t>(xmax) + 1);
  row[0] = 1.0;
  for (int x = 0; x <= xmax; ++x) {
    if (x > 0) {
      for (int k = x; k >= 1; --k) row[k] = row[k] + row[k - 1];
    }
    dd::Complex acc;
    for (int k = 0; k <= x; ++k) {
      const dd::Real c = (k % 2 == 0) ? row[k] : -row[k];
      acc += tpsi[k] * c;
    }
    out[x] = acc.value();
  }
  return out;
}

namespace {

std::vector<cplx> minimal_solution(cplx z, int xmax, int n_start) {
  std::vector<cplx> ratio(static_cast<std::size_t>(xmax) + 1);
  cplx r = 0.0;
  for (int x = n_start; x >= 1; --x) {
    r = static_cast<double>(x) / ((2.0 * x + 1.0 - z) - (x + 1.0) * r);
    if (x - 1 <= xmax) ratio[x - 1] = r;
  }
  std::vector<cplx> psi(static_cast<std::size_t>(xmax) + 1);
  psi[0] = 1.0 / ((1.0 - z) - ratio[0]);
  for (int x = 1; x <= xmax; ++x) psi[x] = psi[x - 1] * ratio[x - 1];
  return psi;
}

}  // namespace

LatticeVector psi_minimal_route(cplx z, int xmax, int* recursion_length) {
  check_xmax(xmax);
  if (z.imag() == 0.0 && z.real() >= 0.0)
    throw std::domain_error("psi_minimal_route: z must lie off [0, inf)");
  int n = std::max(4 * xmax, 256);
  std::vector<cplx> prev = minimal_solution(z, xmax, n);
  for (int it = 0; it < 16; ++it) {
    n *= 2;
    std::vector<cplx> cur = minimal_solution(z, xmax, n);
    double diff = 0.0;
    for (int x = 0; x <= xmax; ++x) {
      diff = std::max(diff, std::abs(cur[x] - prev[x]) / std::max(std::abs(cur[x]), 1e-300));
    }
    if (diff < 1e-15) {
      if (recursion_length) *recursion_length = n;
      return LatticeVector(std::move(cur), false);
    }
    prev = std::move(cur);
  }
  throw std::runtime_error("psi_minimal_route: backward recursion did not converge");
}

LatticeVector psi_resolvent(const ComplexEnergy& ce, int xmax, PsiDiagnostics* diag) {
  check_xmax(xmax);
  ce.validate();
  if (ce.z == cplx(0.0)) throw std::domain_error("psi_resolvent: threshold z = 0");
  if (ce.on_spectrum) {
    const double lambda = ce.z.real();
    const double pvf = -specfun::expint_Ei_scaled(lambda);
    std::vector<double> phi = phi_real(lambda, xmax);
    std::vector<double> xi = xi_real(lambda, xmax);
    LatticeVector out(static_cast<std::size_t>(xmax) + 1, false);
    for (int x = 0; x <= xmax; ++x) out[x] = pvf * phi[x] + xi[x];
    return out;
  }
  if (ce.z.imag() == 0.0 && ce.z.real() > 0.0)
    throw std::domain_error("psi_resolvent: point on the spectrum needs on_spectrum = true");
  LatticeVector out = psi_binomial_route(ce.z, std::min(xmax, kBinomialRouteMax));
  if (xmax <= kBinomialRouteMax) return out;
  int len = 0;
  LatticeVector tail;
  try {
    tail = psi_minimal_route(ce.z, xmax, &len);
  } catch (const std::runtime_error&) {
    // near threshold both solutions grow slowly and forward recursion is stable
    if (std::abs(ce.z) * xmax > 1e-2) throw;
    out.values.resize(static_cast<std::size_t>(xmax) + 1);
    for (int x = kBinomialRouteMax; x < xmax; ++x)
      out[x + 1] = ((2.0 * x + 1.0 - ce.z) * out[x] - static_cast<double>(x) * out[x - 1]) / (x + 1.0);
    if (diag) {
      diag->overlap_discrepancy = 0.0;
      diag->recursion_length = 0;
    }
    return out;
  }
  double scale = 0.0;
  double disc = 0.0;
  for (int x = 0; x <= kBinomialRouteMax; ++x) scale = std::max(scale, std::abs(out[x]));
  for (int x = kOverlapFrom; x <= kBinomialRouteMax; ++x)
    disc = std::max(disc, std::abs(out[x] - tail[x]));
  if (diag) {
    diag->overlap_discrepancy = disc / scale;
    diag->recursion_length = len;
  }
  out.values.resize(static_cast<std::size_t>(xmax) + 1);
  for (int x = kBinomialRouteMax + 1; x <= xmax; ++x) out[x] = tail[x];
  return out;
}

LatticeVector psi_resolvent(const ComplexEnergy& z, int xmax) { return psi_resolvent(z, xmax, nullptr); }

LatticeVector xi_aux(const ComplexEnergy& ce, int xmax) {
  check_xmax(xmax);
  ce.validate();
  LatticeVector v(static_cast<std::size_t>(xmax) + 1, false);
  xi_fill(ce.z, xmax, v.values.data());
  return v;
}

void xi_real(double lambda, int xmax, double* out) {
  check_xmax(xmax);
  xi_fill(lambda, xmax, out);
}

std::vector<double> xi_real(double lambda, int xmax) {
  std::vector<double> v(static_cast<std::size_t>(std::max(xmax, 0)) + 1);
  xi_real(lambda, xmax, v.data());
  return v;
}

cplx xi_integral(cplx z, int x) {
  if (x < 0) throw std::invalid_argument("xi_integral: x must be nonnegative");
  if (x == 0) return 0.0;
  std::vector<cplx> phz(static_cast<std::size_t>(x) + 1);
  phi_fill(z, x, phz.data());
  const auto& rule = quad::gauss_laguerre(x / 2 + 4);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double eta = rule.nodes[i];
    // D(y) = (phi_eta(y) - phi_z(y)) / (eta - z)
    cplx dm = 0.0;
    cplx d = -1.0;
    for (int y = 1; y < x; ++y) {
      const cplx dn = ((2.0 * y + 1.0 - eta) * d - phz[y] - static_cast<double>(y) * dm) / (y + 1.0);
      dm = d;
      d = dn;
    }
    acc += rule.weights[i] * d;
  }
  return acc;
}

void phi_perturbed_real(double lambda, double q, int xmax, double* out) {
  check_xmax(xmax);
  if (lambda < 0.0) throw std::domain_error("phi_perturbed: lambda must be nonnegative");
  if (q < 0.0) throw std::domain_error("phi_perturbed: q must be nonnegative");
  std::vector<double> xi = xi_real(lambda, xmax);
  phi_fill(lambda, xmax, out);
  for (int x = 0; x <= xmax; ++x) out[x] += q * xi[x];
}

LatticeVector phi_perturbed(double lambda, double q, int xmax) {
  std::vector<double> v(static_cast<std::size_t>(std::max(xmax, 0)) + 1);
  phi_perturbed_real(lambda, q, xmax, v.data());
  return LatticeVector::from_real(v, false);
}

cplx generating_phi_reduced(cplx lambda, cplx s) {
  check_disc(s);
  const cplx shat = s / (1.0 - s);
  return std::exp(-shat * lambda);
}

cplx generating_phi(cplx lambda, cplx s) { return generating_phi_reduced(lambda, s) / (1.0 - s); }

namespace {

// PV of int_0^inf e^{-b eta} / (eta - lambda) d eta, Re b > 0, lambda != 0.
cplx shifted_exp_integral(cplx b, double lambda) {
  if (lambda < 0.0) return specfun::expint_E1_scaled(-b * lambda);
  if (b.imag() == 0.0) return -specfun::expint_Ei_scaled(b.real() * lambda);
  const double sgn = b.imag() > 0.0 ? 1.0 : -1.0;
  return specfun::expint_E1_scaled(-b * lambda) - cplx(0.0, kPi * sgn) * std::exp(-b * lambda);
}

}  // namespace

cplx generating_xi_reduced(double lambda, cplx s) {
  check_disc(s);
  const cplx b = 1.0 / (1.0 - s);
  if (lambda == 0.0) return std::log(1.0 - s);
  const cplx shat = b - 1.0;
  return shifted_exp_integral(b, lambda) - std::exp(-shat * lambda) * shifted_exp_integral(1.0, lambda);
}

cplx generating_xi_reduced_quadrature(double lambda, cplx s) {
  check_disc(s);
  const cplx shat = s / (1.0 - s);
  const cplx e_lam = std::exp(-shat * lambda);
  // e^{-eta} K(eta, lambda, s); the difference quotient is formed with expm1.
  auto integrand = [&](double eta) -> cplx {
    const double d = eta - lambda;
    if (d == 0.0) return std::exp(-eta) * e_lam * (-shat);
    return std::exp(-eta) * e_lam * expm1c(-shat * d) / d;
  };
  // Re(1 + shat) >= 1/2 on the disc, so the integrand is below e^{-45} past this.
  const double upper = lambda + 90.0;
  const double width = std::min(1.0, 4.0 / (std::abs(shat) + 1.0));
  const auto& rule = quad::gauss_legendre(16);
  cplx acc = 0.0;
  // Break at eta = lambda so panels never straddle the removable point.
  std::vector<double> cuts{0.0};
  if (lambda > 0.0) cuts.push_back(lambda);
  cuts.push_back(upper);
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c];
    const double b = cuts[c + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) acc += quad::integrate(rule, a + p * h, a + (p + 1) * h, integrand);
  }
  return acc;
}

ContourResult contour_reconstruct(const std::function<cplx(cplx)>& zeta, int x, double kappa,
                                  double tol, int max_doublings) {
  if (!(kappa > 1.0)) throw std::invalid_argument("contour_reconstruct: kappa must exceed 1");
  if (x < 0) throw std::invalid_argument("contour_reconstruct: x must be nonnegative");
  const double r = 1.0 - 1.0 / (x + kappa);
  auto trapezoid = [&](int m) {
    cplx acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * j / m;
      const cplx s = std::polar(r, th);
      acc += std::polar(std::pow(r, -x), -x * th) * zeta(s);
    }
    return acc / static_cast<double>(m);
  };
  ContourResult res;
  int m = 8 * (x + 2);
  cplx prev = trapezoid(m);
  for (int d = 0; d < max_doublings; ++d) {
    m *= 2;
    const cplx cur = trapezoid(m);
    const double diff = std::abs(cur - prev);
    res.history.push_back(diff);
    res.value = cur;
    res.nodes = m;
    res.err_est = diff;
    if (diff <= tol * std::max(1.0, std::abs(cur))) {
      res.converged = true;
      return res;
    }
    prev = cur;
  }
  return res;
}

long BoundReport::violation_count() const {
  long n = 0;
  for (const auto& c : checks) n += c.violations;
  return n;
}

namespace {

class Tallies {
 public:
  explicit Tallies(BoundReport& rep) : rep_(rep) {}

  // Records lhs < rhs. Equality is accepted only within the relative slack,
  // which covers the points where a bound is attained exactly.
  void check(const std::string& name, int n, int x, double lambda, double theta, double lhs,
             double rhs, double slack = 1e-12) {
    BoundCheckTally& t = tally(name);
    ++t.samples;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
    t.worst_ratio = std::max(t.worst_ratio, ratio);
    const bool ok = lhs < rhs || (slack > 0.0 && lhs <= rhs * (1.0 + slack));
    if (ok) return;
    ++t.violations;
    if (t.violations <= 5) rep_.violations.push_back({name, n, x, lambda, theta, lhs, rhs});
  }

 private:
  BoundReport& rep_;
  BoundCheckTally& tally(const std::string& name) {
    for (auto& t : rep_.checks)
      if (t.check == name) return t;
    rep_.checks.push_back({name, 0, 0, 0.0});
    return rep_.checks.back();
  }
};

double fd_step(double lambda) { return 1e-4 * std::max(1.0, lambda); }

// Minimal vector type so the finite-difference helper can act on all sites at once.
struct Vec {
  std::vector<double> v;
  Vec() = default;
  explicit Vec(std::vector<double> x) : v(std::move(x)) {}
  friend Vec operator+(Vec a, const Vec& b) {
    for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] += b.v[i];
    return a;
  }
  friend Vec operator-(Vec a, const Vec& b) {
    for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend Vec operator*(double s, Vec a) {
    for (double& c : a.v) c *= s;
    return a;
  }
  friend Vec operator/(Vec a, double s) {
    for (double& c : a.v) c /= s;
    return a;
  }
};

// FD results carry relative errors around 1e-7 for second derivatives.
constexpr double kFdSlack[3] = {1e-12, 1e-9, 1e-6};

}  // namespace

BoundReport lemma_bound_suite(const BoundSuiteConfig& cfg, double kappa) {
  if (!(kappa > 1.0)) throw std::invalid_argument("lemma_bound_suite: kappa must exceed 1");
  if (cfg.theta_points < 1) throw std::invalid_argument("lemma_bound_suite: theta_points >= 1");
  BoundReport rep;
  rep.kappa = kappa;
  Tallies tal(rep);
  const double e = std::exp(1.0);
  for (int n : cfg.ns)
    if (n < 0 || n > 2) throw std::invalid_argument("lemma_bound_suite: n must be 0, 1 or 2");
  for (int x : cfg.xs)
    if (x < 0) throw std::invalid_argument("lemma_bound_suite: x must be nonnegative");
  const int xmax_all = cfg.xs.empty() ? 0 : *std::max_element(cfg.xs.begin(), cfg.xs.end());

  for (int x1 : cfg.xs) {
    for (int x2 : cfg.xs) {
      const double a = x1 + kappa;
      const double b = x2 + kappa;
      const double lhs = 1.0 / (1.0 / a + 1.0 / b);
      tal.check("radius_sum", 0, x1, 0.0, 0.0, lhs, 0.25 * a * b, 0.0);
    }
  }

  // Derivatives of e^{-lambda/2} phi_lambda(x) and e^{-lambda/2} xi_lambda(x),
  // all sites from one recursion per stencil point.
  for (double lambda : cfg.lambdas) {
    for (int which = 0; which < 2; ++which) {
      auto weighted = [&](double lam) {
        std::vector<double> v =
            which == 0 ? phi_real(lam, xmax_all) : xi_real(lam, xmax_all);
        const double w = std::exp(-0.5 * lam);
        for (double& c : v) c *= w;
        return v;
      };
      const auto d = fd::richardson(
          [&](double lam) { return Vec{weighted(lam)}; }, lambda, fd_step(lambda));
      for (int x : cfg.xs) {
        const double k = x + kappa;
        const double env = std::exp(-0.25 * lambda / k);
        const auto ux = static_cast<std::size_t>(x);
        const double vals[3] = {std::abs(d.d0.v[ux]), std::abs(d.d1.v[ux]), std::abs(d.d2.v[ux])};
        const double cphi[3] = {3.0 * k, 9.0 * k * k, 27.0 * k * k * k};
        const double cxi[3] = {6.0 * k * k, 15.0 * k * k, 21.0 * k * k * k};
        for (int n : cfg.ns) {
          const double c = which == 0 ? cphi[n] : cxi[n];
          tal.check(which == 0 ? "weighted_phi_derivs" : "weighted_xi_derivs", n, x, lambda, 0.0, vals[n], c * env,
                    kFdSlack[n]);
        }
      }
    }
  }

  for (std::size_t ix = 0; ix < cfg.xs.size(); ++ix) {
    const int x = cfg.xs[ix];
    const double k = x + kappa;
    const double eps = 1.0 / k;
    const double r = 1.0 - eps;
    const double eps_hat = -0.5 + 0.25 * eps;
    tal.check("s_power", 0, x, 0.0, 0.0, std::pow(r, -x), e, 0.0);
    const bool do_xi = cfg.xi_generating_x_stride > 0 &&
                       ix % static_cast<std::size_t>(cfg.xi_generating_x_stride) == 0;
    for (int j = 0; j < cfg.theta_points; ++j) {
      const double th = 2.0 * kPi * j / cfg.theta_points;
      const cplx s = std::polar(r, th);
      const cplx shat = s / (1.0 - s);
      for (double lambda : cfg.lambdas) {
        const double env = std::exp(-eps_hat * lambda);
        tal.check("shat_envelope", 0, x, lambda, th, std::abs(std::exp(-shat * lambda)), env);
        const double h = fd_step(lambda);
        const auto dphi = fd::richardson([&](double l) { return std::exp(-shat * l); }, lambda, h);
        const double pv[3] = {std::abs(dphi.d0), std::abs(dphi.d1), std::abs(dphi.d2)};
        for (int n : cfg.ns)
          tal.check("zeta_phi_derivs", n, x, lambda, th, pv[n], std::pow(k, n) * env, kFdSlack[n]);
        if (!do_xi) continue;
        const auto dxi =
            fd::richardson([&](double l) { return generating_xi_reduced(l, s); }, lambda, h);
        const double xv[3] = {std::abs(dxi.d0), std::abs(dxi.d1), std::abs(dxi.d2)};
        const double cx[3] = {2.0 * k, 4.0 * k, 4.0 * k * k};
        for (int n : cfg.ns) tal.check("zeta_xi_derivs", n, x, lambda, th, xv[n], cx[n] * env, kFdSlack[n]);
      }
    }
  }
  return rep;
}

KappaScan kappa_scan(const BoundSuiteConfig& cfg, const std::vector<double>& kappas) {
  KappaScan scan;
  for (double k : kappas) {
    scan.kappas.push_back(k);
    const bool ok = lemma_bound_suite(cfg, k).ok();
    scan.passed.push_back(ok);
    if (ok && scan.smallest_passing == 0.0) scan.smallest_passing = k;
  }
  return scan;
}

std::string to_string(TableKind k) {
  switch (k) {
    case TableKind::phi:
      return "phi";
    case TableKind::xi:
      return "xi";
    case TableKind::phi_perturbed:
      return "phi_perturbed";
  }
  return "unknown";
}

SpectralTables build_tables(TableKind kind, const std::vector<double>& lambdas, int xmax, double q) {
  check_xmax(xmax);
  SpectralTables t;
  t.kind = kind;
  t.q = q;
  t.lambdas = lambdas;
  t.xmax = xmax;
  const auto stride = static_cast<std::size_t>(xmax) + 1;
  t.values.resize(lambdas.size() * stride);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    double* row = t.values.data() + i * stride;
    switch (kind) {
      case TableKind::phi:
        phi_real(lambdas[i], xmax, row);
        break;
      case TableKind::xi:
        xi_real(lambdas[i], xmax, row);
        break;
      case TableKind::phi_perturbed:
        phi_perturbed_real(lambdas[i], q, xmax, row);
        break;
    }
  }
  return t;
}

void write_csv(std::ostream& os, const SpectralTables& t) {
  io::CsvWriter w(os, "jacobi.spectral_table." + to_string(t.kind), 1, {"lambda", "x", "re", "im"});
  for (std::size_t i = 0; i < t.lambdas.size(); ++i) {
    for (int x = 0; x <= t.xmax; ++x) {
      w.cell(t.lambdas[i]).cell(static_cast<long long>(x)).cell(t.at(i, x)).cell(0.0);
      w.end_row();
    }
  }
}

}  // namespace jacobi
