#include "jacobi/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace jacobi::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

// Radius of the disc where the digamma series is used.
constexpr double kSeriesRadius = 1.5;
// Width of the parabolic region around the negative axis handled by the
// standard power series.
constexpr double kNegativeAxisBand = 3.0;
// Beyond this modulus E_1 switches from its power series to the asymptotic one.
constexpr double kAsymptoticRadius = 40.0;

// Sum_{k>=0} w^k/k! digamma(k+1)
template <class T>
T digamma_weighted_exp(T w) {
  T term = 1.0;
  double psi = -euler_gamma;
  T sum = term * psi;
  for (int k = 1; k < 500; ++k) {
    term *= w / static_cast<double>(k);
    psi += 1.0 / k;
    const T add = term * psi;
    sum += add;
    if (std::abs(add) < 0.25 * kEps * std::abs(sum) && std::abs(term) < kEps) break;
  }
  return sum;
}

// Sum_{k=1}^n (-w)^{k-1} (n-k)!/n!
template <class T>
T finite_part(int n, T w) {
  if (n == 0) return T(0.0);
  T c = 1.0 / n;
  T sum = c;
  for (int k = 1; k < n; ++k) {
    c *= -w / static_cast<double>(n - k);
    sum += c;
  }
  return sum;
}

// (-w)^n / n!
template <class T>
T power_over_factorial(int n, T w) {
  T r = 1.0;
  for (int k = 1; k <= n; ++k) r *= -w / static_cast<double>(k);
  return r;
}

cplx series_small(int n, cplx w) {
  const cplx p = power_over_factorial(n, w);
  const cplx ew = std::exp(-w);
  return -p * std::log(w) + ew * finite_part(n, w) + ew * p * digamma_weighted_exp(w);
}

// Principal log off the cut; on the cut (real argument) its real part, which
// is what the principal value needs.
double cut_log(double w) { return std::log(std::abs(w)); }
cplx cut_log(cplx w) { return std::log(w); }

// E_{n+1} by the standard power series. Well conditioned when -w is close to
// the positive axis.
template <class T>
T standard_series(int n, T w) {
  const T mw = -w;
  T pw = 1.0;
  T sum = 0.0;
  T centre = 0.0;
  for (int k = 0; k < 2000; ++k) {
    if (k > 0) pw *= mw / static_cast<double>(k);
    if (k == n) {
      centre = pw * (digamma_posint(n + 1) - cut_log(w));
      continue;
    }
    const T add = pw / static_cast<double>(k - n);
    sum += add;
    if (k > n && k > std::abs(w) && std::abs(add) < 0.25 * kEps * std::abs(sum)) break;
  }
  return centre - sum;
}

// Large-|w| expansion of e^w E_{n+1}(w), usable when |w| is well beyond n.
template <class T>
T asymptotic_scaled(int n, T w) {
  T term = 1.0;
  T sum = 1.0;
  for (int k = 1; k < 400; ++k) {
    const T next = term * (-static_cast<double>(n + k) / w);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 0.25 * kEps * std::abs(sum)) break;
  }
  return sum / w;
}

template <class T>
T asymptotic(int n, T w) {
  return std::exp(-w) * asymptotic_scaled(n, w);
}

bool use_asymptotic(int n, double r) { return r > kAsymptoticRadius + 2.0 * n; }

// Modified Lentz evaluation of the continued fraction for e^w E_m(w), m >= 1.
cplx continued_fraction_scaled(int m, cplx w) {
  constexpr double tiny = 1e-300;
  cplx b = w + static_cast<double>(m);
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * (m - 1 + i);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("generalized_expint: continued fraction did not converge");
}

cplx continued_fraction(int m, cplx w) { return std::exp(-w) * continued_fraction_scaled(m, w); }

bool near_negative_axis(cplx w) { return std::abs(w) + w.real() <= kNegativeAxisBand; }

cplx off_cut(int n, cplx w) {
  if (std::abs(w) <= kSeriesRadius) return series_small(n, w);
  if (near_negative_axis(w))
    return use_asymptotic(n, std::abs(w)) ? asymptotic(n, w) : standard_series(n, w);
  return continued_fraction(n + 1, w);
}

double pv_series_small(int n, double lambda) {
  const double p = power_over_factorial(n, -lambda);
  const double el = std::exp(lambda);
  return -p * std::log(lambda) + el * finite_part(n, -lambda) +
         el * p * digamma_weighted_exp(-lambda);
}

void check_on_cut(cplx z) {
  if (z.imag() != 0.0 || z.real() > 0.0)
    throw std::domain_error("generalized_expint: boundary side given for a point off the cut");
}

}  // namespace

cplx BoundaryValue::from(Side side) const {
  switch (side) {
    case Side::above:
      return {pv, -kPi * delta};
    case Side::below:
      return {pv, kPi * delta};
    case Side::none:
      break;
  }
  return {pv, 0.0};
}

double digamma_posint(int k) {
  if (k < 1) throw std::domain_error("digamma_posint: k must be positive");
  double h = 0.0;
  for (int j = k - 1; j >= 1; --j) h += 1.0 / j;
  return h - euler_gamma;
}

double delta_part_E(int n, double lambda) {
  if (n < 0) throw std::domain_error("delta_part_E: n must be nonnegative");
  if (!(lambda > 0.0)) throw std::domain_error("delta_part_E: lambda must be positive");
  return power_over_factorial(n, -lambda);
}

double expint_Ei(double x) {
  if (!(x > 0.0)) throw std::domain_error("expint_Ei: x must be positive");
  if (x <= kAsymptoticRadius) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 1000; ++k) {
      term *= x / k;
      const double add = term / k;
      sum += add;
      if (add < 0.25 * kEps * sum) break;
    }
    return euler_gamma + std::log(x) + sum;
  }
  return std::exp(x) * expint_Ei_scaled(x);
}

double expint_Ei_scaled(double x) {
  if (!(x > 0.0)) throw std::domain_error("expint_Ei: x must be positive");
  if (x <= kAsymptoticRadius) return std::exp(-x) * expint_Ei(x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 0.25 * kEps * sum) break;
  }
  return sum / x;
}

void expint_boundary_pv_table(int nmax, double lambda, double* out) {
  if (nmax < 0) throw std::domain_error("expint_boundary: n must be nonnegative");
  if (!(lambda > 0.0)) throw std::domain_error("expint_boundary: lambda must be positive");
  if (lambda <= kSeriesRadius) {
    for (int n = 0; n <= nmax; ++n) out[n] = pv_series_small(n, lambda);
    return;
  }
  for (int n = 0; n <= nmax; ++n) {
    if (n == 0) {
      out[n] = -expint_Ei(lambda);
    } else if (use_asymptotic(n, lambda)) {
      out[n] = asymptotic(n, -lambda);
    } else {
      out[n] = standard_series(n, -lambda);
    }
  }
}

BoundaryValue expint_boundary(int n, double lambda) {
  std::vector<double> tab(static_cast<std::size_t>(std::max(n, 0)) + 1);
  expint_boundary_pv_table(n, lambda, tab.data());
  return {tab[n], delta_part_E(n, lambda)};
}

void generalized_expint_table(int nmax, cplx z, cplx* out) {
  if (nmax < 0) throw std::domain_error("generalized_expint: n must be nonnegative");
  if (z.imag() == 0.0 && z.real() <= 0.0)
    throw std::domain_error("generalized_expint: point on the branch cut");
  if (std::abs(z) <= kSeriesRadius) {
    for (int n = 0; n <= nmax; ++n) out[n] = series_small(n, z);
  } else if (near_negative_axis(z)) {
    for (int n = 0; n <= nmax; ++n) out[n] = off_cut(n, z);
  } else {
    for (int n = 0; n <= nmax; ++n) out[n] = continued_fraction(n + 1, z);
  }
}

cplx generalized_expint(int n, cplx z, Side side) {
  if (n < 0) throw std::domain_error("generalized_expint: n must be nonnegative");
  if (side != Side::none) {
    check_on_cut(z);
    if (z.real() == 0.0) {
      if (n == 0) throw std::domain_error("generalized_expint: E_1 diverges at 0");
      return 1.0 / n;
    }
    return expint_boundary(n, -z.real()).from(side);
  }
  if (z == cplx(0.0)) {
    if (n == 0) throw std::domain_error("generalized_expint: E_1 diverges at 0");
    return 1.0 / n;
  }
  if (z.imag() == 0.0 && z.real() < 0.0)
    throw std::domain_error("generalized_expint: point on the branch cut needs a side");
  return off_cut(n, z);
}

cplx expint_E1_scaled(cplx w) {
  if (w.imag() == 0.0 && w.real() <= 0.0)
    throw std::domain_error("expint_E1_scaled: point on the branch cut");
  if (std::abs(w) > kSeriesRadius) {
    if (!near_negative_axis(w)) return continued_fraction_scaled(1, w);
    if (use_asymptotic(0, std::abs(w))) return asymptotic_scaled(0, w);
  }
  return std::exp(w) * off_cut(0, w);
}

cplx generalized_expint(int n, const CutPlanePoint& p) { return generalized_expint(n, p.z, p.side); }

}  // namespace jacobi::specfun
