#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/laguerre.hpp>

#include "jacobi/eigenfunctions.hpp"
#include "jacobi/quadrature.hpp"

using namespace jacobi;
using namespace std::complex_literals;

TEST_CASE("phi recursion examples and Laguerre oracle") {
  const LatticeVector p0 = phi_recursion(0.0, 10);
  for (std::size_t x = 0; x <= 10; ++x) CHECK(p0[x] == cplx(1.0));
  CHECK(std::abs(phi_recursion(0.37, 1)[1] - (1.0 - 0.37)) < 1e-15);
  CHECK(std::abs(phi_recursion(2.0, 2)[2] + 1.0) < 1e-13);
  CHECK(std::abs(phi_series(2.0, 2) + 1.0) < 1e-13);
  for (double l : {0.0, 0.3, 1.0, 7.5, 20.0}) {
    const auto p = phi_real(l, 100);
    for (unsigned x = 0; x <= 100; x += 7) {
      const double ref = boost::math::laguerre(x, l);
      CHECK(std::abs(p[x] - ref) < 1e-11 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("phi recursion and power series agree") {
  for (cplx l : {cplx(0.0), cplx(1.0), cplx(5.0), cplx(20.0), cplx(3.0, 4.0), cplx(-2.0, 1.0)}) {
    const LatticeVector p = phi_recursion(l, 40);
    for (int x = 0; x <= 40; ++x) {
      const cplx s = phi_series(l, x);
      CHECK(std::abs(p[static_cast<std::size_t>(x)] - s) < 1e-11 * std::max(1.0, std::abs(s)));
    }
  }
}

TEST_CASE("phi solves the eigenvalue equation on interior rows") {
  for (double l : {0.0, 0.5, 3.0, 20.0}) {
    const LatticeVector p = phi_recursion(l, 101);
    const LatticeVector r = apply_L0(p);
    double scale = 0.0;
    for (std::size_t x = 0; x <= 100; ++x) scale = std::max(scale, std::abs(p[x]));
    for (std::size_t x = 0; x <= 100; ++x) CHECK(std::abs(r[x] - l * p[x]) < 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("quadrature orthogonality of phi") {
  const quad::Rule& r = quad::gauss_laguerre(24);
  for (int a = 0; a <= 20; ++a)
    for (int b = 0; b <= 20; b += 3) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const auto p = phi_real(r.nodes[i], 20);
        s += r.weights[i] * p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(b)];
      }
      CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("resolvent vector") {
  CHECK_THROWS_AS(psi_resolvent(ComplexEnergy::off(0.0), 5), std::domain_error);
  for (cplx z : {cplx(-1.0), cplx(-2.0), 1.0 + 1i, 3.0 - 2i, -0.01 + 0i, 40.0 + 1i}) {
    const LatticeVector psi = psi_resolvent(ComplexEnergy::off(z), 61);
    const LatticeVector lp = apply_L0(psi);
    double scale = 0.0;
    for (std::size_t x = 0; x <= 60; ++x) scale = std::max(scale, std::abs(psi[x]));
    for (std::size_t x = 0; x <= 60; ++x)
      CHECK(std::abs(lp[x] - z * psi[x] - (x == 0 ? 1.0 : 0.0)) < 1e-9 * std::max(1.0, scale));
  }
  // f_{-1} = e E_1(1)
  const cplx f = psi_resolvent(ComplexEnergy::off(-1.0), 3)[0];
  CHECK(std::abs(f - std::exp(1.0) * boost::math::expint(1, 1.0)) < 1e-14);
  CHECK(std::abs(resolvent_f(-1.0) - f) < 1e-15);
}

TEST_CASE("resolvent vector matches its spectral integral") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const LatticeVector psi = psi_resolvent(ComplexEnergy::off(-2.0), 10);
  for (int x = 0; x <= 10; ++x) {
    const double ref = ts.integrate(
        [x](double l) { return std::exp(-l) / (l + 2.0) * boost::math::laguerre(static_cast<unsigned>(x), l); }, 0.0,
        200.0);
    CHECK(std::abs(psi[static_cast<std::size_t>(x)].real() - ref) < 1e-8);
  }
}

TEST_CASE("binomial and minimal routes overlap") {
  PsiDiagnostics d;
  psi_resolvent(ComplexEnergy::off(-1.5 + 0.5i), 60, &d);
  CHECK(d.overlap_discrepancy < 1e-9);
  const LatticeVector a = psi_binomial_route(-0.7, 30);
  const LatticeVector b = psi_minimal_route(-0.7, 30);
  for (std::size_t x = 20; x <= 30; ++x) CHECK(std::abs(a[x] - b[x]) < 1e-9);
}

TEST_CASE("xi: difference form, integral form, threshold") {
  for (cplx z : {cplx(-1.0), 2.0 + 1i, cplx(0.0), cplx(3.5)}) {
    const LatticeVector xi = xi_aux(ComplexEnergy{z, z.imag() == 0.0 && z.real() >= 0.0}, 15);
    CHECK(xi[0] == cplx(0.0));
    for (int x = 0; x <= 15; ++x)
      CHECK(std::abs(xi[static_cast<std::size_t>(x)] - xi_integral(z, x)) < 1e-8 * std::max(1.0, std::abs(xi[static_cast<std::size_t>(x)])));
  }
  // xi at z = -1 from psi - psi(0) phi
  const LatticeVector psi = psi_resolvent(ComplexEnergy::off(-1.0), 15);
  const LatticeVector phi = phi_recursion(-1.0, 15);
  const LatticeVector xi = xi_aux(ComplexEnergy::off(-1.0), 15);
  for (std::size_t x = 0; x <= 15; ++x) CHECK(std::abs(xi[x] - (psi[x] - psi[0] * phi[x])) < 1e-8);
  // lambda = 0 against an independent quadrature of e^-eta (phi_eta(x) - 1) / eta
  boost::math::quadrature::tanh_sinh<double> ts;
  const auto xi0 = xi_real(0.0, 12);
  for (unsigned x = 1; x <= 12; ++x) {
    const double ref = ts.integrate(
        [x](double e) { return e == 0.0 ? -double(x) : std::exp(-e) * (boost::math::laguerre(x, e) - 1.0) / e; }, 0.0,
        200.0);
    CHECK(std::abs(xi0[x] - ref) < 1e-8);
  }
}

TEST_CASE("on the spectrum psi is PV f phi + xi") {
  for (double l : {0.2, 1.0, 6.0}) {
    const LatticeVector psi = psi_resolvent(ComplexEnergy::spectrum(l), 20);
    const LatticeVector phi = phi_recursion(l, 20);
    const LatticeVector xi = xi_aux(ComplexEnergy::spectrum(l), 20);
    const double pv = -std::exp(-l) * boost::math::expint(l);
    for (std::size_t x = 0; x <= 20; ++x) CHECK(std::abs(psi[x] - (pv * phi[x] + xi[x])) < 1e-10 * (1.0 + std::abs(psi[x])));
  }
}

TEST_CASE("perturbed eigenfunctions") {
  for (double l : {0.1, 1.0, 10.0}) {
    const LatticeVector u = phi_perturbed(l, 1.0, 81);
    CHECK(std::abs(u[0] - 1.0) < 1e-15);
    const LatticeVector lu = apply_L(u, 1.0);
    double scale = 0.0;
    for (std::size_t x = 0; x <= 80; ++x) scale = std::max(scale, std::abs(u[x]));
    for (std::size_t x = 0; x <= 80; ++x) CHECK(std::abs(lu[x] - l * u[x]) < 1e-8 * std::max(1.0, scale));
  }
  const LatticeVector small = phi_perturbed(2.0, 1e-12, 20);
  const LatticeVector phi = phi_recursion(2.0, 20);
  for (std::size_t x = 0; x <= 20; ++x) CHECK(std::abs(small[x] - phi[x]) < 1e-9);
}

TEST_CASE("generating functions") {
  CHECK(std::abs(generating_phi(1.3, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(generating_phi(0.0, 0.4 + 0.2i) - 1.0 / (1.0 - (0.4 + 0.2i))) < 1e-15);
  CHECK_THROWS_AS(generating_phi(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(generating_phi(1.0, 0.6 + 0.8i), std::domain_error);
  // Partial sums at lambda = 1, s = 0.5 converge geometrically.
  const LatticeVector p = phi_recursion(1.0, 80);
  const cplx target = generating_phi(1.0, 0.5);
  double prev = 1.0;
  for (int X : {10, 20, 40, 80}) {
    cplx s = 0.0;
    for (int x = 0; x <= X; ++x) s += p[static_cast<std::size_t>(x)] * std::pow(0.5, x);
    const double err = std::abs(s - target);
    CHECK(err < 10.0 * std::pow(0.5, X) + 1e-15);
    CHECK(err <= prev + 1e-15);
    prev = err;
  }
  for (double l : {0.5, 1.0, 2.0})
    for (cplx s : {0.3 + 0.1i, -0.5 + 0.5i, 0.8 - 0.1i})
      CHECK(std::abs(generating_xi_reduced(l, s) - generating_xi_reduced_quadrature(l, s)) < 1e-9);
}

TEST_CASE("contour reconstruction") {
  for (double l : {0.0, 2.0, 9.0}) {
    const auto r = contour_reconstruct([l](cplx s) { return generating_phi(l, s); }, 0, 4.0);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0) < 1e-10);
  }
  const auto r10 = contour_reconstruct([](cplx s) { return generating_phi(1.0, s); }, 10, 4.0);
  CHECK(std::abs(r10.value - phi_recursion(1.0, 10)[10]) < 1e-9);
  // Node doubling errors shrink geometrically.
  for (std::size_t i = 2; i < r10.history.size(); ++i)
    if (r10.history[i - 1] > 1e-13) CHECK(r10.history[i] < 0.5 * r10.history[i - 1]);
  for (double l : {0.5, 1.0, 2.0}) {
    const auto xi = xi_real(l, 10);
    for (int x = 0; x <= 10; ++x) {
      const auto r = contour_reconstruct([l](cplx s) { return generating_xi_reduced_quadrature(l, s) / (1.0 - s); }, x, 4.0, 1e-9);
      CHECK(std::abs(r.value - xi[static_cast<std::size_t>(x)]) < 1e-7);
    }
  }
}

TEST_CASE("bound suite on a reduced grid") {
  BoundSuiteConfig cfg;
  for (double l = 0.0; l <= 50.0; l += 5.0) cfg.lambdas.push_back(l);
  for (int x = 0; x <= 40; x += 8) cfg.xs.push_back(x);
  cfg.theta_points = 90;
  const BoundReport r = lemma_bound_suite(cfg, 4.0);
  CHECK(r.ok());
  CHECK(r.checks.size() >= 5);
  for (const auto& c : r.checks) {
    CHECK(c.samples > 0);
    CHECK(c.worst_ratio < 1.0 + 1e-9);
  }
}

TEST_CASE("s^-x stays below e for x <= 200") {
  for (int x = 0; x <= 200; ++x) CHECK(std::pow(1.0 - 1.0 / (x + 4.0), -x) < std::exp(1.0));
}

TEST_CASE("kappa scan finds the sum-of-radii threshold") {
  BoundSuiteConfig cfg;
  cfg.lambdas = {0.0, 1.0, 10.0};
  cfg.xs = {0, 1, 5};
  cfg.theta_points = 36;
  const KappaScan s = kappa_scan(cfg, {1.5, 2.0, 3.0, 4.0});
  CHECK(s.passed == std::vector<bool>{false, false, true, true});
  CHECK(s.smallest_passing == 3.0);
}
