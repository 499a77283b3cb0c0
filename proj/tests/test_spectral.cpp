#include <doctest.h>

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/tools/roots.hpp>

#include "jacobi/eigenfunctions.hpp"
#include "jacobi/spectral.hpp"

using namespace jacobi;
using namespace std::complex_literals;

namespace {

// Negative pivots of the LDL^T factorisation of T - sigma: eigenvalues below sigma.
int count_below(const Tridiagonal& t, double sigma) {
  int n = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double off = i == 0 ? 0.0 : t.off[i - 1];
    d = t.diag[i] - sigma - (i == 0 ? 0.0 : off * off / d);
    if (d == 0.0) d = 1e-300;
    if (d < 0.0) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("free weight") {
  CHECK(weight_free(0.0) == 1.0);
  CHECK(weight_free(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("resolvent function f") {
  CHECK(std::abs(resolvent_function_f(-1.0) - std::exp(1.0) * boost::math::expint(1, 1.0)) < 1e-14);
  CHECK_THROWS_AS(resolvent_function_f(0.0), std::domain_error);
  const auto b = resolvent_function_f_boundary(1.0);
  CHECK(b.pv == doctest::Approx(-std::exp(-1.0) * boost::math::expint(1.0)).epsilon(1e-14));
  CHECK(b.delta == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  // Approach from above: f = int e^-eta / (eta - z) gives PV + i pi w.
  double prev = 1.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const cplx f = resolvent_function_f(cplx(2.0, eps));
    const auto bv = resolvent_function_f_boundary(2.0);
    const double err = std::abs(f - cplx(bv.pv, M_PI * bv.delta));
    CHECK(err < 10.0 * eps);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("f^L = f / (1 - q f) off the cut") {
  for (cplx z : {cplx(-1.0), 1.0 + 1i, -3.0 - 2i, 10.0 + 0.5i})
    for (double q : {0.5, 1.0, 3.0}) {
      const cplx f = resolvent_function_f(z);
      CHECK(std::abs(resolvent_function_fL(z, q) - f / (1.0 - q * f)) < 1e-13 * (1.0 + std::abs(f)));
    }
}

TEST_CASE("g factor") {
  const GFactor g0 = g_factor(0.0, 1.0);
  CHECK(g0.threshold);
  CHECK(g0.value == 0.0);
  for (double l : {1e-6, 0.1, 1.0, 5.0, 40.0})
    for (double q : {0.1, 1.0, 4.0}) {
      const GFactor g = g_factor(l, q);
      const double pv = -std::exp(-l) * boost::math::expint(l);
      const double ref = 1.0 / ((1.0 - q * pv) * (1.0 - q * pv) + std::pow(q * M_PI * std::exp(-l), 2));
      CHECK(g.value == doctest::Approx(ref).epsilon(1e-12));
      CHECK(g.value > 0.0);
      CHECK(std::abs(g.w_L - g.value * std::exp(-l)) <= 1e-15 * g.w_L);
      // w^L is the delta part of f^L: Im f^L(lambda + i0) / pi.
      const cplx f(pv, M_PI * std::exp(-l));
      CHECK((f / (1.0 - q * f)).imag() / M_PI == doctest::Approx(g.w_L).epsilon(1e-12));
    }
  CHECK(std::abs(g_factor(200.0, 1.0).value - 1.0) < 1e-2);
  CHECK(std::abs(g_factor(1.0, 1e-10).value - 1.0) < 1e-9);
  CHECK(g_factor(1.0, 0.0).value == 1.0);
  // g log^2 lambda creeps towards 1/q^2.
  double prev = 10.0;
  for (double l : {1e-4, 1e-8, 1e-16, 1e-32, 1e-64}) {
    const double e = std::abs(g_factor(l, 1.0).value * std::pow(std::log(l), 2) - 1.0);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 0.03);
}

TEST_CASE("bound state against an independent root finder") {
  for (double q : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const BoundState bs = bound_state_solve(q);
    auto h = [q](double a) { return q * std::exp(a) * boost::math::expint(1, a) - 1.0; };
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 200;
    const auto r = boost::math::tools::bisect(h, 1e-14, 60.0, tol, it);
    const double a = 0.5 * (r.first + r.second);
    CHECK(bs.lambda0 < 0.0);
    CHECK(std::abs(bs.a - a) < 1e-12 * std::max(1.0, a));
    CHECK(bs.secular_residual < 1e-12);
    CHECK(bs.psi_norm_sq == doctest::Approx(1.0 / bs.a - 1.0 / q).epsilon(1e-10));
    // Exactly one eigenvalue of the truncated matrix below zero, once N is
    // long enough to hold the bound state (it decays like e^{-2 sqrt(a x)}).
    OperatorSpec s;
    s.kind = OperatorKind::perturbed;
    s.q = q;
    s.N = std::max(2000, static_cast<int>(100.0 / bs.a));
    const Tridiagonal t = truncated_matrix(s);
    CHECK(count_below(t, 0.0) == 1);
    CHECK(count_below(t, bs.lambda0 - 1e-6) == 0);
  }
  const BoundState b1 = bound_state_solve(1.0);
  CHECK(b1.a > 0.4);
  CHECK(b1.a < 0.5);
  CHECK(bound_state_truncated_residual(b1, 500) < 1e-8);
  double prev = 0.0;
  for (double q : {0.2, 0.5, 1.0, 2.0, 5.0}) {
    const double a = bound_state_solve(q).a;
    CHECK(a > prev);
    prev = a;
  }
  CHECK_THROWS(bound_state_solve(0.0));
}

TEST_CASE("bound state vector is the normalised resolvent vector") {
  const BoundState bs = bound_state_solve(1.0, 60);
  const LatticeVector v = apply_L(bs.vector, 1.0);
  for (std::size_t x = 0; x < 60; ++x) CHECK(std::abs(v[x] - bs.lambda0 * bs.vector[x]) < 1e-12);
  CHECK(bs.vector[0].real() > 0.0);
}

TEST_CASE("PV psi^L") {
  const double l = 1.0;
  const double q = 1.0;
  const LatticeVector p = pv_psi_perturbed(l, q, 20);
  const GFactor g = g_factor(l, q);
  const double pw = M_PI * g.delta_f;
  CHECK(std::abs(p[0].real() - g.value * (g.pv_f - q * g.pv_f * g.pv_f - q * pw * pw)) < 1e-14);
  // Real part of f^L(lambda + i eps) tends to PV f^L.
  const cplx fl = resolvent_function_fL(cplx(l, 1e-7), q);
  CHECK(std::abs(fl.real() - p[0].real()) < 1e-5);
  // q -> 0 recovers PV f phi + xi.
  const LatticeVector p0 = pv_psi_perturbed(2.0, 1e-14, 10);
  const LatticeVector psi = psi_resolvent(ComplexEnergy::spectrum(2.0), 10);
  for (std::size_t x = 0; x <= 10; ++x) CHECK(std::abs(p0[x] - psi[x]) < 1e-10);
  CHECK_THROWS(pv_psi_perturbed(0.0, 1.0, 5));
}

TEST_CASE("spectral kernel") {
  CHECK(spectral_kernel(OperatorKind::free, 0.0, 0.0, 3, 7) == doctest::Approx(1.0));
  CHECK(spectral_kernel(OperatorKind::perturbed, 1.0, 1e-300, 0, 0) < 1e-5);
  CHECK(spectral_kernel(OperatorKind::perturbed, 1.0, 0.0, 2, 2) == 0.0);
  for (double l : {0.01, 1.0, 12.0})
    CHECK(spectral_kernel(OperatorKind::perturbed, 1.0, l, 2, 9) == doctest::Approx(spectral_kernel(OperatorKind::perturbed, 1.0, l, 9, 2)).epsilon(1e-14));
}

TEST_CASE("completeness") {
  CHECK(completeness_check(OperatorKind::free, 0.0, 0, 0) < 1e-9);
  for (int x = 0; x <= 20; x += 4) CHECK(completeness_check(OperatorKind::free, 0.0, x, 20 - x) < 1e-9);
  CHECK(completeness_check(OperatorKind::perturbed, 1.0, 0, 0) < 1e-6);
  CHECK(completeness_check(OperatorKind::perturbed, 1.0, 0, 5) < 1e-6);
  CHECK(completeness_check(OperatorKind::perturbed, 0.5, 7, 7) < 1e-6);
}

TEST_CASE("spectral mesh covers [floor, cutoff] without gaps") {
  for (auto kind : {OperatorKind::free, OperatorKind::perturbed}) {
    const auto panels = spectral_mesh(kind, 20, 150.0, MeshConfig{});
    REQUIRE(!panels.empty());
    CHECK(panels.back().b == doctest::Approx(150.0));
    CHECK(panels.front().a == (kind == OperatorKind::free ? 0.0 : doctest::Approx(1e-12)));
    for (std::size_t i = 1; i < panels.size(); ++i) CHECK(panels[i].a == panels[i - 1].b);
  }
  MeshConfig bad;
  bad.sigma = 1.5;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("g table CSV") {
  std::ostringstream os;
  write_g_table(os, 0.0, {0.5, 1.0});
  std::istringstream in(os.str());
  std::string schema, header, row;
  std::getline(in, schema);
  std::getline(in, header);
  std::getline(in, row);
  CHECK(schema == "# schema: jacobi.g_table v1");
  CHECK(header == "lambda,g,w_L,g_log2_lambda");
  const double w = std::stod(row.substr(row.find(',', row.find(',') + 1) + 1));
  CHECK(w == std::exp(-0.5));
}
