#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "jacobi/eigenfunctions.hpp"
#include "jacobi/lattice.hpp"

using namespace jacobi;

namespace {

LatticeVector random_vector(std::mt19937_64& rng, std::size_t support, std::size_t length) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  LatticeVector v(length);
  for (std::size_t i = 0; i <= support; ++i) v[i] = cplx(d(rng), d(rng));
  return v;
}

double sup_diff(const LatticeVector& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("apply_L0 stencil examples") {
  CHECK(sup_diff(apply_L0(LatticeVector::unit(0, 5)), {1, -1, 0, 0, 0}) == 0.0);
  CHECK(sup_diff(apply_L0(LatticeVector::unit(2, 6)), {0, -2, 5, -3, 0, 0}) == 0.0);
  const LatticeVector ones = apply_L0(LatticeVector::ones(12));
  for (std::size_t x = 0; x + 1 < ones.size(); ++x) CHECK(ones[x] == cplx(0.0));
  // Dirichlet truncation: the last row misses -(N+1) v(N+1).
  CHECK(ones[11] == cplx(12.0));
}

TEST_CASE("apply_L subtracts q at the origin") {
  CHECK(sup_diff(apply_L(LatticeVector::unit(0, 4), 1.0), {0, -1, 0, 0}) == 0.0);
  const LatticeVector a = apply_L(LatticeVector::unit(1, 5), 3.7);
  const LatticeVector b = apply_L0(LatticeVector::unit(1, 5));
  CHECK(sup_diff(a, b.values) == 0.0);
  const LatticeVector c = apply_L(LatticeVector::ones(6), 2.0);
  CHECK(sup_diff(c, {-2, 0, 0, 0, 0}) == 0.0);
}

TEST_CASE("L0 is symmetric on vectors inside the window") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const LatticeVector u = random_vector(rng, 20, 40);
    const LatticeVector v = random_vector(rng, 20, 40);
    const cplx lhs = inner(u, apply_L0(v));
    const cplx rhs = inner(apply_L0(u), v);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("truncated matrix") {
  OperatorSpec s;
  s.N = 2;
  const Tridiagonal t = truncated_matrix(s);
  CHECK(t.diag == std::vector<double>{1, 3, 5});
  CHECK(t.off == std::vector<double>{-1, -2});
  s.kind = OperatorKind::perturbed;
  s.q = 1.0;
  CHECK(truncated_matrix(s).diag == std::vector<double>{0, 3, 5});
  s.q = -1.0;
  CHECK_THROWS(s.validate());
}

TEST_CASE("truncated matrix action equals apply_L0 on interior rows") {
  OperatorSpec s;
  s.N = 30;
  const Tridiagonal t = truncated_matrix(s);
  std::mt19937_64 rng(3);
  const LatticeVector v = random_vector(rng, 30, 31);
  const LatticeVector lv = apply_L0(v);
  for (std::size_t x = 0; x <= 30; ++x) {
    cplx m = t.diag[x] * v[x];
    if (x > 0) m += t.off[x - 1] * v[x - 1];
    if (x < 30) m += t.off[x] * v[x + 1];
    CHECK(std::abs(m - lv[x]) < 1e-12);
  }
}

TEST_CASE("binomial transform") {
  const LatticeVector one = binomial_transform(LatticeVector::unit(0, 1), 8);
  for (std::size_t k = 0; k <= 8; ++k) CHECK(one[k] == cplx(1.0));

  const std::vector<std::int64_t> v{1, 2, -3, 5, 0, 0, 0};
  CHECK(binomial_transform_exact(binomial_transform_exact(v, 6), 6) == v);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> d(-1000000, 1000000);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::int64_t> w(13);
    for (auto& e : w) e = d(rng);
    CHECK(binomial_transform_exact(binomial_transform_exact(w, 12), 12) == w);
  }

  for (std::size_t support : {8u, 12u, 16u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const LatticeVector f = random_vector(rng, support, support + 1);
      const LatticeVector tf = binomial_transform(f, support);
      const LatticeVector tt = binomial_transform(LatticeVector(tf.values, true), support);
      CHECK(sup_diff(tt, f.values) < 1e-9);
    }
  }

  // error relative to the size of the intermediate transform
  for (int trial = 0; trial < 20; ++trial) {
    const LatticeVector f = random_vector(rng, 20, 21);
    const LatticeVector tf = binomial_transform(f, 20);
    const LatticeVector tt = binomial_transform(LatticeVector(tf.values, true), 20);
    double scale = 0.0;
    for (const auto& e : tf.values) scale = std::max(scale, std::abs(e));
    CHECK(sup_diff(tt, f.values) < 1e-9 * scale);
  }

  LatticeVector inf(5, false);
  CHECK_THROWS_AS(binomial_transform(inf, 4), std::invalid_argument);
}

// Absolute 1e-9 at support 20 is below double rounding of the intermediate
// transform; kept as a known failure.
TEST_CASE("binomial transform float involution, support 20, absolute 1e-9" * doctest::may_fail()) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const LatticeVector f = random_vector(rng, 20, 21);
    const LatticeVector tf = binomial_transform(f, 20);
    const LatticeVector tt = binomial_transform(LatticeVector(tf.values, true), 20);
    CHECK(sup_diff(tt, f.values) < 1e-9);
  }
}

TEST_CASE("binomial transform of phi is lambda^k / k!") {
  for (double lambda : {0.5, 1.0, 5.0}) {
    const LatticeVector phi(phi_recursion(lambda, 40).values, true);
    const LatticeVector t = binomial_transform(phi, 15);
    double fact = 1.0;
    for (int k = 0; k <= 15; ++k) {
      if (k > 0) fact *= k;
      CHECK(std::abs(t[static_cast<std::size_t>(k)] - std::pow(lambda, k) / fact) < 1e-10);
    }
  }
}

TEST_CASE("T L0 v(k) = (k+1) T v(k+1)") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const LatticeVector v = random_vector(rng, 8, 20);
    const LatticeVector tl = binomial_transform(apply_L0(v), 15);
    const LatticeVector tv = binomial_transform(v, 16);
    for (std::size_t k = 0; k <= 15; ++k)
      CHECK(std::abs(tl[k] - static_cast<double>(k + 1) * tv[k + 1]) < 1e-9);
  }
}

TEST_CASE("weights") {
  WeightSpec w{4.0, 0.0};
  CHECK(sup_diff(apply_weight(LatticeVector::ones(4), w), {1, 1, 1, 1}) == 0.0);
  w.tau = -3.0;
  CHECK(apply_weight(LatticeVector::unit(0, 3), w)[0] == cplx(1.0 / 64.0));
  std::mt19937_64 rng(1);
  const LatticeVector v = random_vector(rng, 9, 10);
  WeightSpec inv{4.0, 3.0};
  CHECK(sup_diff(apply_weight(apply_weight(v, w), inv), v.values) < 1e-14);
  CHECK_THROWS(apply_weight(v, WeightSpec{0.5, -3.0}));
}

TEST_CASE("norms") {
  const Norms a = norms(LatticeVector::unit(0, 3));
  CHECK(a.l1 == 1.0);
  CHECK(a.l2 == 1.0);
  CHECK(a.sup == 1.0);
  LatticeVector two(5);
  two[3] = 2.0;
  const Norms b = norms(two);
  CHECK(b.l1 == 2.0);
  CHECK(b.l2 == 2.0);
  CHECK(b.sup == 2.0);
  const Norms c = norms(LatticeVector::ones(2));
  CHECK(c.l1 == 2.0);
  CHECK(c.l2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(c.sup == 1.0);
}

TEST_CASE("semi-analytic bound") {
  const SemiAnalyticReport r = semi_analytic_bound_report(LatticeVector::unit(0, 1), 2);
  CHECK(r.entries[0].norm == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.entries[0].bound == doctest::Approx(4.0));
  // L0^2 chi_0 = (2, -4, 2) by composing the stencil twice.
  CHECK(r.entries[1].norm == doctest::Approx(std::sqrt(24.0)));
  CHECK(r.entries[1].bound == doctest::Approx(32.0));
  CHECK(r.ok());

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const LatticeVector v = random_vector(rng, 3, 4);
    const SemiAnalyticReport s = semi_analytic_bound_report(v, 8);
    CHECK(s.x_v == 3);
    CHECK(s.ok());
    const double a_v = 4.0 * (s.x_v + 1);
    const Norms n1 = norms(apply_L0([&] {
      LatticeVector w(10);
      for (std::size_t i = 0; i < 4; ++i) w[i] = v[i];
      return w;
    }()));
    CHECK(n1.l2 <= a_v * s.l1);
    CHECK(n1.l1 <= a_v * s.l1);
  }
  CHECK_THROWS_AS(semi_analytic_bound_report(LatticeVector(4), 3), std::invalid_argument);
}

TEST_CASE("lattice vector JSON round trip") {
  std::mt19937_64 rng(2);
  const LatticeVector v = random_vector(rng, 6, 8);
  const LatticeVector w = lattice_from_json(nlohmann::json::parse(to_json(v).dump()));
  CHECK(w.values == v.values);
  CHECK(v.support_hint() == 6);
}
