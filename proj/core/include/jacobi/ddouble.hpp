#pragma once

// Double-double ("compensated") arithmetic.
//
// A value is the unevaluated sum hi + lo with |lo| <= ulp(hi)/2, giving
// roughly 106 bits of significand. Only the handful of operations needed by
// the alternating binomial sums in this library are provided.

#include <cmath>
#include <complex>

namespace jacobi::dd {

struct Real {
  double hi = 0.0;
  double lo = 0.0;

  constexpr Real() = default;
  constexpr Real(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
  constexpr Real(double h, double l) : hi(h), lo(l) {}

  [[nodiscard]] double value() const { return hi + lo; }
};

namespace detail {

inline Real two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline Real fast_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline Real two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace detail

inline Real operator+(Real a, Real b) {
  Real s = detail::two_sum(a.hi, b.hi);
  Real t = detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = detail::fast_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return detail::fast_two_sum(s.hi, s.lo);
}

inline Real operator-(Real a) { return {-a.hi, -a.lo}; }
inline Real operator-(Real a, Real b) { return a + (-b); }

inline Real operator*(Real a, Real b) {
  Real p = detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return detail::fast_two_sum(p.hi, p.lo);
}

inline Real operator/(Real a, Real b) {
  const double q1 = a.hi / b.hi;
  Real r = a - b * Real(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * Real(q2);
  const double q3 = r.hi / b.hi;
  return detail::fast_two_sum(q1, q2) + Real(q3);
}

inline Real& operator+=(Real& a, Real b) { return a = a + b; }
inline Real& operator-=(Real& a, Real b) { return a = a - b; }
inline Real& operator*=(Real& a, Real b) { return a = a * b; }

struct Complex {
  Real re;
  Real im;

  constexpr Complex() = default;
  constexpr Complex(Real r, Real i = Real()) : re(r), im(i) {}
  Complex(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT

  [[nodiscard]] std::complex<double> value() const { return {re.value(), im.value()}; }
};

inline Complex operator+(Complex a, Complex b) { return {a.re + b.re, a.im + b.im}; }
inline Complex operator-(Complex a, Complex b) { return {a.re - b.re, a.im - b.im}; }
inline Complex operator*(Complex a, Complex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Complex operator*(Complex a, Real s) { return {a.re * s, a.im * s}; }
inline Complex operator/(Complex a, Real s) { return {a.re / s, a.im / s}; }
inline Complex operator/(Complex a, Complex b) {
  const Real den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline Complex& operator+=(Complex& a, Complex b) { return a = a + b; }

}  // namespace jacobi::dd
