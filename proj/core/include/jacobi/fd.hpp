#pragma once

// Central finite differences with two Richardson steps (h, h/2, h/4).

namespace jacobi::fd {

template <class T>
struct Derivatives {
  T d0{};
  T d1{};
  T d2{};
};

// Value, first and second derivative of f at x from 7 evaluations.
template <class F>
auto richardson(F&& f, double x, double h) {
  using T = decltype(f(x));
  const T f0 = f(x);
  T d1[3];
  T d2[3];
  double hk = h;
  for (int k = 0; k < 3; ++k, hk *= 0.5) {
    const T fp = f(x + hk);
    const T fm = f(x - hk);
    d1[k] = (fp - fm) / (2.0 * hk);
    d2[k] = (fp - 2.0 * f0 + fm) / (hk * hk);
  }
  auto extrapolate = [](const T* d) {
    const T a = (4.0 * d[1] - d[0]) / 3.0;
    const T b = (4.0 * d[2] - d[1]) / 3.0;
    return (16.0 * b - a) / 15.0;
  };
  return Derivatives<T>{f0, extrapolate(d1), extrapolate(d2)};
}

}  // namespace jacobi::fd
