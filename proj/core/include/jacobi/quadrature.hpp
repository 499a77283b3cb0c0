#pragma once

#include <vector>

namespace jacobi::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1]. Cached; thread-safe.
const Rule& gauss_legendre(int n);

// n-point Gauss-Laguerre rule for the weight e^{-x} on [0, inf), n <= 180.
const Rule& gauss_laguerre(int n);

// Gauss-Legendre nodes mapped to [a, b] with weights scaled accordingly.
Rule mapped(const Rule& ref, double a, double b);

struct Panel {
  double a = 0.0;
  double b = 0.0;
};

// Geometric panels [a*sigma^{j+1}, a*sigma^j] covering [floor, a].
std::vector<Panel> geometric_panels(double a, double floor, double sigma);

// Integral of f over [a, b] with a fixed Gauss-Legendre rule.
template <class F>
auto integrate(const Rule& ref, double a, double b, F&& f) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  decltype(f(mid)) acc{};
  for (std::size_t i = 0; i < ref.size(); ++i) acc += ref.weights[i] * f(mid + half * ref.nodes[i]);
  return acc * half;
}

}  // namespace jacobi::quad
