#include "jacobi/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace jacobi::quad {

namespace {

Rule build_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) {
        if (it > 0) break;
      }
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

Rule build_laguerre(int n) {
  if (n > 180) throw std::invalid_argument("gauss_laguerre: at most 180 nodes supported");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - r.nodes[i - 2]);
    }
    double p1 = 0.0;
    double p2 = 0.0;
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1 - z) * p2 - j * p3) / (j + 1);
      }
      pp = (n * p1 - n * p2) / z;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 3e-16 * std::abs(z)) break;
    }
    r.nodes[i] = z;
    r.weights[i] = -1.0 / (pp * n * p2);
  }
  return r;
}

template <class Builder>
const Rule& cached(std::map<int, std::unique_ptr<Rule>>& cache, std::mutex& mu, int n,
                   Builder build) {
  if (n < 1) throw std::invalid_argument("quadrature: rule size must be positive");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(build(n));
  return *slot;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, std::unique_ptr<Rule>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, build_legendre);
}

const Rule& gauss_laguerre(int n) {
  static std::map<int, std::unique_ptr<Rule>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, build_laguerre);
}

Rule mapped(const Rule& ref, double a, double b) {
  Rule r = ref;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = mid + half * ref.nodes[i];
    r.weights[i] = half * ref.weights[i];
  }
  return r;
}

std::vector<Panel> geometric_panels(double a, double floor, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("geometric_panels: sigma in (0,1)");
  if (!(floor > 0.0 && floor < a)) throw std::invalid_argument("geometric_panels: need 0 < floor < a");
  std::vector<Panel> out;
  double hi = a;
  while (hi > floor) {
    const double lo = std::max(hi * sigma, floor);
    out.push_back({lo, hi});
    hi = lo;
  }
  return out;
}

}  // namespace jacobi::quad
