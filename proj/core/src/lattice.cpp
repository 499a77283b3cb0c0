#include "jacobi/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "jacobi/ddouble.hpp"

namespace jacobi {

LatticeVector LatticeVector::unit(std::size_t x, std::size_t length) {
  LatticeVector v(std::max(length, x + 1));
  v[x] = 1.0;
  return v;
}

LatticeVector LatticeVector::ones(std::size_t length) {
  LatticeVector v(length, false);
  std::fill(v.values.begin(), v.values.end(), cplx(1.0));
  return v;
}

LatticeVector LatticeVector::from_real(const std::vector<double>& v, bool finite) {
  LatticeVector out(v.size(), finite);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

std::size_t LatticeVector::support_hint() const {
  for (std::size_t i = values.size(); i-- > 0;)
    if (values[i] != cplx(0.0)) return i;
  return 0;
}

bool LatticeVector::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](cplx c) { return c == cplx(0.0); });
}

void OperatorSpec::validate() const {
  if (N < 2) throw std::invalid_argument("OperatorSpec: truncation N must be at least 2");
  if (kind == OperatorKind::perturbed && !(q > 0.0))
    throw std::invalid_argument("OperatorSpec: coupling q must be positive");
}

bool SemiAnalyticReport::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.ratio <= 1.0; });
}

namespace {

template <class T>
std::vector<T> stencil(const std::vector<T>& v) {
  const std::size_t n = v.size();
  if (n < 2) throw std::invalid_argument("apply_L0: vector needs at least two entries");
  std::vector<T> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    const double xd = static_cast<double>(x);
    T r = (2.0 * xd + 1.0) * v[x];
    if (x + 1 < n) r -= (xd + 1.0) * v[x + 1];
    if (x > 0) r -= xd * v[x - 1];
    out[x] = r;
  }
  return out;
}

}  // namespace

LatticeVector apply_L0(const LatticeVector& v) {
  return LatticeVector(stencil(v.values), v.finite_support);
}

std::vector<double> apply_L0(const std::vector<double>& v) { return stencil(v); }

LatticeVector apply_L(const LatticeVector& v, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("apply_L: q must be positive");
  LatticeVector out = apply_L0(v);
  out[0] -= q * v[0];
  return out;
}

LatticeVector binomial_transform(const LatticeVector& v, std::size_t k_out) {
  if (!v.finite_support)
    throw std::invalid_argument("binomial_transform: input must be finitely supported");
  const std::size_t xs = v.support_hint();
  LatticeVector out(k_out + 1, false);
  // Row k of Pascal's triangle, truncated at the support. Entries stay exact in
  // double-double up to 2^106.
  std::vector<dd::Real> row(xs + 1);
  row[0] = 1.0;
  for (std::size_t k = 0; k <= k_out; ++k) {
    if (k > 0) {
      for (std::size_t x = std::min(k, xs); x >= 1; --x) row[x] = row[x] + row[x - 1];
    }
    dd::Complex acc;
    for (std::size_t x = 0; x <= std::min(k, xs); ++x) {
      const dd::Real c = (x % 2 == 0) ? row[x] : -row[x];
      acc += dd::Complex(v[x]) * c;
    }
    out[k] = acc.value();
  }
  return out;
}

std::vector<std::int64_t> binomial_transform_exact(const std::vector<std::int64_t>& v,
                                                   std::size_t k_out) {
  std::size_t xs = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) xs = i;
  std::vector<std::int64_t> row(xs + 1, 0);
  row[0] = 1;
  std::vector<std::int64_t> out(k_out + 1);
  for (std::size_t k = 0; k <= k_out; ++k) {
    if (k > 0) {
      for (std::size_t x = std::min(k, xs); x >= 1; --x)
        if (__builtin_add_overflow(row[x], row[x - 1], &row[x]))
          throw std::overflow_error("binomial_transform_exact: binomial overflow");
    }
    std::int64_t acc = 0;
    for (std::size_t x = 0; x <= std::min(k, xs) && x < v.size(); ++x) {
      std::int64_t term = 0;
      if (__builtin_mul_overflow(row[x], v[x], &term))
        throw std::overflow_error("binomial_transform_exact: product overflow");
      const bool odd = (x % 2) != 0;
      if (odd ? __builtin_sub_overflow(acc, term, &acc) : __builtin_add_overflow(acc, term, &acc))
        throw std::overflow_error("binomial_transform_exact: sum overflow");
    }
    out[k] = acc;
  }
  return out;
}

double weight_factor(double x, const WeightSpec& w) { return std::pow(x + w.kappa, w.tau); }

LatticeVector apply_weight(const LatticeVector& v, const WeightSpec& w) {
  if (!(w.kappa > 1.0)) throw std::invalid_argument("apply_weight: kappa must exceed 1");
  LatticeVector out = v;
  for (std::size_t x = 0; x < v.size(); ++x) out[x] *= weight_factor(static_cast<double>(x), w);
  return out;
}

Tridiagonal truncated_matrix(const OperatorSpec& spec) {
  spec.validate();
  Tridiagonal m;
  const auto n = static_cast<std::size_t>(spec.N) + 1;
  m.diag.resize(n);
  m.off.resize(n - 1);
  for (std::size_t x = 0; x < n; ++x) m.diag[x] = 2.0 * static_cast<double>(x) + 1.0;
  for (std::size_t x = 0; x + 1 < n; ++x) m.off[x] = -(static_cast<double>(x) + 1.0);
  if (spec.kind == OperatorKind::perturbed) m.diag[0] -= spec.q;
  return m;
}

Norms norms(const LatticeVector& v) {
  Norms n;
  double ss = 0.0;
  for (const cplx& c : v.values) {
    const double a = std::abs(c);
    n.l1 += a;
    ss += a * a;
    n.sup = std::max(n.sup, a);
  }
  n.l2 = std::sqrt(ss);
  return n;
}

cplx inner(const LatticeVector& u, const LatticeVector& v) {
  cplx s = 0.0;
  const std::size_t n = std::min(u.size(), v.size());
  for (std::size_t i = 0; i < n; ++i) s += std::conj(u[i]) * v[i];
  return s;
}

SemiAnalyticReport semi_analytic_bound_report(const LatticeVector& v, int kmax) {
  if (!v.finite_support)
    throw std::invalid_argument("semi_analytic_bound_report: input must be finitely supported");
  if (v.is_zero()) throw std::invalid_argument("semi_analytic_bound_report: zero vector");
  if (kmax < 1) throw std::invalid_argument("semi_analytic_bound_report: kmax must be positive");
  SemiAnalyticReport rep;
  rep.x_v = v.support_hint();
  rep.l1 = norms(v).l1;
  // Room for the support to grow by one site per application without truncation.
  LatticeVector w(rep.x_v + static_cast<std::size_t>(kmax) + 2);
  std::copy(v.values.begin(), v.values.begin() + static_cast<std::ptrdiff_t>(rep.x_v + 1),
            w.values.begin());
  double growth = 1.0;  // 4^k (k+x_v)!/x_v!
  for (int k = 1; k <= kmax; ++k) {
    w = apply_L0(w);
    growth *= 4.0 * static_cast<double>(static_cast<std::size_t>(k) + rep.x_v);
    SemiAnalyticEntry e;
    e.k = k;
    e.norm = norms(w).l2;
    e.bound = growth * rep.l1;
    e.ratio = e.norm / e.bound;
    rep.entries.push_back(e);
  }
  return rep;
}

nlohmann::json to_json(const LatticeVector& v) {
  nlohmann::json j = nlohmann::json::array();
  for (const cplx& c : v.values) j.push_back({c.real(), c.imag()});
  return j;
}

LatticeVector lattice_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("lattice_from_json: expected an array");
  LatticeVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 2)
      throw std::invalid_argument("lattice_from_json: entries must be [re, im] pairs");
    v[i] = {p[0].get<double>(), p[1].get<double>()};
  }
  return v;
}

}  // namespace jacobi
