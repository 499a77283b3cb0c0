#include "jacobi/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <stdexcept>

#include "jacobi/io.hpp"
#include "jacobi/parallel.hpp"
#include "jacobi/quadrature.hpp"

namespace jacobi {

namespace {

// Spherical Bessel j_0..j_{n-1} at w >= 0.
void spherical_bessel(int n, double w, double* out) {
  std::fill(out, out + n, 0.0);
  if (w == 0.0) {
    out[0] = 1.0;
    return;
  }
  if (w < 1e-3) {
    // j_k(w) = w^k / (2k+1)!! [1 - w^2 / (2(2k+3)) + w^4 / (8(2k+3)(2k+5)) - ...]
    double lead = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k > 0) lead *= w / (2.0 * k + 1.0);
      const double a = 2.0 * k + 3.0;
      out[k] = lead * (1.0 - w * w / (2.0 * a) + w * w * w * w / (8.0 * a * (a + 2.0)));
    }
    return;
  }
  const double s = std::sin(w);
  const double c = std::cos(w);
  if (w > n) {
    out[0] = s / w;
    if (n > 1) out[1] = s / (w * w) - c / w;
    for (int k = 1; k + 1 < n; ++k) out[k + 1] = (2.0 * k + 1.0) / w * out[k] - out[k - 1];
    return;
  }
  // Miller: backward recursion from well above max(n, w), normalised by
  // sum (2k+1) j_k^2 = 1.
  const int start = n + 30 + static_cast<int>(w);
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[static_cast<std::size_t>(start)] = 1.0;
  for (int k = start; k >= 1; --k) {
    const auto ku = static_cast<std::size_t>(k);
    f[ku - 1] = (2.0 * k + 1.0) / w * f[ku] - f[ku + 1];
    if (std::abs(f[ku - 1]) > 1e100) {
      for (std::size_t i = ku - 1; i < f.size(); ++i) f[i] *= 1e-100;
    }
  }
  double norm = 0.0;
  for (int k = start; k >= 0; --k) norm += (2.0 * k + 1.0) * f[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(k)];
  double scale = 1.0 / std::sqrt(norm);
  const double j0 = s / w;
  const double j1 = s / (w * w) - c / w;
  const bool use0 = std::abs(j0) >= std::abs(j1);
  if ((use0 ? j0 * f[0] : j1 * f[1]) < 0.0) scale = -scale;
  for (int k = 0; k < n; ++k) out[k] = f[static_cast<std::size_t>(k)] * scale;
}

// (2j+1) w_m P_j(u_m) for the n-point Gauss-Legendre rule, j-major.
const std::vector<double>& filon_basis(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const quad::Rule& r = quad::gauss_legendre(n);
  std::vector<double> A(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double u = r.nodes[static_cast<std::size_t>(m)];
    double p0 = 1.0;
    double p1 = u;
    for (int j = 0; j < n; ++j) {
      const double pj = j == 0 ? p0 : p1;
      A[static_cast<std::size_t>(j * n + m)] = (2.0 * j + 1.0) * r.weights[static_cast<std::size_t>(m)] * pj;
      if (j >= 1) {
        const double p2 = ((2.0 * j + 1.0) * u * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
      }
    }
  }
  return cache.emplace(n, std::move(A)).first->second;
}

// Weights W_m with int_a^b e^{-it lambda} F(lambda) d lambda ~ sum_m W_m F(lambda_m),
// exact for F polynomial of degree < n.
void filon_weights(int n, double t, double a, double b, cplx* W) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (b + a);
  const double w = t * h;
  std::vector<double> jb(static_cast<std::size_t>(n));
  spherical_bessel(n, std::abs(w), jb.data());
  // moments of e^{-i w u} against P_j: 2 (-i)^j j_j(w), j_j(-w) = (-1)^j j_j(w)
  std::vector<cplx> mom(static_cast<std::size_t>(n));
  static const cplx mi_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  for (int j = 0; j < n; ++j) {
    double v = jb[static_cast<std::size_t>(j)];
    if (w < 0.0 && (j % 2)) v = -v;
    mom[static_cast<std::size_t>(j)] = mi_pow[j % 4] * v;
  }
  const std::vector<double>& A = filon_basis(n);
  const cplx phase = std::polar(h, -t * c);
  for (int m = 0; m < n; ++m) {
    cplx acc;
    for (int j = 0; j < n; ++j) acc += mom[static_cast<std::size_t>(j)] * A[static_cast<std::size_t>(j * n + m)];
    W[m] = phase * acc;
  }
}

struct NodeData {
  int n = 0;
  int width = 0;                // xm + 1
  std::vector<double> H;        // sqrt(weight) * u_lambda(x), node-major
  std::vector<quad::Panel> panels;
};

NodeData sample_nodes(OperatorKind kind, double q, const std::vector<quad::Panel>& panels, int n, int xm) {
  NodeData d;
  d.n = n;
  d.width = xm + 1;
  d.panels = panels;
  const quad::Rule& r = quad::gauss_legendre(n);
  const std::size_t total = panels.size() * static_cast<std::size_t>(n);
  d.H.assign(total * static_cast<std::size_t>(d.width), 0.0);
  parallel_for(total, [&](std::size_t k) {
    const auto& p = panels[k / static_cast<std::size_t>(n)];
    const double u = r.nodes[k % static_cast<std::size_t>(n)];
    const double lambda = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * u;
    const SpectralSample s = spectral_sample(kind, q, lambda, xm);
    const double sw = std::sqrt(s.weight);
    double* row = d.H.data() + k * static_cast<std::size_t>(d.width);
    for (int x = 0; x <= xm; ++x) row[x] = sw * s.eigenfunction[static_cast<std::size_t>(x)];
  });
  return d;
}

// Continuum kernel at one t on x1 <= X, x2 <= C into out[(X+1)*(C+1)].
void continuum_slice(const NodeData& d, double t, int X, int C, cplx* out) {
  const std::size_t cols = static_cast<std::size_t>(C) + 1;
  std::fill(out, out + (static_cast<std::size_t>(X) + 1) * cols, cplx());
  std::vector<cplx> W(static_cast<std::size_t>(d.n));
  std::vector<double> re(cols);
  std::vector<double> im(cols);
  for (std::size_t p = 0; p < d.panels.size(); ++p) {
    filon_weights(d.n, t, d.panels[p].a, d.panels[p].b, W.data());
    for (int x1 = 0; x1 <= X; ++x1) {
      std::fill(re.begin(), re.end(), 0.0);
      std::fill(im.begin(), im.end(), 0.0);
      for (int m = 0; m < d.n; ++m) {
        const double* h = d.H.data() + (p * static_cast<std::size_t>(d.n) + static_cast<std::size_t>(m)) *
                                           static_cast<std::size_t>(d.width);
        const double wr = W[static_cast<std::size_t>(m)].real() * h[x1];
        const double wi = W[static_cast<std::size_t>(m)].imag() * h[x1];
        for (std::size_t x2 = 0; x2 < cols; ++x2) {
          re[x2] += wr * h[x2];
          im[x2] += wi * h[x2];
        }
      }
      cplx* o = out + static_cast<std::size_t>(x1) * cols;
      for (std::size_t x2 = 0; x2 < cols; ++x2) o[x2] += cplx(re[x2], im[x2]);
    }
  }
}

}  // namespace

void QuadratureConfig::validate() const {
  mesh.validate();
  if (filon_degree < 1) throw std::invalid_argument("QuadratureConfig: filon_degree must be >= 1");
  if (max_doublings < 0) throw std::invalid_argument("QuadratureConfig: max_doublings must be >= 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("QuadratureConfig: tolerance must be positive");
  if (!(cutoff_threshold > 0.0 && cutoff_threshold < 1.0))
    throw std::invalid_argument("QuadratureConfig: cutoff_threshold must lie in (0, 1)");
}

std::size_t KernelTable::index(std::size_t it, int x1, int x2) const {
  if (it >= ts.size() || x1 < 0 || x1 > xmax || x2 < 0 || x2 > cmax)
    throw std::out_of_range("KernelTable: index outside the table");
  return (it * static_cast<std::size_t>(xmax + 1) + static_cast<std::size_t>(x1)) *
             static_cast<std::size_t>(cmax + 1) +
         static_cast<std::size_t>(x2);
}

double KernelTable::max_err() const {
  double m = 0.0;
  for (double e : err) m = std::max(m, e);
  return m;
}

KernelTable kernel_table(OperatorKind kind, double q, const std::vector<double>& ts, int xmax, int cmax,
                         const QuadratureConfig& cfg) {
  cfg.validate();
  if (xmax < 0 || cmax < 0) throw std::invalid_argument("kernel_table: window must be nonnegative");
  if (kind == OperatorKind::perturbed && !(q > 0.0))
    throw std::domain_error("kernel_table: perturbed operator needs q > 0");
  for (double t : ts)
    if (!std::isfinite(t)) throw std::invalid_argument("kernel_table: t must be finite");

  KernelTable tab;
  tab.kind = kind;
  tab.q = kind == OperatorKind::free ? 0.0 : q;
  tab.cfg = cfg;
  tab.ts = ts;
  tab.xmax = xmax;
  tab.cmax = cmax;
  const int xm = std::max(xmax, cmax);
  tab.lambda_cutoff = cfg.mesh.cutoff > 0.0
                          ? cfg.mesh.cutoff
                          : spectral_cutoff(kind, q, std::min(xmax, cmax), cfg.cutoff_threshold);
  const auto panels = spectral_mesh(kind, xm, tab.lambda_cutoff, cfg.mesh);
  tab.panels = static_cast<int>(panels.size());

  const std::size_t slice = static_cast<std::size_t>(xmax + 1) * static_cast<std::size_t>(cmax + 1);
  const std::size_t total = slice * ts.size();

  // Contribution of [0, floor] to the perturbed integral, bounded by floor * max F.
  double floor_bound = 0.0;
  if (kind == OperatorKind::perturbed) {
    const SpectralSample s = spectral_sample(kind, q, cfg.mesh.floor, xm);
    double m = 0.0;
    for (double v : s.eigenfunction) m = std::max(m, std::abs(v));
    floor_bound = cfg.mesh.floor * s.weight * m * m;
  }

  int n = cfg.filon_degree + 1;
  NodeData lo = sample_nodes(kind, tab.q, panels, n, xm);
  std::vector<cplx> lo_vals(total);
  parallel_for(ts.size(), [&](std::size_t it) {
    continuum_slice(lo, ts[it], xmax, cmax, lo_vals.data() + it * slice);
  });
  for (int doubling = 0;; ++doubling) {
    NodeData hi = sample_nodes(kind, tab.q, panels, 2 * n, xm);
    std::vector<cplx> hi_vals(total);
    parallel_for(ts.size(), [&](std::size_t it) {
      continuum_slice(hi, ts[it], xmax, cmax, hi_vals.data() + it * slice);
    });
    tab.err.resize(total);
    double worst = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
      tab.err[k] = std::abs(hi_vals[k] - lo_vals[k]) + floor_bound;
      if (!std::isfinite(tab.err[k])) throw std::runtime_error("kernel_table: non-finite quadrature value");
      worst = std::max(worst, tab.err[k]);
    }
    if (worst <= cfg.tolerance) {
      tab.continuum = std::move(hi_vals);
      tab.nodes = static_cast<int>(panels.size()) * 2 * n;
      break;
    }
    if (doubling >= cfg.max_doublings) {
      std::ostringstream msg;
      msg << "kernel_table: quadrature did not converge, degree-doubling difference " << worst
          << " > tolerance " << cfg.tolerance << " at " << 2 * n << " nodes per panel";
      throw std::runtime_error(msg.str());
    }
    n *= 2;
    lo = std::move(hi);
    lo_vals = std::move(hi_vals);
  }

  if (kind == OperatorKind::perturbed) {
    const BoundState bs = bound_state_solve(q, xm);
    tab.bound.resize(total);
    for (std::size_t it = 0; it < ts.size(); ++it) {
      const cplx ph = std::polar(1.0, -ts[it] * bs.lambda0);
      for (int x1 = 0; x1 <= xmax; ++x1)
        for (int x2 = 0; x2 <= cmax; ++x2)
          tab.bound[tab.index(it, x1, x2)] =
              ph * bs.vector[static_cast<std::size_t>(x1)].real() * bs.vector[static_cast<std::size_t>(x2)].real();
    }
  }
  return tab;
}

cplx kernel_free(double t, int x1, int x2, const QuadratureConfig& cfg, double* err_est) {
  if (x1 < 0 || x2 < 0) throw std::invalid_argument("kernel_free: sites must be nonnegative");
  const int lo = std::min(x1, x2);
  const int hi = std::max(x1, x2);
  const KernelTable tab = kernel_table(OperatorKind::free, 0.0, {t}, hi, lo, cfg);
  if (err_est) *err_est = tab.err_at(0, hi, lo);
  return tab.at(0, hi, lo);
}

KernelValue kernel_perturbed(double t, int x1, int x2, double q, const QuadratureConfig& cfg) {
  if (x1 < 0 || x2 < 0) throw std::invalid_argument("kernel_perturbed: sites must be nonnegative");
  const int lo = std::min(x1, x2);
  const int hi = std::max(x1, x2);
  const KernelTable tab = kernel_table(OperatorKind::perturbed, q, {t}, hi, lo, cfg);
  return {tab.continuum_at(0, hi, lo), tab.bound_at(0, hi, lo), tab.err_at(0, hi, lo)};
}

void write_csv(std::ostream& os, const KernelTable& table) {
  io::CsvWriter w(os, "jacobi.kernel_table", 1, {"t", "x1", "x2", "re", "im", "err_est"});
  for (std::size_t it = 0; it < table.ts.size(); ++it)
    for (int x1 = 0; x1 <= table.xmax; ++x1)
      for (int x2 = 0; x2 <= table.cmax; ++x2) {
        const cplx k = table.at(it, x1, x2);
        w.cell(table.ts[it]).cell(static_cast<long long>(x1)).cell(static_cast<long long>(x2));
        w.cell(k.real()).cell(k.imag()).cell(table.err_at(it, x1, x2));
        w.end_row();
      }
}

LatticeVector apply_kernel(const KernelTable& table, std::size_t it, const LatticeVector& v) {
  if (v.size() != static_cast<std::size_t>(table.cmax) + 1)
    throw std::invalid_argument("apply_kernel: vector length does not match the kernel columns");
  LatticeVector out(static_cast<std::size_t>(table.xmax) + 1, false);
  for (int x1 = 0; x1 <= table.xmax; ++x1) {
    cplx acc;
    for (int x2 = 0; x2 <= table.cmax; ++x2) acc += table.at(it, x1, x2) * v[static_cast<std::size_t>(x2)];
    out[static_cast<std::size_t>(x1)] = acc;
  }
  return out;
}

LatticeVector evolve_state(const LatticeVector& v, double t, const OperatorSpec& spec,
                           const QuadratureConfig& cfg, int xout) {
  spec.validate();
  if (v.size() == 0) throw std::invalid_argument("evolve_state: empty vector");
  const int cmax = static_cast<int>(v.size()) - 1;
  const int xmax = xout < 0 ? cmax : xout;
  const KernelTable tab = kernel_table(spec.kind, spec.q, {t}, xmax, cmax, cfg);
  return apply_kernel(tab, 0, v);
}

// ---------------------------------------------------------------------------
// Truncated-matrix oracle

namespace {

struct CharValue {
  double r = 0.0;   // characteristic recursion residual at row N (scaled)
  double dr = 0.0;  // its mu-derivative, same scale
  int count = 0;    // eigenvalues below mu
};

// p_0 = 1, row x of (T - mu) p = 0 solved for p_{x+1}; r is the row-N residual.
CharValue characteristic(const Tridiagonal& T, double mu) {
  const std::size_t n = T.size();
  double p0 = 0.0;
  double p1 = 1.0;
  double d0 = 0.0;
  double d1 = 0.0;
  CharValue cv;
  double pivot = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double bprev = x > 0 ? T.off[x - 1] : 0.0;
    pivot = (T.diag[x] - mu) - (x > 0 ? bprev * bprev / pivot : 0.0);
    if (pivot == 0.0) pivot = -std::numeric_limits<double>::min();
    if (pivot < 0.0) ++cv.count;
    const double rr = (T.diag[x] - mu) * p1 + bprev * p0;
    const double dd = (T.diag[x] - mu) * d1 - p1 + bprev * d0;
    if (x + 1 == n) {
      cv.r = rr;
      cv.dr = dd;
      break;
    }
    const double b = T.off[x];
    double p2 = -rr / b;
    double d2 = -dd / b;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
    const double mag = std::max(std::abs(p1), std::abs(d1));
    if (mag > 1e150) {
      p0 *= 1e-150;
      p1 *= 1e-150;
      d0 *= 1e-150;
      d1 *= 1e-150;
    }
  }
  return cv;
}

int sturm_count(const Tridiagonal& T, double mu) {
  int count = 0;
  double pivot = 0.0;
  for (std::size_t x = 0; x < T.size(); ++x) {
    const double b = x > 0 ? T.off[x - 1] : 0.0;
    pivot = (T.diag[x] - mu) - (x > 0 ? b * b / pivot : 0.0);
    if (pivot == 0.0) pivot = -std::numeric_limits<double>::min();
    if (pivot < 0.0) ++count;
  }
  return count;
}

// Solves (T - mu) y = rhs by Gaussian elimination with partial pivoting.
std::vector<double> tridiagonal_solve(const Tridiagonal& T, double mu, std::vector<double> rhs) {
  const std::size_t n = T.size();
  const double tiny = std::numeric_limits<double>::epsilon() * (std::abs(mu) + 1.0);
  // U rows: u0 x_i + u1 x_{i+1} + u2 x_{i+2}
  std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0);
  double ca = T.diag[0] - mu;       // current row, column i
  double cb = n > 1 ? T.off[0] : 0.0;  // current row, column i+1
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double l = T.off[i];
    const double na = T.diag[i + 1] - mu;
    const double nb = i + 2 < n ? T.off[i + 1] : 0.0;
    if (std::abs(l) > std::abs(ca)) {
      u0[i] = l;
      u1[i] = na;
      u2[i] = nb;
      std::swap(rhs[i], rhs[i + 1]);
      const double m = ca / l;
      ca = cb - m * na;
      cb = -m * nb;
      rhs[i + 1] -= m * rhs[i];
    } else {
      if (ca == 0.0) ca = tiny;
      u0[i] = ca;
      u1[i] = cb;
      const double m = l / ca;
      ca = na - m * cb;
      cb = nb;
      rhs[i + 1] -= m * rhs[i];
    }
  }
  u0[n - 1] = ca == 0.0 ? tiny : ca;
  std::vector<double> y(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = rhs[k];
    if (k + 1 < n) s -= u1[k] * y[k + 1];
    if (k + 2 < n) s -= u2[k] * y[k + 2];
    y[k] = s / u0[k];
  }
  return y;
}

double refine_eigenvalue(const Tridiagonal& T, double lo, double hi, int index) {
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const CharValue cv = characteristic(T, mu);
    if (cv.count <= index)
      lo = mu;
    else
      hi = mu;
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mu));
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    double next = cv.dr != 0.0 ? mu - cv.r / cv.dr : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - mu) <= tol && sturm_count(T, next - 2.0 * tol) <= index &&
        sturm_count(T, next + 2.0 * tol) >= index + 1)
      return next;
    mu = next;
  }
  return mu;
}

}  // namespace

TruncatedSpectrum::TruncatedSpectrum(const OperatorSpec& spec, int window, double cutoff)
    : spec_(spec), window_(window) {
  spec_.validate();
  if (window < 0 || window > spec.N) throw std::invalid_argument("TruncatedSpectrum: window outside 0..N");
  T_ = truncated_matrix(spec_);
  double lower = 0.0;
  for (std::size_t i = 0; i < T_.size(); ++i) {
    double r = std::abs(i > 0 ? T_.off[i - 1] : 0.0) + std::abs(i + 1 < T_.size() ? T_.off[i] : 0.0);
    lower = std::min(lower, T_.diag[i] - r);
  }
  const int J = sturm_count(T_, cutoff);
  eig_.resize(static_cast<std::size_t>(J));
  std::vector<double> ub(static_cast<std::size_t>(J), cutoff);
  double lo = lower;
  for (int j = 0; j < J; ++j) {
    double hi = ub[static_cast<std::size_t>(j)];
    // isolate eigenvalue j in (lo, hi]
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const int c = sturm_count(T_, mid);
      for (int k = j; k < std::min(c, J); ++k) ub[static_cast<std::size_t>(k)] = std::min(ub[static_cast<std::size_t>(k)], mid);
      if (c <= j)
        lo = mid;
      else
        hi = mid;
      if (c == j + 1 || hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) break;
    }
    // after the loop (lo, hi] holds exactly eigenvalue j when c == j + 1 was seen
    hi = ub[static_cast<std::size_t>(j)];
    const double lam = refine_eigenvalue(T_, lo, hi, j);
    eig_[static_cast<std::size_t>(j)] = lam;
    lo = lam;
  }

  const std::size_t w = static_cast<std::size_t>(window_) + 1;
  rows_.assign(static_cast<std::size_t>(J) * w, 0.0);
  for (int j = 0; j < J; ++j) {
    const std::vector<double> v = eigenvector(eig_[static_cast<std::size_t>(j)]);
    if (eig_[static_cast<std::size_t>(j)] < 0.0) full_negative_ = v;
    for (std::size_t x = 0; x < w; ++x) rows_[static_cast<std::size_t>(j) * w + x] = v[x];
  }
}

std::vector<double> TruncatedSpectrum::eigenvector(double lambda) const {
  const std::size_t n = T_.size();
  std::vector<double> v(n);
  if (lambda < 0.0) {
    // the forward recursion picks up the growing solution here; use inverse iteration
    std::vector<double> y(n, 1.0);
    for (int it = 0; it < 3; ++it) {
      y = tridiagonal_solve(T_, lambda, y);
      double s = 0.0;
      for (double e : y) s += e * e;
      s = 1.0 / std::sqrt(s);
      for (double& e : y) e *= s;
    }
    if (y[0] < 0.0)
      for (double& e : y) e = -e;
    return y;
  }
  v[0] = 1.0;
  if (n > 1) v[1] = -(T_.diag[0] - lambda) * v[0] / T_.off[0];
  for (std::size_t x = 1; x + 1 < n; ++x)
    v[x + 1] = -((T_.diag[x] - lambda) * v[x] + T_.off[x - 1] * v[x - 1]) / T_.off[x];
  double s = 0.0;
  for (double e : v) s += e * e;
  if (!std::isfinite(s)) throw std::runtime_error("TruncatedSpectrum: eigenvector recursion overflow");
  s = 1.0 / std::sqrt(s);
  for (double& e : v) e *= s;
  return v;
}

double TruncatedSpectrum::discarded_weight() const {
  double worst = 0.0;
  for (int x = 0; x <= window_; ++x) {
    double s = 0.0;
    for (std::size_t j = 0; j < eig_.size(); ++j) s += row(j, x) * row(j, x);
    worst = std::max(worst, std::abs(1.0 - s));
  }
  return worst;
}

std::vector<cplx> TruncatedSpectrum::kernel(double t) const {
  const std::size_t w = static_cast<std::size_t>(window_) + 1;
  std::vector<cplx> K(w * w);
  for (std::size_t j = 0; j < eig_.size(); ++j) {
    const cplx ph = std::polar(1.0, -t * eig_[j]);
    const double* r = rows_.data() + j * w;
    for (std::size_t a = 0; a < w; ++a) {
      const cplx pa = ph * r[a];
      for (std::size_t b = 0; b < w; ++b) K[a * w + b] += pa * r[b];
    }
  }
  return K;
}

LatticeVector TruncatedSpectrum::evolve(const LatticeVector& v, double t) const {
  const std::size_t n = T_.size();
  if (v.size() > n) throw std::invalid_argument("TruncatedSpectrum::evolve: vector longer than N + 1");
  LatticeVector out(n, false);
  for (std::size_t j = 0; j < eig_.size(); ++j) {
    const std::vector<double> e = eigenvector(eig_[j]);
    cplx c;
    for (std::size_t x = 0; x < v.size(); ++x) c += e[x] * v[x];
    c *= std::polar(1.0, -t * eig_[j]);
    for (std::size_t x = 0; x < n; ++x) out[x] += c * e[x];
  }
  return out;
}

namespace {

double oracle_cutoff(const OperatorSpec& spec, int window) {
  return spectral_cutoff(spec.kind, spec.q, window, 1e-12);
}

std::string oracle_failure(const char* who, int N, double diff, double tol) {
  std::ostringstream msg;
  msg << who << ": truncation not converged, N = " << N << " -> " << 2 * N
      << " changes the result by " << diff << " (tolerance " << tol << ")";
  return msg.str();
}

}  // namespace

OracleKernel oracle_kernel(const std::vector<double>& ts, const OperatorSpec& spec, int window,
                           const OracleOptions& opt) {
  spec.validate();
  if (window < 0) throw std::invalid_argument("oracle_kernel: window must be nonnegative");
  const double cutoff = oracle_cutoff(spec, window);
  OperatorSpec s = spec;
  s.N = std::max(spec.N, window + 2);
  auto build = [&](int N) {
    OperatorSpec sp = s;
    sp.N = N;
    TruncatedSpectrum ts_(sp, window, cutoff);
    std::vector<std::vector<cplx>> K;
    K.reserve(ts.size());
    for (double t : ts) K.push_back(ts_.kernel(t));
    return std::make_pair(std::move(K), ts_.discarded_weight());
  };
  auto a = build(s.N);
  for (;;) {
    auto b = build(2 * s.N);
    double diff = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t k = 0; k < a.first[i].size(); ++k) diff = std::max(diff, std::abs(a.first[i][k] - b.first[i][k]));
    if (diff < opt.tolerance) {
      OracleKernel out;
      out.ts = ts;
      out.window = window;
      out.N = 2 * s.N;
      out.doubling_discrepancy = diff;
      out.discarded_weight = b.second;
      for (auto& k : b.first) out.values.insert(out.values.end(), k.begin(), k.end());
      return out;
    }
    if (!opt.adaptive || 2 * s.N > opt.max_N)
      throw std::runtime_error(oracle_failure("oracle_kernel", s.N, diff, opt.tolerance));
    s.N *= 2;
    a = std::move(b);
  }
}

OracleResult oracle_evolve(const LatticeVector& v, double t, const OperatorSpec& spec, const OracleOptions& opt) {
  spec.validate();
  if (v.size() == 0) throw std::invalid_argument("oracle_evolve: empty vector");
  const int support = static_cast<int>(v.support_hint());
  const int window = std::max(support, opt.window);
  const double cutoff = oracle_cutoff(spec, window);
  int N = std::max(spec.N, std::max(window + 2, static_cast<int>(v.size())));
  auto run = [&](int n) {
    OperatorSpec sp = spec;
    sp.N = n;
    TruncatedSpectrum S(sp, window, cutoff);
    LatticeVector in(static_cast<std::size_t>(support) + 1);
    for (int x = 0; x <= support; ++x) in[static_cast<std::size_t>(x)] = v[static_cast<std::size_t>(x)];
    return std::make_pair(S.evolve(in, t), S.discarded_weight());
  };
  auto a = run(N);
  for (;;) {
    auto b = run(2 * N);
    double diff = 0.0;
    for (int x = 0; x <= window; ++x)
      diff = std::max(diff, std::abs(a.first[static_cast<std::size_t>(x)] - b.first[static_cast<std::size_t>(x)]));
    if (diff < opt.tolerance) return {std::move(b.first), 2 * N, diff, b.second};
    if (!opt.adaptive || 2 * N > opt.max_N)
      throw std::runtime_error(oracle_failure("oracle_evolve", N, diff, opt.tolerance));
    N *= 2;
    a = std::move(b);
  }
}

}  // namespace jacobi
