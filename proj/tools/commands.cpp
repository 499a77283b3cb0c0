#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jacobi/decay.hpp"
#include "jacobi/eigenfunctions.hpp"
#include "jacobi/io.hpp"
#include "jacobi/lattice.hpp"
#include "jacobi/parallel.hpp"
#include "jacobi/propagator.hpp"
#include "jacobi/quadrature.hpp"
#include "jacobi/spectral.hpp"

namespace jacobi::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, std::string> common_defaults = {
    {"kind", "free"},  {"q", "1"},       {"kappa", "4"},      {"tau", "-3"},   {"tmin", "0"},
    {"tmax", "5"},     {"tsamples", "6"}, {"xmax", "10"},     {"N", "0"},      {"out", "out"},
    {"seed", "1"},     {"threads", "0"},  {"lmin", "1e-8"},   {"lmax", "50"},  {"lsamples", "60"},
};

OperatorKind parse_kind(const std::string& s) {
  if (s == "free") return OperatorKind::free;
  if (s == "perturbed") return OperatorKind::perturbed;
  throw UsageError("kind must be 'free' or 'perturbed', got '" + s + "'");
}

std::string kind_name(OperatorKind k) { return k == OperatorKind::free ? "free" : "perturbed"; }

int require_int(const RunConfig& cfg, const std::string& key, long long lo, long long hi) {
  const long long v = cfg.integer(key);
  if (v < lo || v > hi)
    throw UsageError(key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

double require_real(const RunConfig& cfg, const std::string& key, double lo, double hi) {
  const double v = cfg.real(key);
  if (!(v >= lo && v <= hi)) {
    std::ostringstream msg;
    msg << key << " must lie in [" << lo << ", " << hi << "]";
    throw UsageError(msg.str());
  }
  return v;
}

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path dir = cfg.str("out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::ofstream c(dir / "config.txt");
  cfg.write(c);
  if (!c) throw std::runtime_error("cannot write " + (dir / "config.txt").string());
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return os;
}

void write_json(const fs::path& p, const json& j) {
  auto os = open_out(p);
  os << j.dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed: " + p.string());
}

void apply_threads(const RunConfig& cfg) {
  set_thread_count(static_cast<unsigned>(require_int(cfg, "threads", 0, 1024)));
}

std::vector<double> linear_grid(double a, double b, int n) {
  if (n == 1) return {a};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    item = b == std::string::npos ? std::string() : item.substr(b, e - b + 1);
    RunConfig tmp(std::map<std::string, std::string>{{key, item}});
    out.push_back(tmp.real(key));
  }
  if (out.empty()) throw UsageError(key + " must be a nonempty comma separated list");
  return out;
}

void report(std::ostream& os, bool pass, const std::string& name, const std::string& detail) {
  os << (pass ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(4) << v;
  return ss.str();
}

}  // namespace

RunConfig default_config(const std::string& sub) {
  auto d = common_defaults;
  if (sub == "spectrum") {
    d["xmax"] = "20";
  } else if (sub == "boundstate") {
    d["xmax"] = "200";
    d["N"] = "500";
    d["qsweep"] = "0.25,0.5,1,2,4";
  } else if (sub == "propagate") {
    d["kind"] = "perturbed";
  } else if (sub == "decay") {
    d["xmax"] = "40";
    d["tmin"] = "auto";
    d["tmax"] = "auto";
    d["tsamples"] = "16";
    d["constant"] = "73";
  } else if (sub == "verify") {
    d["inject_fault"] = "none";
  } else {
    throw UsageError("unknown subcommand '" + sub + "'");
  }
  return RunConfig(d);
}

int cmd_spectrum(const RunConfig& cfg) {
  apply_threads(cfg);
  const double q = require_real(cfg, "q", 0.0, 1e6);
  const double lmin = require_real(cfg, "lmin", 1e-300, 1e4);
  const double lmax = require_real(cfg, "lmax", lmin, 700.0);
  const int n = require_int(cfg, "lsamples", 2, 100000);
  const int xmax = require_int(cfg, "xmax", 0, 10000);
  if (!(lmax > lmin)) throw UsageError("lmax must exceed lmin");
  const auto dir = prepare_out(cfg);
  const auto lambdas = log_spaced(lmin, lmax, n);

  {
    auto os = open_out(dir / "g_table.csv");
    write_g_table(os, q, lambdas);
  }
  json files = {"g_table.csv"};
  {
    auto os = open_out(dir / "eigen_phi.csv");
    write_csv(os, build_tables(TableKind::phi, lambdas, xmax));
    files.push_back("eigen_phi.csv");
  }
  if (q > 0.0) {
    auto os = open_out(dir / "eigen_phi_perturbed.csv");
    write_csv(os, build_tables(TableKind::phi_perturbed, lambdas, xmax, q));
    files.push_back("eigen_phi_perturbed.csv");
  }
  json j = {{"command", "spectrum"}, {"config", cfg.to_json()}, {"files", files}};
  if (q > 0.0) j["g_threshold"] = to_json(g_threshold_hypotheses_report(q));
  write_json(dir / "spectrum.json", j);
  std::cout << "wrote " << files.size() << " tables to " << dir.string() << '\n';
  return exit_pass;
}

int cmd_boundstate(const RunConfig& cfg) {
  apply_threads(cfg);
  const double q = require_real(cfg, "q", 1e-6, 1e6);
  const int xmax = require_int(cfg, "xmax", 10, 100000);
  const int N = require_int(cfg, "N", 2, 1000000);
  const auto sweep_q = parse_list("qsweep", cfg.str("qsweep"));
  for (double s : sweep_q)
    if (!(s > 0.0)) throw UsageError("qsweep entries must be positive");
  const auto dir = prepare_out(cfg);

  const BoundState bs = bound_state_solve(q, xmax);
  const double trunc = bound_state_truncated_residual(bs, N);

  std::vector<BoundState> sweep(sweep_q.size());
  std::vector<double> sweep_res(sweep_q.size());
  parallel_for(sweep_q.size(), [&](std::size_t i) {
    sweep[i] = bound_state_solve(sweep_q[i], xmax);
    sweep_res[i] = bound_state_truncated_residual(sweep[i], N);
  });
  std::vector<std::size_t> order(sweep_q.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sweep_q[a] < sweep_q[b]; });
  bool monotone = true;
  for (std::size_t k = 1; k < order.size(); ++k)
    if (sweep_q[order[k]] > sweep_q[order[k - 1]] && !(sweep[order[k]].lambda0 < sweep[order[k - 1]].lambda0))
      monotone = false;

  json js = json::array();
  for (std::size_t i : order)
    js.push_back({{"q", sweep_q[i]},
                  {"lambda0", sweep[i].lambda0},
                  {"secular_residual", sweep[i].secular_residual},
                  {"truncated_residual", sweep_res[i]}});

  const bool ok_secular = bs.secular_residual < 1e-12 && bs.lambda0 < 0.0;
  const bool ok_trunc = trunc < 1e-8;
  json j = {{"command", "boundstate"},
            {"config", cfg.to_json()},
            {"bound_state", to_json(bs)},
            {"truncated_N", N},
            {"truncated_residual", trunc},
            {"sweep", js},
            {"sweep_monotone_decreasing", monotone}};
  write_json(dir / "boundstate.json", j);

  report(std::cout, ok_secular, "secular_equation", "lambda0 = " + io::format_double(bs.lambda0) +
                                                        " residual " + fmt(bs.secular_residual));
  report(std::cout, ok_trunc, "truncated_residual", "N = " + std::to_string(N) + " residual " + fmt(trunc));
  report(std::cout, monotone, "sweep_monotone", std::to_string(sweep_q.size()) + " values of q");
  return ok_secular && ok_trunc && monotone ? exit_pass : exit_fail;
}

int cmd_propagate(const RunConfig& cfg) {
  apply_threads(cfg);
  const OperatorKind kind = parse_kind(cfg.str("kind"));
  const double q = kind == OperatorKind::perturbed ? require_real(cfg, "q", 1e-6, 1e6) : 0.0;
  const double tmin = require_real(cfg, "tmin", 0.0, 1e6);
  const double tmax = require_real(cfg, "tmax", tmin, 1e6);
  const int nt = require_int(cfg, "tsamples", 1, 10000);
  const int xmax = require_int(cfg, "xmax", 0, 200);
  const int N = require_int(cfg, "N", 0, 1 << 20);
  const auto dir = prepare_out(cfg);
  const auto ts = linear_grid(tmin, tmax, nt);

  // Column x2 of the free kernel behaves like x^(2 x2) (t^2 / (1 + t^2))^x in
  // the row index, so rows are doubled until the outer half carries
  // negligible mass.
  constexpr int row_cap = 16000;
  int rows = std::min(row_cap, static_cast<int>(std::ceil(40.0 * (1.0 + tmax * tmax))) + 100 + xmax);
  KernelTable tab;
  double outer_mass = 0.0;
  for (;;) {
    tab = kernel_table(kind, q, ts, rows, xmax);
    outer_mass = 0.0;
    for (std::size_t it = 0; it < ts.size(); ++it)
      for (int x2 = 0; x2 <= xmax; ++x2) {
        double s = 0.0;
        for (int x1 = rows / 2; x1 <= rows; ++x1) s += std::norm(tab.at(it, x1, x2));
        outer_mass = std::max(outer_mass, s);
      }
    if (outer_mass < 1e-12 || rows >= row_cap) break;
    rows = std::min(row_cap, 2 * rows);
  }
  const bool rows_capped = outer_mass >= 1e-12;

  {
    KernelTable window = tab;
    // Kernel table restricted to the square window for the CSV artifact.
    window.xmax = xmax;
    window.continuum.clear();
    window.bound.clear();
    window.err.clear();
    for (std::size_t it = 0; it < ts.size(); ++it)
      for (int x1 = 0; x1 <= xmax; ++x1)
        for (int x2 = 0; x2 <= xmax; ++x2) {
          window.continuum.push_back(tab.continuum_at(it, x1, x2));
          if (!tab.bound.empty()) window.bound.push_back(tab.bound_at(it, x1, x2));
          window.err.push_back(tab.err_at(it, x1, x2));
        }
    auto os = open_out(dir / "kernel.csv");
    write_csv(os, window);
  }

  OperatorSpec spec;
  spec.kind = kind;
  spec.q = kind == OperatorKind::perturbed ? q : 1.0;
  OracleOptions opt;
  if (N > 0) {
    spec.N = N;
    opt.adaptive = false;
  } else {
    spec.N = 400;
  }
  const OracleKernel oracle = oracle_kernel(ts, spec, xmax, opt);

  json per_t = json::array();
  double max_diff = 0.0;
  double max_unit = 0.0;
  double max_identity = 0.0;
  for (std::size_t it = 0; it < ts.size(); ++it) {
    double diff = 0.0;
    double unit = 0.0;
    for (int x1 = 0; x1 <= xmax; ++x1)
      for (int x2 = 0; x2 <= xmax; ++x2) diff = std::max(diff, std::abs(tab.at(it, x1, x2) - oracle.at(it, x1, x2)));
    for (int x2 = 0; x2 <= xmax; ++x2) {
      double s = 0.0;
      for (int x1 = 0; x1 <= rows; ++x1) s += std::norm(tab.at(it, x1, x2));
      unit = std::max(unit, std::abs(s - 1.0));
    }
    json row = {{"t", ts[it]}, {"oracle_diff", diff}, {"unitarity_defect", unit}};
    if (ts[it] == 0.0) {
      double id = 0.0;
      for (int x1 = 0; x1 <= xmax; ++x1)
        for (int x2 = 0; x2 <= xmax; ++x2) id = std::max(id, std::abs(tab.at(it, x1, x2) - (x1 == x2 ? 1.0 : 0.0)));
      row["identity_defect"] = id;
      max_identity = std::max(max_identity, id);
    }
    per_t.push_back(row);
    max_diff = std::max(max_diff, diff);
    max_unit = std::max(max_unit, unit);
  }

  const bool ok_oracle = max_diff < 1e-6;
  const bool ok_unit = max_unit < 1e-6;
  const bool ok_identity = max_identity < 1e-6;
  json j = {{"command", "propagate"},
            {"config", cfg.to_json()},
            {"operator", kind_name(kind)},
            {"rows_for_unitarity", rows},
            {"rows_capped", rows_capped},
            {"outer_half_mass", outer_mass},
            {"quadrature_nodes", tab.nodes},
            {"quadrature_panels", tab.panels},
            {"lambda_cutoff", tab.lambda_cutoff},
            {"max_err_est", tab.max_err()},
            {"oracle_N", oracle.N},
            {"oracle_doubling_discrepancy", oracle.doubling_discrepancy},
            {"oracle_discarded_weight", oracle.discarded_weight},
            {"max_oracle_diff", max_diff},
            {"max_unitarity_defect", max_unit},
            {"per_t", per_t}};
  write_json(dir / "propagate.json", j);
  report(std::cout, ok_oracle, "oracle_equivalence", "max diff " + fmt(max_diff) + " (N = " + std::to_string(oracle.N) + ")");
  report(std::cout, ok_unit, "unitarity", "max column defect " + fmt(max_unit) + " over " + std::to_string(rows + 1) + " rows");
  report(std::cout, ok_identity, "identity_at_t0", "max defect " + fmt(max_identity));
  return ok_oracle && ok_unit && ok_identity ? exit_pass : exit_fail;
}

int cmd_decay(const RunConfig& cfg) {
  apply_threads(cfg);
  const OperatorKind kind = parse_kind(cfg.str("kind"));
  const bool free = kind == OperatorKind::free;
  const double q = free ? 0.0 : require_real(cfg, "q", 1e-6, 1e6);
  const double tmin = cfg.str("tmin") == "auto" ? (free ? 10.0 : 100.0) : require_real(cfg, "tmin", 1e-6, 1e8);
  const double tmax = cfg.str("tmax") == "auto" ? (free ? 1e3 : 1e4) : require_real(cfg, "tmax", tmin, 1e8);
  if (!(tmax > tmin)) throw UsageError("tmax must exceed tmin");
  const int nt = require_int(cfg, "tsamples", 2, 10000);
  DecayConfig dc;
  dc.weight.kappa = require_real(cfg, "kappa", 1e-6, 1e6);
  dc.weight.tau = require_real(cfg, "tau", -100.0, 100.0);
  dc.xmax = require_int(cfg, "xmax", 0, 500);
  const double constant = require_real(cfg, "constant", 0.0, 1e300);
  const auto dir = prepare_out(cfg);
  const auto ts = log_spaced(tmin, tmax, nt);

  json j = {{"command", "decay"}, {"config", cfg.to_json()}, {"operator", kind_name(kind)}};
  bool ok = true;
  auto fit_or_null = [&](const DecayCurve& c, FitModel m) -> json {
    try {
      return to_json(fit_decay(c.ts, c.values, m));
    } catch (const std::invalid_argument& e) {
      return {{"error", e.what()}};
    }
  };

  if (free) {
    const DecayCurve c = decay_curve(kind, 0.0, ts, KernelPart::full, dc);
    {
      auto os = open_out(dir / "decay_curve.csv");
      write_csv(os, c);
    }
    j["fit"] = fit_or_null(c, FitModel::pure_power);
    const bool have_fit = !j["fit"].contains("error");
    const double slope = have_fit ? j["fit"]["slope"].get<double>() : NAN;
    const bool ok_slope = have_fit && std::abs(slope + 1.0) <= 0.05;
    const auto cts = log_spaced(1.0, std::max(tmax, 10.0), 16);
    const ConstantCheck cc = constant_bound_check(cts, dc.xmax, dc.weight.kappa, constant);
    j["constant_check"] = to_json(cc);
    j["max_tail"] = *std::max_element(c.tail.begin(), c.tail.end());
    report(std::cout, ok_slope, "free_fit_slope", "slope " + fmt(slope) + " (target -1 +- 0.05)");
    report(std::cout, cc.violations == 0, "constant_bound",
           std::to_string(cc.violations) + " violations in " + std::to_string(cc.samples) + ", worst ratio " +
               fmt(cc.worst_ratio));
    ok = ok_slope && cc.violations == 0;
  } else {
    const DecayCurve c = decay_curve(kind, q, ts, KernelPart::continuum, dc);
    {
      auto os = open_out(dir / "decay_curve.csv");
      write_csv(os, c);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < ts.size(); ++i)
      if (!(ts[i] * c.values[i] < ts[i - 1] * c.values[i - 1])) decreasing = false;
    const DecayCurve r = decay_curve(kind, q, {tmin, tmin * tmin}, KernelPart::continuum, dc);
    const double ratio = r.values[1] * tmin * tmin / (r.values[0] * tmin);
    const DecayCurve full = decay_curve(kind, q, ts, KernelPart::full, dc);
    {
      auto os = open_out(dir / "decay_curve_full.csv");
      write_csv(os, full);
    }
    const double floor = *std::min_element(full.values.begin(), full.values.end());
    const bool ok_floor = floor > 10.0 * c.values.back();
    j["fit_pure_power"] = fit_or_null(c, FitModel::pure_power);
    j["fit_power_log"] = fit_or_null(c, FitModel::power_log);
    const bool have_fit = !j["fit_pure_power"].contains("error");
    const double slope = have_fit ? j["fit_pure_power"]["slope"].get<double>() : NAN;
    const bool ok_slope = have_fit && slope > -1.35 && slope < -1.0;
    const bool ok_ratio = ratio >= 0.125 && ratio <= 0.375;
    j["tD_strictly_decreasing"] = decreasing;
    j["ratio_t"] = tmin;
    j["ratio"] = ratio;
    j["full_kernel_floor"] = floor;
    j["max_tail"] = *std::max_element(c.tail.begin(), c.tail.end());
    report(std::cout, decreasing, "tD_decreasing", std::to_string(ts.size()) + " samples on [" + fmt(tmin) + ", " + fmt(tmax) + "]");
    report(std::cout, ok_ratio, "log_ratio", "ratio " + fmt(ratio) + " (band [0.125, 0.375])");
    report(std::cout, ok_slope, "pure_power_slope", "slope " + fmt(slope) + " (band (-1.35, -1))");
    report(std::cout, ok_floor, "bound_state_floor", "full-kernel floor " + fmt(floor));
    ok = decreasing && ok_ratio && ok_slope && ok_floor;
  }
  write_json(dir / "decay.json", j);
  return ok ? exit_pass : exit_fail;
}

namespace {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

Check check_below(std::string name, double value, double tol) {
  return {std::move(name), value, tol, std::isfinite(value) && value < tol};
}

// Free completeness on x1, x2 <= xmax with the spectral weight scaled by weight_scale.
double free_completeness(int xmax, double weight_scale) {
  const double cutoff = spectral_cutoff(OperatorKind::free, 0.0, xmax);
  const auto panels = spectral_mesh(OperatorKind::free, xmax, cutoff, MeshConfig{});
  const quad::Rule& ref = quad::gauss_legendre(24);
  std::vector<double> gram(static_cast<std::size_t>((xmax + 1) * (xmax + 1)), 0.0);
  for (const auto& p : panels) {
    const quad::Rule r = quad::mapped(ref, p.a, p.b);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double l = r.nodes[i];
      const auto phi = phi_real(l, xmax);
      const double w = r.weights[i] * weight_scale * weight_free(l);
      for (int a = 0; a <= xmax; ++a)
        for (int b = 0; b <= xmax; ++b)
          gram[static_cast<std::size_t>(a * (xmax + 1) + b)] += w * phi[static_cast<std::size_t>(a)] * phi[static_cast<std::size_t>(b)];
    }
  }
  double worst = 0.0;
  for (int a = 0; a <= xmax; ++a)
    for (int b = 0; b <= xmax; ++b)
      worst = std::max(worst, std::abs(gram[static_cast<std::size_t>(a * (xmax + 1) + b)] - (a == b ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

int cmd_verify(const RunConfig& cfg) {
  apply_threads(cfg);
  const std::string fault = cfg.str("inject_fault");
  if (fault != "none" && fault != "weight") throw UsageError("inject_fault must be 'none' or 'weight'");
  const double q = require_real(cfg, "q", 1e-6, 1e6);
  const double kappa = require_real(cfg, "kappa", 1e-6, 1e6);
  const auto seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  const auto dir = prepare_out(cfg);
  std::mt19937_64 rng(seed);

  std::vector<Check> checks;
  checks.push_back(check_below("free_completeness_x<=10", free_completeness(10, fault == "weight" ? 1.001 : 1.0), 1e-9));

  {
    double worst = 0.0;
    for (int x1 = 0; x1 <= 4; ++x1)
      for (int x2 = 0; x2 <= 4; ++x2)
        worst = std::max(worst, completeness_check(OperatorKind::perturbed, q, x1, x2));
    checks.push_back(check_below("perturbed_completeness_x<=4", worst, 1e-9));
  }

  {
    std::uniform_int_distribution<int> len(1, 13);
    std::uniform_int_distribution<std::int64_t> val(-1000, 1000);
    long bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::int64_t> v(static_cast<std::size_t>(len(rng)));
      for (auto& e : v) e = val(rng);
      const auto tv = binomial_transform_exact(v, v.size() - 1);
      const auto ttv = binomial_transform_exact(tv, v.size() - 1);
      if (ttv != v) ++bad;
    }
    checks.push_back(check_below("binomial_involution_failures", static_cast<double>(bad), 0.5));
  }

  {
    double worst = 0.0;
    for (cplx z : {cplx(-1.0, 0.0), cplx(1.0, 1.0), cplx(3.0, -2.0)}) {
      const LatticeVector psi = psi_resolvent(ComplexEnergy::off(z), 31);
      const LatticeVector lp = apply_L0(psi);
      for (int x = 0; x <= 30; ++x) {
        const auto i = static_cast<std::size_t>(x);
        worst = std::max(worst, std::abs(lp[i] - z * psi[i] - (x == 0 ? 1.0 : 0.0)));
      }
    }
    checks.push_back(check_below("resolvent_identity", worst, 1e-9));
  }

  {
    const BoundState bs = bound_state_solve(1.0);
    checks.push_back(check_below("bound_state_secular_q=1", bs.secular_residual, 1e-12));
    checks.push_back({"bound_state_bracket_q=1", bs.lambda0, -0.4, bs.lambda0 > -0.5 && bs.lambda0 < -0.4});
    checks.push_back(check_below("bound_state_truncated_N=500", bound_state_truncated_residual(bs, 500), 1e-8));
  }

  {
    double worst = 0.0;
    for (double l : {0.1, 1.0, 10.0}) {
      const LatticeVector u = phi_perturbed(l, 1.0, 41);
      const LatticeVector lu = apply_L(u, 1.0);
      double scale = 0.0;
      for (int x = 0; x <= 40; ++x) scale = std::max(scale, std::abs(u[static_cast<std::size_t>(x)]));
      for (int x = 0; x <= 40; ++x) {
        const auto i = static_cast<std::size_t>(x);
        worst = std::max(worst, std::abs(lu[i] - l * u[i]) / std::max(1.0, scale));
      }
    }
    checks.push_back(check_below("perturbed_eigen_residual", worst, 1e-8));
  }

  {
    double worst = 0.0;
    for (double t : {1.0, 5.0, 20.0})
      worst = std::max(worst, std::abs(kernel_free(t, 0, 0) - 1.0 / cplx(1.0, t)));
    checks.push_back(check_below("free_kernel_closed_form", worst, 1e-8));
  }

  {
    const ConstantCheck cc = constant_bound_check({1.0, 10.0, 100.0}, 10, kappa);
    checks.push_back(check_below("free_constant_bound_violations", static_cast<double>(cc.violations), 0.5));
  }

  {
    std::uniform_int_distribution<int> xv(0, 5);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int x_v = xv(rng);
      LatticeVector v(static_cast<std::size_t>(x_v) + 1);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = val(rng);
      v[static_cast<std::size_t>(x_v)] = 1.0;
      for (const auto& e : semi_analytic_bound_report(v, 10).entries) worst = std::max(worst, e.ratio);
    }
    checks.push_back(check_below("semi_analytic_bound_worst_ratio", worst, 1.0));
  }

  {
    const GFactor g = g_factor(1e-8, 2.0);
    const double l = std::log(1e-8);
    checks.push_back(check_below("g_threshold_limit_q=2", std::abs(g.value * l * l * 4.0 - 1.0), 0.1));
  }

  bool ok = true;
  json jc = json::array();
  for (const auto& c : checks) {
    ok = ok && c.pass;
    report(std::cout, c.pass, c.name, "value " + fmt(c.value) + " tol " + fmt(c.tolerance));
    jc.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  write_json(dir / "verify.json", {{"command", "verify"}, {"config", cfg.to_json()}, {"checks", jc}, {"pass", ok}});
  std::cout << (ok ? "all checks passed" : "verification FAILED") << '\n';
  return ok ? exit_pass : exit_fail;
}

}  // namespace jacobi::cli
