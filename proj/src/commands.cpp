#include "decaylab/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "decaylab/analysis.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/initial_data.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/picard.hpp"
#include "decaylab/quadrature.hpp"
#include "decaylab/radial.hpp"
#include "decaylab/representation.hpp"
#include "decaylab/semigroup.hpp"

namespace decaylab::commands {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num_tag(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string csv_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

ojson jnum(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

ojson bound_details(const BoundReport& r) {
  ojson d;
  d["sup_ratio"] = jnum(r.sup_ratio);
  d["budget"] = jnum(r.budget);
  d["trend"] = jnum(r.trend);
  d["trend_tolerance"] = r.trend_tolerance;
  d["mode"] = r.mode == TrendMode::Stable ? "stable" : "no_growth";
  ojson am = ojson::array();
  for (double v : r.argmax) am.push_back(jnum(v));
  d["argmax"] = am;
  return d;
}

CheckResult bound_check(const std::string& id, const std::string& statement, const BoundReport& r,
                        bool negative_control = false) {
  CheckResult c;
  c.id = id;
  c.statement = statement;
  c.kind = "bound";
  c.measured = r.sup_ratio;
  c.predicted = r.budget;
  c.tolerance = r.trend_tolerance;
  c.probes = r.probe_count;
  c.negative_control = negative_control;
  c.details = bound_details(r);
  c.finish(r.pass);
  return c;
}

/// Slope check that turns fit preconditions into a failed check.
CheckResult slope_check(const std::string& id, const std::string& statement, const analysis::DecaySeries& s,
                        double lo, double hi, bool log_corrected, double predicted, double tol) {
  CheckResult c;
  c.id = id;
  c.statement = statement;
  c.kind = "slope";
  c.predicted = predicted;
  c.tolerance = tol;
  c.probes = s.points.size();
  try {
    const analysis::ExponentFit f = analysis::fit_decay_exponent(s, lo, hi, log_corrected);
    c.measured = f.slope;
    c.details["rms_residual"] = f.rms_residual;
    c.details["window"] = {f.window_lo, f.window_hi};
    c.details["points_in_window"] = f.points;
    c.details["log_corrected"] = log_corrected;
    c.finish(std::abs(f.slope - predicted) <= tol);
  } catch (const DomainError& e) {
    c.measured = std::numeric_limits<double>::quiet_NaN();
    c.details["error"] = e.what();
    c.finish(false);
  }
  return c;
}

std::vector<Vec3> random_points(int n, double rmin, double rmax, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0), rad(rmin, rmax);
  std::vector<Vec3> pts;
  while (static_cast<int>(pts.size()) < n) {
    Vec3 d{u(gen), u(gen), u(gen)};
    const double nd = norm(d);
    if (nd < 0.1 || nd > 1.0) continue;
    pts.push_back((rad(gen) / nd) * d);
  }
  return pts;
}

Vec3 shifted(Vec3 x, int axis, double h) {
  x[axis] += h;
  return x;
}

double fd_step(const Vec3& x, double t) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(norm(x), std::sqrt(t));
}

kernels::EnvelopeProbe envelope_probe(const Config& cfg) {
  kernels::EnvelopeProbe p;
  p.r_min = cfg.get_double("kernels.envelope_r_min", p.r_min);
  p.r_max = cfg.get_double("kernels.envelope_r_max", p.r_max);
  p.t_min = cfg.get_double("kernels.envelope_t_min", p.t_min);
  p.t_max = cfg.get_double("kernels.envelope_t_max", p.t_max);
  p.r_count = static_cast<std::size_t>(cfg.get_int("kernels.envelope_count", static_cast<int>(p.r_count)));
  p.t_count = p.r_count;
  return p;
}

double heat_value(const RadialProfile& p, double r, double t) {
  return radial::radial_heat_oracle([&](double s) { return p.amplitude(s); }, r, t);
}

double predicted_heat_slope(double alpha, double q) { return -0.5 * alpha + (std::isinf(q) ? 0.0 : 1.5 / q); }

GridSpec grid_from(const Config& cfg, const std::string& prefix, GridSpec fallback) {
  GridSpec g{cfg.get_int(prefix + ".N", fallback.N), cfg.get_double(prefix + ".L", fallback.L)};
  try {
    g.validate();
  } catch (const GridError& e) {
    throw ConfigError(prefix + ": " + e.what());
  }
  return g;
}

}  // namespace

int CommandOutput::exit_code() const {
  if (non_convergence) return kNonConvergence;
  for (const auto& c : checks)
    if (!c.pass) return kCheckFailure;
  return kPass;
}

double budget_for(const Config& budgets, const std::string& id) {
  if (!budgets.has(id)) throw ConfigError("budgets: no entry for " + id);
  return budgets.get_double(id, 0.0);
}

// ---------------------------------------------------------------------------------------------
// verify-kernels

CommandOutput verify_kernels(const Config& cfg, const Config& budgets, const std::string& out_dir) {
  CommandOutput out;
  const auto mass_times = cfg.get_list("kernels.mass_times", {0.01, 1.0, 100.0});
  const int npts = cfg.get_int("kernels.points", 20);
  const unsigned seed = static_cast<unsigned>(cfg.get_int("kernels.seed", 7));
  const double t = cfg.get_double("kernels.t", 1.0);
  const kernels::KernelOptions kopt{cfg.get_double("kernels.series_threshold", 1.0)};

  {
    Stopwatch sw;
    CheckResult c;
    c.id = "kernels.mass";
    c.statement = "int Gamma(x,t) dx = 1";
    c.kind = "residual";
    c.tolerance = cfg.get_double("kernels.mass_tol", 1e-8);
    double worst = 0.0;
    for (double tm : mass_times) {
      const double st = std::sqrt(tm);
      auto f = [tm](double r) { return 4.0 * kPi * r * r * kernels::heat_kernel({r, 0.0, 0.0}, tm); };
      const AdaptiveResult r = adaptive_integrate(f, {0.0, st, 3.0 * st, 10.0 * st, 60.0 * st}, 1e-15, 1e-13);
      worst = std::max(worst, std::abs(r.value - 1.0));
      c.details["mass_t" + num_tag(tm)] = r.value;
    }
    c.measured = worst;
    c.probes = mass_times.size();
    c.parameters["times"] = mass_times;
    c.runtime_s = sw.seconds();
    c.finish(worst <= c.tolerance);
    out.checks.push_back(c);
  }

  const auto pts = random_points(npts, 0.1 * std::sqrt(t), 3.0 * std::sqrt(t), seed);
  {
    Stopwatch sw;
    CheckResult c;
    c.id = "kernels.laplacian";
    c.statement = "Laplacian omega(x,t) = Gamma(x,t), x != 0";
    c.kind = "residual";
    c.tolerance = cfg.get_double("kernels.laplacian_tol", 1e-6);
    double worst = 0.0;
    for (const Vec3& x : pts) {
      const double h = fd_step(x, t);
      double lap = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double p = kernels::omega_kernel(shifted(x, a, h), t, kernels::KernelOrder(1), kopt)(a);
        const double m = kernels::omega_kernel(shifted(x, a, -h), t, kernels::KernelOrder(1), kopt)(a);
        lap += (p - m) / (2.0 * h);
      }
      const double g = kernels::heat_kernel(x, t);
      worst = std::max(worst, std::abs(lap - g) / g);
    }
    c.measured = worst;
    c.probes = pts.size();
    c.parameters = {{"t", t}, {"points", npts}, {"seed", seed}};
    c.runtime_s = sw.seconds();
    c.finish(worst <= c.tolerance);
    out.checks.push_back(c);
  }
  {
    Stopwatch sw;
    CheckResult c;
    c.id = "kernels.divergence";
    c.statement = "d_j G_ij(x,t) = 0";
    c.kind = "residual";
    c.tolerance = cfg.get_double("kernels.divergence_tol", 1e-6);
    double worst = 0.0, worst_exact = 0.0;
    for (const Vec3& x : pts) {
      const double h = fd_step(x, t);
      const Tensor g = kernels::oseen_tensor(x, t, 0, kopt);
      const Tensor dg = kernels::oseen_tensor(x, t, 1, kopt);
      const double scale = g.frobenius() / std::max(norm(x), std::sqrt(t));
      for (int i = 0; i < 3; ++i) {
        double div_fd = 0.0, div_exact = 0.0;
        for (int j = 0; j < 3; ++j) {
          div_fd += (kernels::oseen_tensor(shifted(x, j, h), t, 0, kopt)(i, j) -
                     kernels::oseen_tensor(shifted(x, j, -h), t, 0, kopt)(i, j)) /
                    (2.0 * h);
          div_exact += dg(i, j, j);
        }
        worst = std::max(worst, std::abs(div_fd) / scale);
        worst_exact = std::max(worst_exact, std::abs(div_exact) / scale);
      }
    }
    c.measured = worst;
    c.probes = pts.size();
    c.details["analytic_gradient_trace"] = worst_exact;
    c.parameters = {{"t", t}, {"points", npts}, {"seed", seed}};
    c.runtime_s = sw.seconds();
    c.finish(worst <= c.tolerance);
    out.checks.push_back(c);
  }
  {
    Stopwatch sw;
    CheckResult c;
    c.id = "kernels.parabolic_scaling";
    c.statement = "K(lambda x, lambda^2 t) = lambda^{-d} K(x,t) for Gamma (d=3), omega (d=1), G (d=3)";
    c.kind = "residual";
    c.tolerance = cfg.get_double("kernels.scaling_tol", 1e-12);
    std::mt19937_64 gen(seed + 1);
    std::uniform_real_distribution<double> lam_d(0.2, 5.0), t_d(0.05, 5.0);
    double worst = 0.0;
    for (const Vec3& x0 : random_points(npts, 0.05, 5.0, seed + 2)) {
      const double lam = lam_d(gen), ts = t_d(gen);
      const Vec3 y = lam * x0;
      const double t2 = lam * lam * ts, l3 = lam * lam * lam;
      const double g0 = kernels::heat_kernel(x0, ts) / l3;
      worst = std::max(worst, std::abs(kernels::heat_kernel(y, t2) - g0) / g0);
      const double w0 = kernels::omega(x0, ts, kopt) / lam;
      worst = std::max(worst, std::abs(kernels::omega(y, t2, kopt) - w0) / std::abs(w0));
      const Tensor a = kernels::oseen_tensor(y, t2, 0, kopt), b = kernels::oseen_tensor(x0, ts, 0, kopt);
      for (int e = 0; e < 9; ++e)
        worst = std::max(worst, std::abs(a.data[e] - b.data[e] / l3) / (b.frobenius() / l3));
    }
    c.measured = worst;
    c.probes = static_cast<std::size_t>(npts);
    c.runtime_s = sw.seconds();
    c.finish(worst <= c.tolerance);
    out.checks.push_back(c);
  }

  const kernels::EnvelopeProbe probe = envelope_probe(cfg);
  for (int k = 0; k <= 3; ++k) {
    Stopwatch sw;
    const std::string id = "kernels.envelope.k" + std::to_string(k);
    const BoundReport r = kernels::kernel_envelope_report(kernels::KernelOrder(k), probe, budget_for(budgets, id));
    CheckResult c = bound_check(id, "|D^k omega(x,t)| <= C (|x| + sqrt t)^{-1-k}", r);
    c.parameters = {{"order", k}, {"r_range", {probe.r_min, probe.r_max}}, {"t_range", {probe.t_min, probe.t_max}}};
    c.runtime_s = sw.seconds();
    out.checks.push_back(c);
  }
  {
    Stopwatch sw;
    const std::string id = "kernels.envelope.negative_control";
    const BoundReport r = kernels::envelope_report(
        [](const Vec3& x, double tt) { return kernels::heat_kernel(x, tt); }, 4.0, probe, budget_for(budgets, id));
    CheckResult c = bound_check(id, "Gamma(x,t) <= C (|x| + sqrt t)^{-4} (false)", r, true);
    c.runtime_s = sw.seconds();
    out.checks.push_back(c);
  }
  (void)out_dir;
  return out;
}

// ---------------------------------------------------------------------------------------------
// heat-decay

CommandOutput heat_decay(const Config& cfg, const Config& budgets, const std::string& out_dir) {
  CommandOutput out;
  const auto pairs = cfg.get_pairs("heat.pairs", {{1.0, kInf}, {2.0, kInf}, {2.0, 3.0}, {2.5, 2.0}, {3.0, kInf}});
  const double m0 = cfg.get_double("heat.m0", 1.0);
  const double t_lo = cfg.get_double("heat.t_lo", 10.0), t_hi = cfg.get_double("heat.t_hi", 1000.0);
  const auto times = log_space(t_lo, t_hi, static_cast<std::size_t>(cfg.get_int("heat.t_count", 25)));
  const double tol = cfg.get_double("heat.slope_tol", 0.05);

  std::unique_ptr<CsvWriter> csv;
  if (!out_dir.empty()) csv = std::make_unique<CsvWriter>(csv_path(out_dir, "heat_decay_series.csv"),
                                                          std::vector<std::string>{"alpha", "q", "t", "norm"});
  analysis::DecaySeries sup3;
  for (const auto& [alpha, q] : pairs) {
    Stopwatch sw;
    const RadialProfile profile{alpha, m0};
    profile.validate();
    analysis::DecaySeries s;
    s.descriptor = "||U(t)||_q";
    s.provenance = "radial oracle";
    for (double t : times) {
      const double v =
          radial::scalar_lq_norm([&](double r) { return heat_value(profile, r, t); }, q, t, alpha).value;
      s.push(t, v);
      if (csv) csv->cell(alpha).cell(q).cell(t).cell(v).end_row();
    }
    if (alpha == 3.0 && std::isinf(q)) sup3 = s;
    const bool log_corr = alpha == 3.0;
    CheckResult c = slope_check("heat.slope.alpha" + num_tag(alpha) + "_q" + num_tag(q),
                                log_corr ? "||e^{t Delta} u0||_q ~ (1+t)^{-3/2 + 3/(2q)} ln(2+t)"
                                         : "||e^{t Delta} u0||_q ~ (1+t)^{-alpha/2 + 3/(2q)}",
                                s, t_lo, t_hi, log_corr, predicted_heat_slope(alpha, q), tol);
    c.parameters = {{"alpha", alpha}, {"q", jnum(q)}, {"m0", m0}, {"t_range", {t_lo, t_hi}}};
    c.runtime_s = sw.seconds();
    out.checks.push_back(c);
  }
  if (csv) csv->save();

  // log dichotomy at alpha = 3
  {
    Stopwatch sw;
    if (sup3.points.empty()) {
      const RadialProfile profile{3.0, m0};
      for (double t : times)
        sup3.push(t, radial::scalar_lq_norm([&](double r) { return heat_value(profile, r, t); }, kInf, t, 3.0).value);
    }
    std::vector<BoundSample> plain, corrected;
    for (const auto& [t, v] : sup3.points) {
      plain.push_back({t, v * std::pow(t, 1.5), {t}});
      corrected.push_back({t, v * std::pow(t, 1.5) / std::log(2.0 + t), {t}});
    }
    const double min_trend = cfg.get_double("heat.log_trend_min", 0.05);
    const double stable_tol = cfg.get_double("heat.log_trend_tol", 0.02);
    const BoundReport rp = make_bound_report(plain, kInf, stable_tol, TrendMode::NoGrowth);
    CheckResult c;
    c.id = "heat.log_dichotomy.growth";
    c.statement = "||U(t)||_inf t^{3/2} grows at alpha = 3";
    c.kind = "trend";
    c.measured = rp.trend;
    c.predicted = min_trend;
    c.tolerance = 0.0;
    c.probes = plain.size();
    c.details = bound_details(rp);
    c.parameters = {{"alpha", 3.0}, {"t_range", {t_lo, t_hi}}};
    c.finish(rp.trend > min_trend);
    c.runtime_s = sw.seconds();
    out.checks.push_back(c);

    const BoundReport rc = make_bound_report(corrected, kInf, stable_tol, TrendMode::Stable);
    CheckResult d;
    d.id = "heat.log_dichotomy.corrected";
    d.statement = "||U(t)||_inf t^{3/2} / ln(2+t) is decade-stable at alpha = 3";
    d.kind = "trend";
    d.measured = rc.trend;
    d.predicted = 0.0;
    d.tolerance = stable_tol;
    d.probes = corrected.size();
    d.details = bound_details(rc);
    d.parameters = c.parameters;
    d.finish(std::abs(rc.trend) <= stable_tol);
    out.checks.push_back(d);
  }

  // pointwise envelopes
  const double delta = cfg.get_double("heat.delta", 0.1);
  const auto alphas = cfg.get_list("heat.envelope_alphas", {1.0, 2.0, 3.0});
  const std::size_t nr = static_cast<std::size_t>(cfg.get_int("heat.envelope_count", 25));
  for (double alpha : alphas) {
    Stopwatch sw;
    const bool high = alpha > 2.0;
    const auto probes = high ? analysis::RadialProbeGrid::log_grid(cfg.get_double("heat.envelope_high_r_min", 1.0),
                                                                   cfg.get_double("heat.envelope_high_r_max", 1e5), nr,
                                                                   cfg.get_double("heat.envelope_high_t_min", 1.0),
                                                                   cfg.get_double("heat.envelope_high_t_max", 1e10), nr)
                             : analysis::RadialProbeGrid::log_grid(cfg.get_double("heat.envelope_r_min", 0.1),
                                                                   cfg.get_double("heat.envelope_r_max", 1e4), nr,
                                                                   cfg.get_double("heat.envelope_t_min", 0.1),
                                                                   cfg.get_double("heat.envelope_t_max", 1e6), nr);
    const RadialProfile profile{alpha, m0};
    const std::string id = "heat.pointwise.alpha" + num_tag(alpha);
    const double budget = budget_for(budgets, id);
    const BoundReport r = analysis::verify_pointwise_envelope(profile, probes, delta, budget);
    CheckResult c = bound_check(id, high ? "|U(x,t)| <= C (1+|x|+sqrt t)^{-alpha+delta}" : "|U(x,t)| <= C (1+|x|+sqrt t)^{-alpha}", r);
    c.parameters = {{"alpha", alpha}, {"delta", high ? delta : 0.0}, {"exponent", analysis::pointwise_exponent(alpha, delta)}};
    c.runtime_s = sw.seconds();
    out.checks.push_back(c);
    if (alpha == 3.0) {
      // sup over r = theta sqrt t at each t, so every scale sees the extremal shape
      Stopwatch sw2;
      const auto ts = log_space(cfg.get_double("heat.envelope_high_t_min", 1.0),
                                cfg.get_double("heat.envelope_high_t_max", 1e10), nr);
      const auto thetas = log_space(1e-3, 10.0, static_cast<std::size_t>(cfg.get_int("heat.shape_count", 60)));
      std::vector<BoundSample> weak, strong;
      for (double tt : ts) {
        const double st = std::sqrt(tt);
        double best0 = heat_value(profile, 0.0, tt) * std::pow(1.0 + st, 3.0), best_r = 0.0;
        for (double th : thetas) {
          const double r = th * st;
          const double v = heat_value(profile, r, tt) * std::pow(1.0 + r + st, 3.0);
          if (v > best0) {
            best0 = v;
            best_r = r;
          }
        }
        strong.push_back({1.0 + st, best0, {best_r, tt}});
        weak.push_back({1.0 + st, best0 * std::pow(1.0 + best_r + st, -delta), {best_r, tt}});
      }
      const std::string wid = "heat.pointwise.alpha3_shape_sup";
      CheckResult w = bound_check(wid, "sup_x |U(x,t)| (1+|x|+sqrt t)^{3-delta} bounded in t at alpha = 3",
                                  make_bound_report(weak, budget_for(budgets, wid)));
      w.parameters = {{"alpha", 3.0}, {"delta", delta}};
      out.checks.push_back(w);
      const std::string nid = "heat.pointwise.alpha3_unweakened.negative_control";
      CheckResult d = bound_check(nid, "sup_x |U(x,t)| (1+|x|+sqrt t)^{3} bounded in t at alpha = 3 (false)",
                                  make_bound_report(strong, budget_for(budgets, nid)), true);
      d.parameters = {{"alpha", 3.0}, {"delta", 0.0}};
      d.runtime_s = sw2.seconds();
      out.checks.push_back(d);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// gradient-decay

CommandOutput gradient_decay(const Config& cfg, const Config& budgets, const std::string& out_dir) {
  (void)budgets;
  CommandOutput out;
  const auto pairs = cfg.get_pairs("gradient.pairs", {{1.0, 3.0}, {2.0, 3.0}, {1.0, 4.0}});
  const GridSpec grid = grid_from(cfg, "gradient", GridSpec{128, 256.0});
  const double m0 = cfg.get_double("gradient.m0", 1.0);
  const double t_lo = cfg.get_double("gradient.t_lo", std::max(10.0, std::pow(2.0 * grid.h(), 2)));
  const double t_hi = cfg.get_double("gradient.t_hi", 0.99 * std::pow(0.2 * grid.L, 2));
  const std::size_t nt = static_cast<std::size_t>(cfg.get_int("gradient.t_count", 16));
  const double tol = cfg.get_double("gradient.slope_tol", 0.07);
  try {
    grid.require_resolves(t_lo);
  } catch (const GridError& e) {
    throw ConfigError(std::string("gradient: ") + e.what());
  }
  if (std::sqrt(t_hi) > 0.2 * grid.L) throw ConfigError("gradient: sqrt(t_hi) exceeds 0.2 L");
  const auto times = log_space(t_lo, t_hi, nt);

  std::unique_ptr<CsvWriter> csv;
  if (!out_dir.empty()) csv = std::make_unique<CsvWriter>(csv_path(out_dir, "gradient_decay_series.csv"),
                                                          std::vector<std::string>{"alpha", "q", "t", "grad_norm"});
  std::vector<double> alphas;
  for (const auto& p : pairs)
    if (std::find(alphas.begin(), alphas.end(), p.first) == alphas.end()) alphas.push_back(p.first);

  const Spectral sp(grid);
  for (double alpha : alphas) {
    Stopwatch sw;
    std::vector<double> qs;
    for (const auto& p : pairs)
      if (p.first == alpha) qs.push_back(p.second);
    const InitialField field = make_slow_decay_field(RadialProfile{alpha, m0});
    const GridField u0 = semigroup::leray_project(sample_to_grid(field, grid));
    const SpectralField u0_hat = sp.forward(u0);
    std::vector<analysis::DecaySeries> series(qs.size());
    std::array<RealArray, 9> grad;
    RealArray mag = sp.make_real();
    for (double t : times) {
      SpectralField s = u0_hat;
      semigroup::heat_multiply(sp, s, t);
      semigroup::spectral_gradient(sp, s, grad);
      for (std::size_t p = 0; p < mag.size(); ++p) {
        double s2 = 0.0;
        for (const auto& g : grad) s2 += g[p] * g[p];
        mag[p] = std::sqrt(s2);
      }
      for (std::size_t i = 0; i < qs.size(); ++i) {
        semigroup::NormProbe pr;
        pr.q = qs[i];
        const double v = semigroup::magnitude_norm(grid, mag, pr).value;
        series[i].push(t, v);
        if (csv) csv->cell(alpha).cell(qs[i]).cell(t).cell(v).end_row();
      }
    }
    const double elapsed = sw.seconds();
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const double q = qs[i];
      const bool high_q = q > 3.0;
      const double predicted = high_q ? -0.5 * alpha : -0.5 - 0.5 * alpha + 1.5 / q;
      CheckResult c = slope_check("gradient.slope.alpha" + num_tag(alpha) + "_q" + num_tag(q),
                                  high_q ? "||grad e^{t Delta} u0||_q <= C t^{-alpha/2}, t >= 1, q > 3"
                                         : "||grad e^{t Delta} u0||_q <= C t^{-1/2} (1+t)^{-alpha/2 + 3/(2q)}",
                                  series[i], t_lo, t_hi, false, predicted, tol);
      c.parameters = {{"alpha", alpha}, {"q", q}, {"N", grid.N}, {"L", grid.L}, {"t_range", {t_lo, t_hi}}};
      c.details["sharp_slope"] = -0.5 - 0.5 * alpha + 1.5 / q;
      c.runtime_s = elapsed / static_cast<double>(qs.size());
      out.checks.push_back(c);
      if (high_q) {
        // the q > 3 rate is an upper bound: decay at least as fast is consistent with it
        CheckResult b = c;
        b.id = "gradient.bound.alpha" + num_tag(alpha) + "_q" + num_tag(q);
        b.statement = "fitted slope of ||grad e^{t Delta} u0||_q <= -alpha/2 + tol, q > 3";
        b.kind = "slope_bound";
        b.finish(std::isfinite(c.measured) && c.measured <= predicted + tol);
        out.checks.push_back(b);
      }
    }
  }
  if (csv) csv->save();
  return out;
}

// ---------------------------------------------------------------------------------------------
// certify-inequalities

CommandOutput certify_inequalities(const Config& cfg, const Config& budgets, const std::string& out_dir) {
  CommandOutput out;
  const double t_max = cfg.get_double("certify.t_max", 1e6);
  const auto tgrid = log_space(cfg.get_double("certify.t_min", 1e-2), t_max,
                               static_cast<std::size_t>(cfg.get_int("certify.t_count", 81)));
  const double delta = cfg.get_double("certify.delta", 0.1);
  const auto a_values = cfg.get_list("certify.a_values", {2.0, 1.0, 0.75});
  const auto alphas = cfg.get_list("certify.alphas", {2.0, 3.0});
  for (double alpha : alphas)
    for (double a : a_values) {
      Stopwatch sw;
      const std::string id = "certify.time.a" + num_tag(a) + "_alpha" + num_tag(alpha);
      const BoundReport r = analysis::certify_time_integral(a, alpha, tgrid, budget_for(budgets, id), delta);
      CheckResult c = bound_check(id, "int_0^t (1+tau)^{-a} ln^{[alpha=3]}(2+tau) dtau <= C envelope(a, alpha, t)", r);
      c.parameters = {{"a", a}, {"alpha", alpha}, {"delta", delta}, {"t_max", t_max}};
      c.runtime_s = sw.seconds();
      out.checks.push_back(c);
    }
  {
    Stopwatch sw;
    const std::string id = "certify.time.negative_control";
    const auto I = analysis::time_integral(0.5, 2.0, tgrid);
    std::vector<BoundSample> s;
    for (std::size_t i = 0; i < tgrid.size(); ++i) s.push_back({tgrid[i], I[i] / std::pow(tgrid[i], 0.25), {tgrid[i]}});
    CheckResult c = bound_check(id, "int_0^t (1+tau)^{-1/2} dtau <= C t^{1/4} (false)",
                                make_bound_report(s, budget_for(budgets, id)), true);
    c.runtime_s = sw.seconds();
    out.checks.push_back(c);
  }

  // convolution inequality on a parameter grid
  const double A = cfg.get_double("certify.conv_A", 1.0);
  const auto ca = cfg.get_list("certify.conv_a", {0.5, 1.0, 1.5, 2.0, 2.5});
  const auto cb = cfg.get_list("certify.conv_b", {3.5, 4.0, 4.5, 5.0, 6.0});
  const auto cB = cfg.get_list("certify.conv_B", {0.25, 0.5, 1.0, 2.0, 4.0});
  const double r_max = cfg.get_double("certify.conv_r_max", 1e5);
  const auto r_probes = log_space(2.0 * A, r_max, static_cast<std::size_t>(cfg.get_int("certify.conv_r_count", 16)));
  const double scaling_tol = cfg.get_double("certify.scaling_tol", 0.2);
  {
    Stopwatch sw;
    const std::string id = "certify.convolution.grid";
    const double budget = budget_for(budgets, id);
    CheckResult c;
    c.id = id;
    c.statement = "int (|y|+A)^{-a} (|x-y|+B)^{-b} dy <= C |x|^{-a} B^{3-b}, b > 3 > a > 0, |x| >= 2A";
    c.kind = "bound";
    c.predicted = budget;
    bool all = true;
    double worst = 0.0, worst_trend = -kInf;
    ojson failures = ojson::array();
    std::unique_ptr<CsvWriter> csv;
    if (!out_dir.empty())
      csv = std::make_unique<CsvWriter>(csv_path(out_dir, "convolution_grid.csv"),
                                        std::vector<std::string>{"a", "b", "B", "sup_ratio", "trend", "pass"});
    for (double a : ca)
      for (double b : cb)
        for (double B : cB) {
          const BoundReport r = analysis::certify_convolution_bound(A, B, a, b, r_probes, budget);
          worst = std::max(worst, r.sup_ratio);
          worst_trend = std::max(worst_trend, r.trend);
          c.probes += r.probe_count;
          c.tolerance = r.trend_tolerance;
          if (!r.pass) {
            all = false;
            failures.push_back({{"a", a}, {"b", b}, {"B", B}, {"sup_ratio", r.sup_ratio}, {"trend", r.trend}});
          }
          if (csv) csv->cell(a).cell(b).cell(B).cell(r.sup_ratio).cell(r.trend).cell(r.pass ? "yes" : "no").end_row();
        }
    if (csv) csv->save();
    c.measured = worst;
    c.details["max_trend"] = worst_trend;
    c.details["failures"] = failures;
    c.parameters = {{"A", A}, {"a", ca}, {"b", cb}, {"B", cB}, {"r_max", r_max}};
    c.runtime_s = sw.seconds();
    c.finish(all);
    out.checks.push_back(c);
  }
  {
    Stopwatch sw;
    CheckResult c;
    c.id = "certify.convolution.B_scaling";
    c.statement = "d ln I / d ln B = 3 - b at large |x|";
    c.kind = "ratio";
    c.tolerance = scaling_tol;
    double worst = 0.0;
    ojson fits = ojson::array();
    for (double a : ca)
      for (double b : cb) {
        std::vector<double> x, y;
        for (double B : cB) {
          x.push_back(std::log(B));
          y.push_back(std::log(analysis::convolution_integral(A, B, a, b, r_max)));
        }
        const LineFit f = least_squares_line(x, y);
        const double rel = std::abs(f.slope - (3.0 - b)) / std::abs(3.0 - b);
        worst = std::max(worst, rel);
        fits.push_back({{"a", a}, {"b", b}, {"exponent", f.slope}, {"predicted", 3.0 - b}});
        c.probes += cB.size();
      }
    c.measured = worst;
    c.predicted = 0.0;
    c.details["fits"] = fits;
    c.parameters = {{"A", A}, {"r", r_max}};
    c.runtime_s = sw.seconds();
    c.finish(worst <= scaling_tol);
    out.checks.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// representation-check

CommandOutput representation_check(const Config& cfg, const Config& budgets, const std::string& out_dir) {
  (void)budgets;
  CommandOutput out;
  const double alpha = cfg.get_double("rep.alpha", 2.0);
  const double m0 = cfg.get_double("rep.m0", 1.0);
  const double t = cfg.get_double("rep.t", 1.0);
  const double radius = cfg.get_double("rep.radius", 10.0);
  const double tol = cfg.get_double("rep.tol", 1e-2);
  const double unit_tol = cfg.get_double("rep.unit_tol", 1e-6);
  analysis::RepresentationOptions opt;
  opt.radial_nodes = cfg.get_int("rep.radial_nodes", opt.radial_nodes);
  opt.polar_nodes = cfg.get_int("rep.polar_nodes", opt.polar_nodes);
  opt.time_nodes = cfg.get_int("rep.time_nodes", opt.time_nodes);
  opt.azimuthal_nodes = cfg.get_int("rep.azimuthal_nodes", opt.azimuthal_nodes);
  opt.direction_polar_nodes = cfg.get_int("rep.direction_polar_nodes", opt.direction_polar_nodes);
  opt.direction_azimuthal_nodes = cfg.get_int("rep.direction_azimuthal_nodes", opt.direction_azimuthal_nodes);

  const std::vector<Vec3> dirs{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 1}, {1, 2, 3}};
  std::vector<Vec3> probes;
  for (const Vec3& d : dirs) probes.push_back((radius / norm(d)) * d);
  const InitialField field = make_slow_decay_field(RadialProfile{alpha, m0});

  std::unique_ptr<CsvWriter> csv;
  if (!out_dir.empty())
    csv = std::make_unique<CsvWriter>(
        csv_path(out_dir, "representation.csv"),
        std::vector<std::string>{"case", "x1", "x2", "x3", "t", "lhs_norm", "i1_norm", "i4_norm", "inner_norm",
                                 "residual", "cutoff_residual"});
  auto record = [&](const std::string& name, const std::vector<analysis::RepresentationTerms>& rs) {
    if (!csv) return;
    for (const auto& r : rs)
      csv->cell(name).cell(r.x[0]).cell(r.x[1]).cell(r.x[2]).cell(r.t).cell(norm(r.lhs)).cell(norm(r.i1))
          .cell(norm(r.i4)).cell(norm(r.inner)).cell(r.residual).cell(r.cutoff_residual).end_row();
  };
  {
    Stopwatch sw;
    const auto rs = analysis::representation_residual(field, probes, t, opt);
    record("cutoff", rs);
    CheckResult c;
    c.id = "representation.cutoff";
    c.statement = "zeta u_i = I1 + I2 + I3 + I4 (whole space, zero forcing)";
    c.kind = "residual";
    c.tolerance = tol;
    double worst = 0.0, worst_cut = 0.0;
    for (const auto& r : rs) {
      worst = std::max(worst, r.residual);
      worst_cut = std::max(worst_cut, r.cutoff_residual);
    }
    c.measured = worst;
    c.probes = rs.size();
    c.details["max_cutoff_residual"] = worst_cut;
    c.parameters = {{"alpha", alpha}, {"t", t}, {"radius", radius}, {"r_in", opt.r_in}, {"r_out", opt.r_out}};
    c.runtime_s = sw.seconds();
    c.finish(worst <= tol);
    out.checks.push_back(c);
  }
  {
    Stopwatch sw;
    const double t2 = cfg.get_double("rep.balance_t", 10.0);
    const double r2 = cfg.get_double("rep.balance_radius", 8.0);
    std::vector<Vec3> near;
    for (const Vec3& d : dirs) near.push_back((r2 / norm(d)) * d);
    const auto rs = analysis::representation_residual(field, near, t2, opt);
    record("balance", rs);
    CheckResult c;
    c.id = "representation.cutoff_balance";
    c.statement = "int Gamma (1 - zeta) u0 = I2 + I3 + I4 where zeta(x) = 1";
    c.kind = "residual";
    c.tolerance = tol;
    double worst = 0.0;
    for (const auto& r : rs) worst = std::max(worst, r.cutoff_residual);
    c.measured = worst;
    c.probes = rs.size();
    c.parameters = {{"alpha", alpha}, {"t", t2}, {"radius", r2}};
    c.runtime_s = sw.seconds();
    c.finish(worst <= tol);
    out.checks.push_back(c);
  }
  {
    Stopwatch sw;
    analysis::RepresentationOptions unit = opt;
    unit.unit_cutoff = true;
    const auto rs = analysis::representation_residual(field, probes, t, unit);
    record("unit", rs);
    CheckResult c;
    c.id = "representation.unit_cutoff";
    c.statement = "zeta = 1: u_i = Gamma * u0_i";
    c.kind = "residual";
    c.tolerance = unit_tol;
    double worst = 0.0;
    for (const auto& r : rs) worst = std::max(worst, r.residual);
    c.measured = worst;
    c.probes = rs.size();
    c.parameters = {{"alpha", alpha}, {"t", t}, {"radius", radius}};
    c.runtime_s = sw.seconds();
    c.finish(worst <= unit_tol);
    out.checks.push_back(c);
  }
  {
    Stopwatch sw;
    const InitialField zero = make_slow_decay_field(RadialProfile{alpha, 0.0});
    const auto rs = analysis::representation_residual(zero, {probes.front()}, t, opt);
    CheckResult c;
    c.id = "representation.zero_data";
    c.statement = "u0 = 0 gives vanishing terms";
    c.kind = "residual";
    const auto& r = rs.front();
    c.measured = norm(r.i1) + norm(r.i2) + norm(r.i3) + norm(r.i4);
    c.probes = 1;
    c.runtime_s = sw.seconds();
    c.finish(c.measured == 0.0);
    out.checks.push_back(c);
  }
  if (csv) csv->save();
  return out;
}

// ---------------------------------------------------------------------------------------------
// navier-stokes

namespace {

picard::PicardConfig picard_config(const Config& cfg) {
  picard::PicardConfig p;
  p.alpha = cfg.get_double("ns.alpha", p.alpha);
  p.q = cfg.get_double("ns.q", p.q);
  p.grid = grid_from(cfg, "ns", p.grid);
  p.t_first = cfg.get_double("ns.t_first", p.t_first);
  p.t_final = cfg.get_double("ns.t_final", p.t_final);
  p.time_nodes = cfg.get_int("ns.time_nodes", p.time_nodes);
  p.max_iterations = cfg.get_int("ns.max_iterations", p.max_iterations);
  p.contraction_tolerance = cfg.get_double("ns.tolerance", p.contraction_tolerance);
  p.dealias = cfg.get_bool("ns.dealias", p.dealias);
  return p;
}

double effective_amplitude(const picard::PicardConfig& p) {
  const InitialField f = make_slow_decay_field(RadialProfile{p.alpha, p.m0});
  return effective_m0(f, log_space(0.1, 0.8 * p.grid.L, 200));
}

}  // namespace

CommandOutput navier_stokes(const Config& cfg, const Config& budgets, const std::string& out_dir) {
  CommandOutput out;
  picard::PicardConfig base = picard_config(cfg);
  base.m0 = 1.0;
  base.validate();

  double threshold = 0.0;
  ojson threshold_info;
  if (cfg.get_bool("ns.bisect", false)) {
    Stopwatch sw;
    const picard::ThresholdResult th =
        picard::bisect_threshold(base, cfg.get_double("ns.bisect_lo", 2.0), cfg.get_double("ns.bisect_hi", 32.0),
                                 cfg.get_int("ns.bisect_steps", 8), cfg.get_int("ns.bisect_levels", 3));
    threshold = th.threshold;
    ojson hist = ojson::array();
    for (const auto& [m, r] : th.history) hist.push_back({m, r});
    threshold_info = {{"source", "bisection"}, {"lower", th.lower}, {"upper", th.upper}, {"history", hist},
                      {"runtime_s", sw.seconds()}};
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      std::ofstream os(csv_path(out_dir, "threshold.cfg"));
      os << "# contraction threshold from bisection\nns.threshold = " << std::setprecision(10) << th.threshold << '\n';
    }
  } else {
    if (!cfg.has("ns.threshold")) throw ConfigError("navier-stokes: ns.threshold is required unless ns.bisect = 1");
    threshold = cfg.get_double("ns.threshold", 0.0);
    threshold_info = {{"source", "config"}};
  }
  if (!(threshold > 0.0)) throw ConfigError("navier-stokes: threshold must be positive");
  threshold_info["threshold"] = threshold;

  picard::PicardConfig pc = base;
  pc.m0 = cfg.get_double("ns.m0_fraction", 0.5) * threshold;
  const auto times = pc.time_grid();
  std::vector<std::size_t> snaps;
  const double env_t_min = cfg.get_double("ns.envelope_t_min", 1.0);
  const int env_every = cfg.get_int("ns.envelope_every", 6);
  for (std::size_t n = times.size(); n-- > 0;)
    if (times[n] >= env_t_min && (times.size() - 1 - n) % static_cast<std::size_t>(env_every) == 0) snaps.push_back(n);
  if (snaps.empty()) snaps.push_back(times.size() - 1);
  std::sort(snaps.begin(), snaps.end());

  Stopwatch main_sw;
  picard::Trajectory tr;
  try {
    tr = picard::run_picard(picard::initial_grid_field(pc), pc, picard::RunOptions{snaps});
  } catch (const SolverError& e) {
    out.non_convergence = true;
    out.note = std::string(e.what()) + "; rerun with --ns.bisect=1 to re-determine the threshold";
    return out;
  }
  const double main_runtime = main_sw.seconds();
  const picard::ContractionReport rep = picard::contraction_report(tr, pc);
  const ojson run_params = {{"alpha", pc.alpha}, {"q", pc.q}, {"m0", pc.m0}, {"threshold", threshold},
                            {"N", pc.grid.N}, {"L", pc.grid.L}, {"t_final", pc.t_final},
                            {"time_nodes", pc.time_nodes}, {"max_iterations", pc.max_iterations}};

  if (!out_dir.empty()) {
    picard::write_ledger_csv(tr, pc, csv_path(out_dir, "picard_ledger.csv"));
    CsvWriter c(csv_path(out_dir, "contraction.csv"), {"m", "difference_x_norm", "ratio"});
    for (std::size_t m = 0; m < rep.difference_norms.size(); ++m)
      c.cell(static_cast<double>(m)).cell(rep.difference_norms[m])
          .cell(m >= 1 && m - 1 < rep.ratios.size() ? rep.ratios[m - 1] : std::numeric_limits<double>::quiet_NaN())
          .end_row();
    c.save();
  }
  {
    CheckResult c;
    c.id = "ns.contraction";
    c.statement = "||V^(m)||_X <= 1/2 ||V^(m-1)||_X below the smallness threshold";
    c.kind = "ratio";
    c.measured = rep.max_ratio;
    c.predicted = 0.5;
    c.probes = rep.ratios.size();
    c.parameters = run_params;
    c.details["ratios"] = rep.ratios;
    c.details["difference_norms"] = rep.difference_norms;
    c.details["threshold"] = threshold_info;
    c.runtime_s = main_runtime;
    c.finish(!rep.ratios.empty() && rep.contracting);
    out.checks.push_back(c);
    if (rep.diverging || !rep.contracting) {
      out.non_convergence = true;
      out.note = "iteration does not contract at m0 = " + fmt(pc.m0) + "; rerun with --ns.bisect=1";
    }
  }
  {
    const int limit = cfg.get_int("ns.iteration_limit", 8);
    CheckResult c;
    c.id = "ns.converged_iterations";
    c.statement = "tail ||V^(m)||_X below tolerance within the iteration limit";
    c.kind = "count";
    c.measured = rep.converged_iterations;
    c.predicted = limit;
    c.tolerance = pc.contraction_tolerance;
    c.parameters = run_params;
    c.finish(rep.converged && rep.converged_iterations <= limit);
    out.checks.push_back(c);
  }
  {
    CheckResult c;
    c.id = "ns.uniform_boundedness";
    c.statement = "||u^(m)||_X <= 1.05 ||u^(1)||_X for m >= 2";
    c.kind = "ratio";
    const double x1 = picard::x_norm(tr.times, tr.iterates[1], pc.alpha, pc.q).x_norm;
    double worst = 0.0;
    ojson xs = ojson::array();
    for (int m = 0; m < tr.levels(); ++m) {
      const double xm = picard::x_norm(tr.times, tr.iterates[m], pc.alpha, pc.q).x_norm;
      xs.push_back(xm);
      if (m >= 2) worst = std::max(worst, xm / x1);
    }
    c.measured = worst;
    c.predicted = 1.05;
    c.probes = static_cast<std::size_t>(tr.levels());
    c.details["x_norms"] = xs;
    c.finish(worst <= 1.05);
    out.checks.push_back(c);
  }
  {
    CheckResult c;
    c.id = "ns.solenoidal";
    c.statement = "||div u^(m)||_2 <= 1e-10 ||grad u^(m)||_2 at every node";
    c.kind = "residual";
    c.measured = tr.max_divergence;
    c.tolerance = 1e-10;
    c.probes = tr.times.size() * static_cast<std::size_t>(tr.levels());
    c.finish(tr.max_divergence <= 1e-10);
    out.checks.push_back(c);
  }

  const auto& final_ledger = tr.iterates.back();
  const double trend_tol = cfg.get_double("ns.channel_trend_tol", 0.02);
  {
    const picard::ChannelReport ch = picard::channel_report(tr.times, final_ledger, pc, kInf, trend_tol);
    static const char* names[3] = {"linf", "lq", "grad"};
    static const char* statements[3] = {"sup_{s<=t} (1+s)^{alpha/2} ||u(s)||_inf bounded and decade-stable",
                                        "sup_{s<=t} (1+s)^{alpha/2 - 3/(2q)} ||u(s)||_q bounded and decade-stable",
                                        "sup_{s<=t} s^{1/2} (1+s)^{(alpha-1)/2} ||grad u(s)||_3 bounded and decade-stable"};
    for (int k = 0; k < 3; ++k) {
      const std::string id = std::string("ns.channel.") + names[k];
      const double budget = budget_for(budgets, id);
      // running supremum over [0, t]: the X-norm of the trajectory truncated at t
      std::vector<BoundSample> s, instant;
      double running = 0.0;
      for (const auto& [t, v] : ch.series[k].points) {
        running = std::max(running, v);
        s.push_back({t, running, {t}});
        instant.push_back({t, v, {t}});
      }
      const BoundReport r = make_bound_report(s, budget, trend_tol, TrendMode::Stable);
      CheckResult c = bound_check(id, statements[k], r);
      c.parameters = run_params;
      c.details["instant_trend"] = make_bound_report(instant, budget, trend_tol, TrendMode::Stable).trend;
      out.checks.push_back(c);
    }
    if (!out_dir.empty()) {
      CsvWriter c(csv_path(out_dir, "picard_channels.csv"), {"t", "weighted_linf", "weighted_lq", "weighted_grad"});
      for (std::size_t i = 0; i < ch.series[0].points.size(); ++i)
        c.cell(ch.series[0].points[i].first).cell(ch.series[0].points[i].second).cell(ch.series[1].points[i].second)
            .cell(ch.series[2].points[i].second).end_row();
      c.save();
    }
  }
  {
    analysis::DecaySeries s;
    for (std::size_t n = 0; n < tr.times.size(); ++n)
      if (tr.times[n] > 0.0) s.push(tr.times[n], final_ledger[n].linf);
    const bool crit = pc.alpha == 3.0;
    CheckResult c = slope_check("ns.slope.linf", "||u(t)||_inf ~ (1+t)^{-alpha/2}", s,
                                cfg.get_double("ns.fit_lo", 16.0), cfg.get_double("ns.fit_hi", pc.t_final), crit,
                                -0.5 * pc.alpha, cfg.get_double("ns.slope_tol", 0.07));
    c.parameters = run_params;
    out.checks.push_back(c);
  }
  {
    Stopwatch sw;
    std::vector<analysis::Snapshot> snapshots;
    for (const auto& [n, f] : tr.snapshots) snapshots.push_back({tr.times[n], &f});
    const std::string id = "ns.pointwise_envelope";
    const BoundReport r = analysis::verify_pointwise_envelope(snapshots, pc.alpha, cfg.get_double("ns.delta", 0.1),
                                                              budget_for(budgets, id));
    CheckResult c = bound_check(id, "|u(x,t)| <= C (1+|x|+sqrt t)^{-alpha} on the computed trajectory", r);
    c.parameters = run_params;
    c.details["snapshot_times"] = [&] {
      ojson a = ojson::array();
      for (const auto& s : snapshots) a.push_back(s.time);
      return a;
    }();
    c.runtime_s = sw.seconds();
    out.checks.push_back(c);
  }
  if (!out_dir.empty() && cfg.get_bool("ns.dump_fields", false)) {
    for (const auto& [n, f] : tr.snapshots) {
      std::ostringstream name;
      name << "ns_field_node" << std::setw(3) << std::setfill('0') << n << ".dclf";
      write_grid_field(f, csv_path(out_dir, name.str()));
    }
  }
  if (cfg.get_bool("ns.bilinear", true)) {
    Stopwatch sw;
    const auto& snap = tr.snapshots.begin()->second;
    const double tb = tr.times[tr.snapshots.begin()->first];
    const double t_hi = 0.99 * std::pow(0.2 * pc.grid.L, 2);
    const picard::BilinearProbe bp =
        picard::bilinear_decay_probe(snap, 2.0, 2.0, log_space(cfg.get_double("ns.bilinear_t_lo", 10.0), t_hi, 12));
    CheckResult c;
    c.id = "ns.bilinear.r2_q2";
    c.statement = "||e^{t Delta} P div F||_q <= c t^{-1/2 - (3/2)(1/r - 1/q)} ||F||_r, r = q = 2";
    c.kind = "slope";
    c.predicted = bp.predicted_slope;
    c.tolerance = cfg.get_double("ns.bilinear_tol", 0.05);
    c.probes = bp.series.points.size();
    try {
      const auto f = analysis::fit_decay_exponent(bp.series, bp.series.points.front().first,
                                                  bp.series.points.back().first, false);
      c.measured = f.slope;
      c.details["forcing_L2"] = bp.forcing_lr;
      c.details["snapshot_time"] = tb;
      // the lemma is an upper bound: the measured decay must be at least as fast
      c.finish(f.slope <= bp.predicted_slope + c.tolerance);
    } catch (const DomainError& e) {
      c.measured = std::numeric_limits<double>::quiet_NaN();
      c.details["error"] = e.what();
      c.finish(false);
    }
    c.runtime_s = sw.seconds();
    out.checks.push_back(c);
  }

  // smaller data: quadratic smallness, m0 -> 0 limit and stable X / M0 constant
  if (cfg.get_bool("ns.quadratic", true)) {
    Stopwatch sw;
    picard::PicardConfig half = pc;
    half.m0 = 0.5 * pc.m0;
    half.max_iterations = cfg.get_int("ns.quadratic_iterations", 6);
    picard::Trajectory th;
    try {
      th = picard::run_picard(picard::initial_grid_field(half), half);
    } catch (const SolverError& e) {
      out.non_convergence = true;
      out.note = e.what();
      return out;
    }
    const double gap_full = picard::x_norm(tr.times, tr.correction, pc.alpha, pc.q).x_norm;
    const double gap_half = picard::x_norm(th.times, th.correction, half.alpha, half.q).x_norm;
    const double x0_full = picard::x_norm(tr.times, tr.iterates[0], pc.alpha, pc.q).x_norm;
    const double x0_half = picard::x_norm(th.times, th.iterates[0], half.alpha, half.q).x_norm;
    const double elapsed = sw.seconds();
    {
      CheckResult c;
      c.id = "ns.quadratic_smallness";
      c.statement = "||u - u^(0)||_X = Theta(m0^2): halving m0 divides it by about 4";
      c.kind = "ratio";
      c.measured = gap_full / gap_half;
      c.predicted = 4.0;
      c.tolerance = 1.0;
      c.probes = 2;
      c.parameters = {{"m0", pc.m0}, {"m0_half", half.m0}};
      c.details = {{"gap_m0", gap_full}, {"gap_half", gap_half}};
      c.runtime_s = elapsed;
      c.finish(c.measured >= 3.0 && c.measured <= 5.0);
      out.checks.push_back(c);
    }
    {
      CheckResult c;
      c.id = "ns.heat_limit";
      c.statement = "relative gap ||u - u^(0)||_X / ||u^(0)||_X = O(m0)";
      c.kind = "ratio";
      c.measured = (gap_full / x0_full) / (gap_half / x0_half);
      c.predicted = 2.0;
      c.tolerance = 0.5;
      c.probes = 2;
      c.finish(std::abs(c.measured - 2.0) <= 0.5);
      out.checks.push_back(c);
    }
    {
      CheckResult c;
      c.id = "ns.x_norm_constant";
      c.statement = "||u||_X <= C M0 with C stable under halving m0";
      c.kind = "ratio";
      const double m_full = effective_amplitude(pc), m_half = effective_amplitude(half);
      const double c_full = picard::x_norm(tr.times, final_ledger, pc.alpha, pc.q).x_norm / m_full;
      const double c_half = picard::x_norm(th.times, th.iterates.back(), half.alpha, half.q).x_norm / m_half;
      c.measured = c_full / c_half;
      c.predicted = 1.0;
      c.tolerance = cfg.get_double("ns.constant_tol", 0.25);
      c.details = {{"C_m0", c_full}, {"C_half", c_half}, {"M0_eff", m_full}};
      c.probes = 2;
      c.finish(std::abs(c.measured - 1.0) <= c.tolerance);
      out.checks.push_back(c);
    }
  }

  // large data: non-contraction is reported, not fatal
  if (cfg.get_bool("ns.large", true)) {
    Stopwatch sw;
    picard::PicardConfig big = pc;
    big.m0 = cfg.get_double("ns.large_factor", 10.0) * threshold;
    big.max_iterations = cfg.get_int("ns.large_iterations", 3);
    CheckResult c;
    c.id = "ns.large_data.negative_control";
    c.statement = "iteration contracts at 10x the threshold (false)";
    c.kind = "ratio";
    c.predicted = 0.5;
    c.negative_control = true;
    try {
      const picard::Trajectory tb = picard::run_picard(picard::initial_grid_field(big), big);
      const picard::ContractionReport rb = picard::contraction_report(tb, big);
      c.measured = rb.max_ratio;
      c.details = {{"ratios", rb.ratios}, {"diverging", rb.diverging}, {"m0", big.m0}};
      c.finish(rb.contracting);
    } catch (const SolverError& e) {
      c.measured = kInf;
      c.details = {{"error", e.what()}, {"m0", big.m0}};
      c.finish(false);
    }
    c.runtime_s = sw.seconds();
    out.checks.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------

const std::vector<CommandInfo>& registry() {
  static const std::vector<CommandInfo> r{
      {"verify-kernels", "kernel identities and decay envelopes", &verify_kernels},
      {"heat-decay", "temporal rates, log dichotomy and pointwise envelopes of the heat flow", &heat_decay},
      {"gradient-decay", "gradient rates of the grid heat flow", &gradient_decay},
      {"certify-inequalities", "time-integral and convolution inequalities", &certify_inequalities},
      {"representation-check", "cutoff representation identity", &representation_check},
      {"navier-stokes", "Picard iteration, weighted norms and contraction", &navier_stokes},
  };
  return r;
}

int run_command(const std::string& name, const Config& cfg, const Config& budgets, const std::string& out_dir) {
  std::vector<const CommandInfo*> selected;
  if (name == "all") {
    const auto list = cfg.get_string("all.commands", "");
    for (const auto& info : registry())
      if (list.empty() || ("," + list + ",").find("," + info.name + ",") != std::string::npos) selected.push_back(&info);
  } else {
    for (const auto& info : registry())
      if (info.name == name) selected.push_back(&info);
    if (selected.empty()) throw ConfigError("unknown command " + name);
  }
  ojson cfg_json = ojson::object();
  for (const auto& [k, v] : cfg.values()) cfg_json[k] = v;

  std::vector<CheckResult> summary;
  int code = kPass;
  for (const CommandInfo* info : selected) {
    const CommandOutput o = info->fn(cfg, budgets, out_dir);
    write_report(out_dir, info->name, cfg_json, o.checks);
    summary.insert(summary.end(), o.checks.begin(), o.checks.end());
    const int c = o.exit_code();
    if (c == kNonConvergence || (c == kCheckFailure && code == kPass)) code = c;
    if (!o.note.empty()) std::fprintf(stderr, "%s: %s\n", info->name.c_str(), o.note.c_str());
  }
  write_summary((std::filesystem::path(out_dir) / "summary.tsv").string(), summary);
  return code;
}

}  // namespace decaylab::commands
