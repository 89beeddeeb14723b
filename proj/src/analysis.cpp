#include "decaylab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "decaylab/errors.hpp"
#include "decaylab/quadrature.hpp"
#include "decaylab/radial.hpp"

namespace decaylab::analysis {

namespace {

constexpr double kPi = std::numbers::pi;

double checked(const AdaptiveResult& r, const char* who) {
  if (!r.converged)
    throw QuadratureError(std::string(who) + ": quadrature did not converge (value " + std::to_string(r.value) +
                          ", error " + std::to_string(r.error) + ", panels " + std::to_string(r.panels) + ")");
  return r.value;
}

bool is_dimension(double alpha) { return alpha == 3.0; }

}  // namespace

void DecaySeries::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].second > 0.0) || !std::isfinite(points[i].second))
      throw DomainError("DecaySeries: values must be positive and finite (" + descriptor + ")");
    if (i > 0 && !(points[i].first > points[i - 1].first))
      throw DomainError("DecaySeries: times must be strictly increasing (" + descriptor + ")");
  }
}

ExponentFit fit_decay_exponent(const DecaySeries& series, double t_lo, double t_hi, bool log_corrected) {
  series.validate();
  std::vector<double> x, y;
  double x_lo = INFINITY, x_hi = 0.0;
  for (const auto& [t, v] : series.points) {
    if (t < t_lo || t > t_hi || !(t > 0.0)) continue;
    x_lo = std::min(x_lo, t);
    x_hi = std::max(x_hi, t);
    x.push_back(std::log1p(t));
    y.push_back(std::log(log_corrected ? v / std::log(2.0 + t) : v));
  }
  if (x.size() < 10) throw DomainError("fit_decay_exponent: fewer than 10 points in the window (" + series.descriptor + ")");
  if (std::log10(x_hi / x_lo) < 1.5 - 1e-12)
    throw DomainError("fit_decay_exponent: window spans fewer than 1.5 decades (" + series.descriptor + ")");
  const LineFit f = least_squares_line(x, y);
  ExponentFit out;
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.rms_residual = f.rms_residual;
  out.log_corrected = log_corrected;
  out.window_lo = t_lo;
  out.window_hi = t_hi;
  out.points = x.size();
  return out;
}

double time_integral_envelope(double a, double alpha, double t, double delta) {
  const bool crit = is_dimension(alpha);
  if (a > 1.0) return 1.0;
  if (a == 1.0) return crit ? std::pow(std::log(2.0 + t), 2) : std::log(2.0 + t);
  return crit ? std::pow(t, 1.0 - a + delta) : std::pow(t, 1.0 - a);
}

std::vector<double> time_integral(double a, double alpha, const std::vector<double>& t_grid) {
  if (!(a > 0.0)) throw DomainError("time_integral: a must be positive");
  const bool crit = is_dimension(alpha);
  auto f = [&](double tau) {
    const double base = std::pow(1.0 + tau, -a);
    return crit ? base * std::log(2.0 + tau) : base;
  };
  std::vector<double> out(t_grid.size());
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (t < prev) throw DomainError("time_integral: grid must be increasing");
    if (t > prev) {
      std::vector<double> pts{prev, t};
      for (double d = std::pow(10.0, std::floor(std::log10(std::max(prev, 1e-3))) + 1.0); d < t; d *= 10.0)
        if (d > prev) pts.push_back(d);
      acc += checked(adaptive_integrate(f, pts, 1e-14, 1e-12), "time_integral");
    }
    out[i] = acc;
    prev = t;
  }
  return out;
}

BoundReport certify_time_integral(double a, double alpha, const std::vector<double>& t_grid, double budget,
                                  double delta) {
  const auto I = time_integral(a, alpha, t_grid);
  std::vector<BoundSample> samples;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (!(t > 0.0)) continue;
    samples.push_back({t, I[i] / time_integral_envelope(a, alpha, t, delta), {t}});
  }
  return make_bound_report(samples, budget);
}

namespace {

void check_convolution_hypotheses(double A, double B, double a, double b) {
  if (!(A > 0.0 && B > 0.0)) throw DomainError("convolution bound: A and B must be positive");
  if (!(b > 3.0 && 3.0 > a && a > 0.0)) throw DomainError("convolution bound: requires b > 3 > a > 0");
}

/// int_lo^hi s (s + B)^{-b} ds in closed form.
double inner_closed(double B, double b, double lo, double hi) {
  auto P = [&](double s) { return std::pow(s + B, 2.0 - b) / (2.0 - b) - B * std::pow(s + B, 1.0 - b) / (1.0 - b); };
  return P(hi) - P(lo);
}

double inner_numeric(double B, double b, double lo, double hi) {
  auto f = [&](double s) { return s * std::pow(s + B, -b); };
  std::vector<double> pts{lo, hi};
  // geometric panels keep the result smooth in (lo, hi)
  for (double w = B; lo + w < hi; w *= 3.0) pts.push_back(lo + w);
  return checked(adaptive_integrate(f, pts, 0.0, 1e-11), "convolution inner");
}

template <class Inner>
double convolution_outer(double A, double B, double a, double b, double r, const Inner& inner) {
  check_convolution_hypotheses(A, B, a, b);
  if (!(r > 0.0)) throw DomainError("convolution bound: |x| must be positive");
  auto body = [&](double rho) {
    if (rho == 0.0) return 0.0;
    return rho * rho * std::pow(rho + A, -a) * (2.0 * kPi / (r * rho)) * inner(std::abs(r - rho), r + rho);
  };
  const double c = 16.0 * r + 16.0 * A;
  std::vector<double> pts{0.0, c};
  for (double p : {A, 0.5 * r, 1.5 * r, 2.0 * r, 4.0 * r, r})
    if (p > 0.0 && p < c) pts.push_back(p);
  // geometric panels resolve the scales A, B and r when they are far apart
  for (double k = 1.0; k * B < c; k *= 3.0)
    for (double sg : {-1.0, 1.0}) {
      const double p = r + sg * k * B;
      if (p > 0.0 && p < c) pts.push_back(p);
    }
  for (double k = 3.0; k * A < r; k *= 3.0) pts.push_back(k * A);
  const double near = checked(adaptive_integrate(body, pts, 0.0, 1e-9), "convolution outer");
  // rho = c e^v: the integrand decays like e^{(3 - a - b) v}.
  const double vmax = 40.0 / (a + b - 3.0);
  auto tail = [&](double v) {
    const double rho = c * std::exp(v);
    return body(rho) * rho;
  };
  std::vector<double> tp{0.0, vmax};
  for (double v = 1.0; v < vmax; v *= 2.0) tp.push_back(v);
  const double far = checked(adaptive_integrate(tail, tp, 0.0, 1e-9), "convolution tail");
  return near + far;
}

}  // namespace

double convolution_integral(double A, double B, double a, double b, double r) {
  return convolution_outer(A, B, a, b, r, [&](double lo, double hi) { return inner_numeric(B, b, lo, hi); });
}

double convolution_integral_closed_inner(double A, double B, double a, double b, double r) {
  return convolution_outer(A, B, a, b, r, [&](double lo, double hi) { return inner_closed(B, b, lo, hi); });
}

BoundReport certify_convolution_bound(double A, double B, double a, double b, const std::vector<double>& r_probes,
                                      double budget) {
  check_convolution_hypotheses(A, B, a, b);
  std::vector<BoundSample> samples;
  for (double r : r_probes) {
    if (r < 2.0 * A) throw DomainError("convolution bound: probe |x| = " + std::to_string(r) + " violates |x| >= 2A");
    const double I = convolution_integral(A, B, a, b, r);
    samples.push_back({r, I * std::pow(r, a) * std::pow(B, b - 3.0), {r, A, B, a, b}});
  }
  return make_bound_report(samples, budget);
}

RadialProbeGrid RadialProbeGrid::log_grid(double r_lo, double r_hi, std::size_t nr, double t_lo, double t_hi,
                                          std::size_t nt, bool include_zero) {
  RadialProbeGrid g;
  if (include_zero) {
    g.radii.push_back(0.0);
    g.times.push_back(0.0);
  }
  for (double r : log_space(r_lo, r_hi, nr)) g.radii.push_back(r);
  for (double t : log_space(t_lo, t_hi, nt)) g.times.push_back(t);
  return g;
}

namespace {

double heat_value(const RadialProfile& p, double r, double t) {
  if (t == 0.0) return p.amplitude(r);
  return radial::radial_heat_oracle([&](double s) { return p.amplitude(s); }, r, t);
}

}  // namespace

HeatEnvelopeResult verify_heat_envelope(const RadialProfile& profile, const RadialProbeGrid& probes, double budget,
                                        LogCorrection log_mode) {
  profile.validate();
  const bool crit = is_dimension(profile.alpha);
  std::vector<BoundSample> samples;
  DecaySeries sup_series;
  sup_series.descriptor = "sup_r V(r,t)";
  for (double t : probes.times) {
    double sup_v = 0.0;
    for (double r : probes.radii) {
      const double v = heat_value(profile, r, t);
      const double scale = 1.0 + r + std::sqrt(t);
      double log_factor = 1.0;
      if (crit && log_mode == LogCorrection::Spatial) log_factor = std::log(2.0 + r);
      if (crit && log_mode == LogCorrection::Scale) log_factor = std::log(1.0 + scale);
      samples.push_back({scale, v * std::pow(scale, profile.alpha) / log_factor, {r, t}});
      sup_v = std::max(sup_v, v);
    }
    if (t > 0.0 && sup_v > 0.0) sup_series.push(t, sup_v);
  }
  HeatEnvelopeResult out;
  out.bound = make_bound_report(samples, budget);
  std::size_t late = 0;
  double t_max = 0.0;
  for (const auto& [t, v] : sup_series.points)
    if (t >= 10.0) {
      ++late;
      t_max = t;
    }
  if (late >= 10 && std::log10(t_max / 10.0) >= 1.5) {
    out.temporal = fit_decay_exponent(sup_series, 10.0, t_max, crit);
    out.temporal_fitted = true;
  }
  return out;
}

double pointwise_exponent(double alpha, double delta) { return alpha > 2.0 ? alpha - delta : alpha; }

BoundReport verify_pointwise_envelope(const RadialProfile& profile, const RadialProbeGrid& probes, double delta,
                                      double budget, TrendMode mode) {
  profile.validate();
  const double p = pointwise_exponent(profile.alpha, delta);
  std::vector<BoundSample> samples;
  for (double t : probes.times)
    for (double r : probes.radii) {
      const double scale = 1.0 + r + std::sqrt(t);
      samples.push_back({scale, std::abs(heat_value(profile, r, t)) * std::pow(scale, p), {r, t}});
    }
  return make_bound_report(samples, budget, 0.02, mode);
}

BoundReport verify_pointwise_envelope(const std::vector<Snapshot>& snapshots, double alpha, double delta, double budget,
                                      TrendMode mode) {
  const double p = pointwise_exponent(alpha, delta);
  std::vector<BoundSample> samples;
  for (const Snapshot& s : snapshots) {
    const GridSpec& g = s.field->spec;
    const double R = 0.8 * g.L;
    const std::size_t shells = static_cast<std::size_t>(std::ceil(R / g.h())) + 1;
    std::vector<double> best(shells, -1.0), where(shells, 0.0);
    for (int k = 0; k < g.N; ++k)
      for (int j = 0; j < g.N; ++j)
        for (int i = 0; i < g.N; ++i) {
          const double r = norm(g.node(i, j, k));
          if (r > R) continue;
          const double ratio = norm(s.field->at(g.index(i, j, k))) * std::pow(1.0 + r + std::sqrt(s.time), p);
          const std::size_t shell = static_cast<std::size_t>(r / g.h());
          if (ratio > best[shell]) {
            best[shell] = ratio;
            where[shell] = r;
          }
        }
    for (std::size_t sh = 0; sh < shells; ++sh)
      if (best[sh] >= 0.0) samples.push_back({1.0 + where[sh] + std::sqrt(s.time), best[sh], {where[sh], s.time}});
  }
  return make_bound_report(samples, budget, 0.02, mode);
}

}  // namespace decaylab::analysis
