#include "decaylab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "decaylab/errors.hpp"

namespace decaylab {

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least_squares_line: need >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("least_squares_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_space: need 0 < lo < hi and n >= 2");
  std::vector<double> v(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

BoundReport make_bound_report(const std::vector<BoundSample>& samples, double budget, double trend_tolerance,
                              TrendMode mode, int bins_per_decade) {
  BoundReport rep;
  rep.budget = budget;
  rep.trend_tolerance = trend_tolerance;
  rep.mode = mode;
  rep.probe_count = samples.size();
  if (samples.empty()) return rep;

  bool finite = true;
  double max_scale = 0.0;
  rep.sup_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    if (!std::isfinite(s.ratio)) finite = false;
    if (s.ratio > rep.sup_ratio) {
      rep.sup_ratio = s.ratio;
      rep.argmax = s.coords;
    }
    max_scale = std::max(max_scale, s.scale);
  }

  // Per-bin maxima over the top decade, keyed by bin index so ordering is deterministic.
  std::map<long, const BoundSample*> bins;
  const double top_lo = max_scale / 10.0;
  for (const auto& s : samples) {
    if (!(s.scale >= top_lo) || !(s.scale > 0.0) || !(s.ratio > 0.0)) continue;
    const long b = static_cast<long>(std::floor(std::log10(s.scale) * bins_per_decade));
    auto it = bins.find(b);
    if (it == bins.end() || s.ratio > it->second->ratio) bins[b] = &s;
  }
  if (bins.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& [b, s] : bins) {
      x.push_back(std::log(s->scale));
      y.push_back(std::log(s->ratio));
    }
    rep.trend = least_squares_line(x, y).slope;
  }

  const bool trend_ok = mode == TrendMode::NoGrowth ? rep.trend <= trend_tolerance
                                                    : std::abs(rep.trend) <= trend_tolerance;
  rep.pass = finite && rep.sup_ratio <= budget && trend_ok;
  return rep;
}

}  // namespace decaylab
