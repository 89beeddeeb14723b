#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <vector>

namespace decaylab {

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (G15/K31 panels): the panel with the largest error estimate
/// is bisected until the summed estimate is at most max(abs_tol, rel_tol |I|) or the panel budget
/// is spent. Initial panels come from consecutive breakpoints.
template <class F>
AdaptiveResult adaptive_integrate(const F& f, std::vector<double> breakpoints, double abs_tol, double rel_tol,
                                  int max_panels = 4000) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  std::priority_queue<Panel> heap;
  auto make = [&](double a, double b) {
    double err = 0.0;
    const double v = GK::integrate(f, a, b, 0, 0.0, &err);
    return Panel{a, b, v, err};
  };
  AdaptiveResult out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) heap.push(make(breakpoints[i], breakpoints[i + 1]));
  out.panels = static_cast<int>(heap.size());

  auto totals = [&heap]() {
    // Summation order is fixed by the heap's deterministic layout.
    double v = 0.0, e = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    return std::pair{v, e};
  };

  double value = 0.0, error = 0.0;
  std::tie(value, error) = totals();
  while (!heap.empty() && out.panels < max_panels) {
    if (std::isfinite(value) && error <= std::max(abs_tol, rel_tol * std::abs(value))) break;
    const Panel p = heap.top();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) break;  // panel at machine resolution
    heap.pop();
    const Panel l = make(p.a, mid), r = make(mid, p.b);
    value += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++out.panels;
    if (out.panels % 64 == 0) std::tie(value, error) = totals();  // limit drift of running sums
  }
  std::tie(value, error) = totals();
  out.value = value;
  out.error = error;
  out.converged = std::isfinite(value) && error <= std::max(abs_tol, rel_tol * std::abs(value));
  return out;
}

}  // namespace decaylab
