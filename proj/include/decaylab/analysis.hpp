#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "decaylab/bounds.hpp"
#include "decaylab/grid.hpp"
#include "decaylab/initial_data.hpp"

namespace decaylab::analysis {

/// (t, value) samples of one norm functional; t strictly increasing, values positive.
struct DecaySeries {
  std::vector<std::pair<double, double>> points;
  std::string descriptor;
  std::string provenance;

  void push(double t, double v) { points.emplace_back(t, v); }
  /// Throws DomainError on non-increasing times or non-positive values.
  void validate() const;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  bool log_corrected = false;
  double window_lo = 0.0, window_hi = 0.0;
  std::size_t points = 0;
};

/// Least squares of ln v (or ln(v / ln(2+t)) when log_corrected) against ln(1+t) over the window,
/// matching the (1+t) form of the predicted rates.
/// Requires >= 10 points spanning >= 1.5 decades inside the window, else DomainError.
ExponentFit fit_decay_exponent(const DecaySeries& series, double t_lo, double t_hi, bool log_corrected);

/// Envelope claimed for int_0^t (1+tau)^{-a} ln^{d}(2+tau) dtau, d = [alpha == 3].
double time_integral_envelope(double a, double alpha, double t, double delta);
/// Cumulative integral on the supplied increasing grid (first node may be 0).
std::vector<double> time_integral(double a, double alpha, const std::vector<double>& t_grid);
/// Bounded-ratio certificate of the integral against its envelope; delta is the loss used in the
/// a < 1, alpha = 3 case.
BoundReport certify_time_integral(double a, double alpha, const std::vector<double>& t_grid, double budget,
                                  double delta = 0.05);

/// int_{R^3} (|y| + A)^{-a} (|x - y| + B)^{-b} dy for |x| = r, by nested adaptive quadrature over
/// (rho = |y|, s = |x - y|).
double convolution_integral(double A, double B, double a, double b, double r);
/// Same integral with the inner s-integral in closed form (independent route).
double convolution_integral_closed_inner(double A, double B, double a, double b, double r);
/// sup over probes of I(r) r^a B^{b-3}. Throws DomainError unless b > 3 > a > 0 and r >= 2A.
BoundReport certify_convolution_bound(double A, double B, double a, double b, const std::vector<double>& r_probes,
                                      double budget);

enum class LogCorrection {
  None,
  Spatial,  // ln(2 + |x|)
  Scale,    // ln(2 + |x| + sqrt t)
};

struct RadialProbeGrid {
  std::vector<double> radii;  // may include 0
  std::vector<double> times;  // may include 0
  static RadialProbeGrid log_grid(double r_lo, double r_hi, std::size_t nr, double t_lo, double t_hi, std::size_t nt,
                                  bool include_zero = true);
};

struct HeatEnvelopeResult {
  BoundReport bound;
  ExponentFit temporal;  // slope of sup_r V(r, t) over t >= 10
  bool temporal_fitted = false;
};

/// V = (Gamma_t * a)(r) against (1 + r + sqrt t)^{-alpha}, times the log factor when alpha = 3.
HeatEnvelopeResult verify_heat_envelope(const RadialProfile& profile, const RadialProbeGrid& probes, double budget,
                                        LogCorrection log_mode = LogCorrection::Scale);

/// |V(r,t)| (1 + r + sqrt t)^{alpha - delta [alpha > 2]} over the probes.
BoundReport verify_pointwise_envelope(const RadialProfile& profile, const RadialProbeGrid& probes, double delta,
                                      double budget, TrendMode mode = TrendMode::NoGrowth);

/// Grid variant over a list of snapshots; nodes restricted to |x| <= 0.8 L.
struct Snapshot {
  double time;
  const GridField* field;
};
BoundReport verify_pointwise_envelope(const std::vector<Snapshot>& snapshots, double alpha, double delta,
                                      double budget, TrendMode mode = TrendMode::NoGrowth);

/// Effective envelope exponent alpha - delta [alpha > 2].
double pointwise_exponent(double alpha, double delta);

}  // namespace decaylab::analysis
