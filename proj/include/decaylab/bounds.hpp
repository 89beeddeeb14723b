#pragma once

#include <string>
#include <vector>

namespace decaylab {

/// How the top-decade trend of a ratio is judged.
enum class TrendMode {
  NoGrowth,  // pass if trend <= tolerance (a decreasing ratio is bounded)
  Stable,    // pass if |trend| <= tolerance
};

/// One probe of a claimed inequality: quantity / envelope at a point of scale `scale`.
struct BoundSample {
  double scale = 0.0;
  double ratio = 0.0;
  std::vector<double> coords;  // e.g. {r, t}
};

/// Outcome of certifying `quantity <= budget * envelope` over a finite probe set.
struct BoundReport {
  double sup_ratio = 0.0;
  std::vector<double> argmax;
  double budget = 0.0;
  double trend = 0.0;  // d ln(envelope of ratio) / d ln(scale) over the top decade
  double trend_tolerance = 0.02;
  TrendMode mode = TrendMode::NoGrowth;
  std::size_t probe_count = 0;
  bool pass = false;
};

/// Builds a BoundReport: bins samples by log10(scale), takes the max ratio per bin, and fits the
/// log-log slope of those maxima over the largest decade of scale present.
BoundReport make_bound_report(const std::vector<BoundSample>& samples, double budget,
                              double trend_tolerance = 0.02, TrendMode mode = TrendMode::NoGrowth,
                              int bins_per_decade = 8);

/// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};
LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

/// n log-spaced values in [lo, hi], endpoints included.
std::vector<double> log_space(double lo, double hi, std::size_t n);

}  // namespace decaylab
