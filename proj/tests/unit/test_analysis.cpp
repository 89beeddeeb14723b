#include <cmath>

#include "decaylab/analysis.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/initial_data.hpp"
#include "decaylab/semigroup.hpp"
#include "doctest.h"

using namespace decaylab;
using namespace decaylab::analysis;

namespace {

DecaySeries synthetic(double slope, bool with_log, double lo = 1.0, double hi = 1e4, std::size_t n = 41) {
  DecaySeries s;
  s.descriptor = "synthetic";
  for (double t : log_space(lo, hi, n)) s.push(t, std::pow(1.0 + t, slope) * (with_log ? std::log(2.0 + t) : 1.0));
  return s;
}

}  // namespace

TEST_CASE("exponent fit of exact power laws") {
  CHECK(fit_decay_exponent(synthetic(-0.5, false), 10.0, 1000.0, false).slope == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(std::abs(fit_decay_exponent(synthetic(-0.5, false), 10.0, 1000.0, false).slope + 0.5) <= 0.01);
  CHECK(std::abs(fit_decay_exponent(synthetic(-1.5, true), 10.0, 1000.0, true).slope + 1.5) <= 0.02);
  for (double s = -2.0; s <= 0.0; s += 0.25) {
    const ExponentFit f = fit_decay_exponent(synthetic(s, false), 10.0, 1000.0, false);
    CHECK(std::abs(f.slope - s) <= 0.01);
    CHECK(f.points >= 10);
    CHECK(f.window_lo == 10.0);
  }
}

TEST_CASE("exponent fit rejects thin windows") {
  CHECK_THROWS_AS(fit_decay_exponent(synthetic(-1.0, false), 10.0, 200.0, false), DomainError);
  CHECK_THROWS_AS(fit_decay_exponent(synthetic(-1.0, false, 10.0, 1e4, 8), 10.0, 1e4, false), DomainError);
  DecaySeries bad = synthetic(-1.0, false);
  bad.points[3].second = -1.0;
  CHECK_THROWS_AS(fit_decay_exponent(bad, 10.0, 1e3, false), DomainError);
}

TEST_CASE("heat flow of alpha = 2 data decays at rate t^{-1} in sup norm") {
  const auto probes = RadialProbeGrid::log_grid(1.0, 10.0, 3, 10.0, 1e3, 16, true);
  const HeatEnvelopeResult r = verify_heat_envelope({2.0, 1.0}, probes, 100.0);
  REQUIRE(r.temporal_fitted);
  MESSAGE("alpha = 2 sup-norm slope ", r.temporal.slope);
  CHECK(std::abs(r.temporal.slope + 1.0) <= 0.05);
}

TEST_CASE("time integrals in closed form") {
  const auto grid = log_space(1e-2, 1e6, 81);
  const auto I2 = time_integral(2.0, 2.0, grid);
  const auto I1 = time_integral(1.0, 2.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(I2[i] == doctest::Approx(grid[i] / (1.0 + grid[i])).epsilon(1e-10));
    CHECK(I1[i] == doctest::Approx(std::log1p(grid[i])).epsilon(1e-10));
  }
  CHECK(I2.back() == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(I1.back() / std::log(2.0 + grid.back()) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("time integral certificates") {
  const auto grid = log_space(1e-2, 1e6, 81);
  CHECK(certify_time_integral(2.0, 2.0, grid, 10.0).pass);
  CHECK(certify_time_integral(1.0, 2.0, grid, 10.0).pass);
  CHECK(certify_time_integral(1.0, 3.0, grid, 10.0).pass);
  CHECK(certify_time_integral(0.5, 2.0, grid, 10.0).pass);
  // negative control: an envelope stiffened by 0.25 in the exponent
  const auto I = time_integral(0.5, 2.0, grid);
  std::vector<BoundSample> s;
  for (std::size_t i = 0; i < grid.size(); ++i) s.push_back({grid[i], I[i] / std::pow(grid[i], 0.25), {grid[i]}});
  CHECK_FALSE(make_bound_report(s, 1e9).pass);
}

TEST_CASE("convolution integral: nested quadrature agrees with the closed inner integral") {
  for (double r : {2.0, 10.0, 300.0}) {
    const double a = convolution_integral(1.0, 1.0, 2.0, 4.0, r);
    const double b = convolution_integral_closed_inner(1.0, 1.0, 2.0, 4.0, r);
    CHECK(a == doctest::Approx(b).epsilon(1e-7));
  }
  const double at10 = convolution_integral(1.0, 1.0, 2.0, 4.0, 10.0);
  MESSAGE("A = B = 1, a = 2, b = 4, |x| = 10: ", at10);
  CHECK(std::isfinite(at10 * 100.0));
}

TEST_CASE("convolution integral: tiny first exponent is translation invariant") {
  // a -> 0: int (|z| + B)^{-b} dz = 4 pi int s^2 (s + B)^{-b} ds = 8 pi B^{3-b} / ((b-1)(b-2)(b-3))
  const double b = 4.5, B = 0.7;
  const double exact = 8.0 * M_PI * std::pow(B, 3.0 - b) / ((b - 1.0) * (b - 2.0) * (b - 3.0));
  for (double r : {3.0, 30.0}) CHECK(convolution_integral(1.0, B, 1e-9, b, r) == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("convolution bound certificate and B scaling") {
  const auto probes = log_space(2.0, 2000.0, 10);
  const BoundReport r = certify_convolution_bound(1.0, 1.0, 2.0, 4.0, probes, 100.0);
  CHECK(r.pass);
  const double r1 = convolution_integral(1.0, 0.5, 1.5, 4.0, 2000.0);
  const double r2 = convolution_integral(1.0, 1.0, 1.5, 4.0, 2000.0);
  CHECK(r2 / r1 == doctest::Approx(std::pow(2.0, 3.0 - 4.0)).epsilon(0.2));
  CHECK_THROWS_AS(certify_convolution_bound(1.0, 1.0, 3.5, 4.0, probes, 1.0), DomainError);
  CHECK_THROWS_AS(certify_convolution_bound(1.0, 1.0, 2.0, 2.5, probes, 1.0), DomainError);
  CHECK_THROWS_AS(certify_convolution_bound(1.0, 1.0, 2.0, 4.0, {1.0}, 1.0), DomainError);
}

TEST_CASE("heat envelope at alpha = 1 and the t = 0 slice") {
  const auto probes = RadialProbeGrid::log_grid(1e-1, 1e3, 25, 1e-1, 1e4, 25, true);
  const HeatEnvelopeResult r = verify_heat_envelope({1.0, 1.0}, probes, 10.0);
  INFO("sup ", r.bound.sup_ratio, " trend ", r.bound.trend);
  CHECK(r.bound.pass);
  REQUIRE(r.temporal_fitted);
  CHECK(std::abs(r.temporal.slope + 0.5) <= 0.05);
  // t = 0: ratio is (1 + r)^alpha a(r) / ...
  RadialProbeGrid t0{{0.0, 1.0, 10.0, 100.0}, {0.0}};
  const HeatEnvelopeResult z = verify_heat_envelope({1.0, 1.0}, t0, 10.0);
  CHECK(z.bound.sup_ratio <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("pointwise envelope of the heat flow for alpha = 1.5") {
  const auto probes = RadialProbeGrid::log_grid(1e-1, 1e4, 25, 1e-1, 1e6, 25, true);
  const BoundReport r = verify_pointwise_envelope(RadialProfile{1.5, 1.0}, probes, 0.0, 10.0);
  INFO("sup ", r.sup_ratio, " trend ", r.trend);
  CHECK(r.pass);
}

TEST_CASE("grid pointwise envelope on a heat-flow snapshot") {
  const GridSpec g{64, 32.0};
  const InitialField u = make_slow_decay_field({2.0, 1.0});
  const GridField u0 = semigroup::leray_project(sample_to_grid(u, g));
  const GridField u1 = semigroup::heat_evolve(u0, 4.0);
  const BoundReport r = verify_pointwise_envelope({{0.0, &u0}, {4.0, &u1}}, 2.0, 0.0, 10.0);
  CHECK(std::isfinite(r.sup_ratio));
  CHECK(r.sup_ratio > 0.1);
  CHECK(r.probe_count > 0);
}
