#include <cmath>

#include "decaylab/bounds.hpp"
#include "decaylab/errors.hpp"
#include "doctest.h"

using namespace decaylab;

TEST_CASE("least squares recovers an exact line") {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i);
    y.push_back(-0.75 * i + 2.0);
  }
  const LineFit f = least_squares_line(x, y);
  CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.rms_residual < 1e-12);
}

TEST_CASE("least squares rejects degenerate input") {
  CHECK_THROWS_AS(least_squares_line({1.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(least_squares_line({1.0, 1.0}, {1.0, 2.0}), DomainError);
}

TEST_CASE("log_space includes both endpoints") {
  const auto v = log_space(1e-2, 1e3, 6);
  REQUIRE(v.size() == 6);
  CHECK(v.front() == doctest::Approx(1e-2));
  CHECK(v.back() == doctest::Approx(1e3));
  CHECK(v[1] == doctest::Approx(1e-1));
}

namespace {

std::vector<BoundSample> power_samples(double slope) {
  std::vector<BoundSample> s;
  for (double x : log_space(1.0, 1e4, 81)) s.push_back({x, std::pow(x, slope), {x}});
  return s;
}

}  // namespace

TEST_CASE("bound report: flat ratio passes, growing ratio fails") {
  const BoundReport flat = make_bound_report(power_samples(0.0), 2.0);
  CHECK(flat.pass);
  CHECK(std::abs(flat.trend) < 1e-12);

  const BoundReport growing = make_bound_report(power_samples(0.1), 1e9);
  CHECK_FALSE(growing.pass);
  CHECK(growing.trend == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("bound report: a decaying ratio is bounded, but not stable") {
  const BoundReport no_growth = make_bound_report(power_samples(-0.5), 2.0, 0.02, TrendMode::NoGrowth);
  CHECK(no_growth.pass);
  const BoundReport stable = make_bound_report(power_samples(-0.5), 2.0, 0.02, TrendMode::Stable);
  CHECK_FALSE(stable.pass);
}

TEST_CASE("bound report: budget is enforced and argmax is reported") {
  auto s = power_samples(0.0);
  s[5].ratio = 3.0;
  const BoundReport r = make_bound_report(s, 2.0);
  CHECK_FALSE(r.pass);
  CHECK(r.sup_ratio == 3.0);
  REQUIRE(r.argmax.size() == 1);
  CHECK(r.argmax[0] == doctest::Approx(s[5].scale));
  CHECK(r.probe_count == s.size());
}

TEST_CASE("bound report: non-finite ratio fails") {
  auto s = power_samples(0.0);
  s[3].ratio = INFINITY;
  CHECK_FALSE(make_bound_report(s, 1e300).pass);
}
