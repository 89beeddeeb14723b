#include <cmath>
#include <limits>
#include <random>

#include "decaylab/bounds.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/initial_data.hpp"
#include "decaylab/semigroup.hpp"
#include "doctest.h"

using namespace decaylab;

namespace {

double fd_divergence(const InitialField& u, const Vec3& x) {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, norm(x));
  double div = 0.0;
  for (int a = 0; a < 3; ++a) {
    Vec3 p = x, m = x;
    p[a] += h;
    m[a] -= h;
    div += (u(p)[a] - u(m)[a]) / (2.0 * h);
  }
  return div;
}

}  // namespace

TEST_CASE("curl construction is divergence-free at random points") {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> lr(-1.0, 3.0);
  for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
    const InitialField u = make_slow_decay_field({alpha, 1.0});
    for (int n = 0; n < 100; ++n) {
      Vec3 d{g(gen), g(gen), g(gen)};
      const Vec3 x = (std::pow(10.0, lr(gen)) / norm(d)) * d;
      const double scale = norm(u(x)) / std::max(1.0, norm(x)) + 1e-300;
      CHECK(std::abs(fd_divergence(u, x)) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("velocity is the curl of the stream potential") {
  const InitialField u = make_slow_decay_field({2.0, 1.5});
  const double h = 1e-5;
  for (double r : {0.3, 1.0, 7.0}) {
    const double fd = (u.potential(r + h) - u.potential(r - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(u.potential_derivative(r)).epsilon(1e-8));
  }
  const InitialField u1 = make_slow_decay_field({1.0, 1.0});
  CHECK(u1.potential(2.0) == doctest::Approx(0.5 * std::log(5.0)));
}

TEST_CASE("effective amplitude from dense radial sampling") {
  const InitialField u = make_slow_decay_field({2.0, 1.0});
  const auto radii = log_space(1e-3, 1e4, 400);
  const double m = effective_m0(u, radii);
  // oracle: much denser sampling of the same functional
  double dense = 0.0;
  for (double r : log_space(1e-3, 1e4, 200000)) dense = std::max(dense, std::pow(1.0 + r, 2.0) * norm(u({r, 0, 0})));
  CHECK(std::isfinite(m));
  CHECK(m == doctest::Approx(dense).epsilon(1e-4));
  CHECK(m >= 0.1);
  CHECK(m <= 10.0);

  const double m1 = effective_m0(make_slow_decay_field({1.0, 1.0}), radii);
  CHECK(m1 > 0.0);
  CHECK(m1 < 10.0);
  CHECK(effective_m0(u.scaled(3.5), radii) == doctest::Approx(3.5 * m).epsilon(1e-14));
  CHECK(effective_m0(make_slow_decay_field({2.0, 0.0}), radii) == 0.0);
  CHECK_THROWS_AS(effective_m0(u, {}), DomainError);
}

TEST_CASE("zero amplitude gives the zero field") {
  const InitialField u = make_slow_decay_field({1.5, 0.0});
  const Vec3 v = u({1.0, 2.0, -3.0});
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 0.0);
  CHECK(v[2] == 0.0);
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(make_slow_decay_field({0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(make_slow_decay_field({3.5, 1.0}), DomainError);
  CHECK_THROWS_AS(make_slow_decay_field({2.0, -1.0}), DomainError);
  CHECK_NOTHROW(make_slow_decay_field({3.0, 1.0}));
}

TEST_CASE("tail exponent recovery and two-sided envelope") {
  for (double alpha : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    const InitialField u = make_slow_decay_field({alpha, 1.0});
    std::vector<double> lx, ly;
    for (double r : log_space(10.0, 1e3, 40)) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(norm(u({r, 0, 0}))));
    }
    CHECK(least_squares_line(lx, ly).slope == doctest::Approx(-alpha).epsilon(0.02 / alpha));
    double lo = INFINITY, hi = 0.0;
    for (double r : log_space(1.0, 1e3, 200)) {
      const double v = std::pow(1.0 + r, alpha) * norm(u({r, 0, 0}));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo > 0.1);
    CHECK(hi < 10.0);
  }
}

TEST_CASE("window is one inside and zero outside") {
  CHECK(cosine_window(0.5, 1.0, 2.0) == 1.0);
  CHECK(cosine_window(2.5, 1.0, 2.0) == 0.0);
  CHECK(cosine_window(1.5, 1.0, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("grid sampling") {
  const InitialField u = make_slow_decay_field({2.0, 1.0});
  const GridSpec box{32, 16.0};
  const GridField g = sample_to_grid(u, box);
  CHECK(g.meta.window_radius == doctest::Approx(0.8 * box.L));
  const std::size_t origin = box.index(16, 16, 16);
  const Vec3 x0 = box.node(16, 16, 16);
  CHECK(x0[0] == 0.0);
  const Vec3 exact = u(box.node(17, 16, 16));
  CHECK(g.comp(1)[box.index(17, 16, 16)] == exact[1]);
  CHECK(g.comp(0)[origin] == u(x0)[0]);

  CHECK(semigroup::divergence_ratio(semigroup::leray_project(g)) <= 1e-10);

  const GridSpec big{64, 32.0};
  const GridField g2 = sample_to_grid(u, big);
  for (int k = 4; k < 28; k += 5)
    for (int j = 4; j < 28; j += 3)
      for (int i = 4; i < 28; i += 2) {
        if (norm(box.node(i, j, k)) > 0.8 * box.L) continue;
        for (int c = 0; c < 3; ++c) CHECK(g.comp(c)[box.index(i, j, k)] == g2.comp(c)[big.index(i + 16, j + 16, k + 16)]);
      }
}

TEST_CASE("sampling error of the divergence on a resolving grid") {
  // Sampling aliases the unit-scale core, so the discrete divergence is set by h; h = 1/4 here.
  const GridField g = sample_to_grid(make_slow_decay_field({2.0, 1.0}), {128, 16.0});
  const double div = semigroup::divergence_ratio(g);
  MESSAGE("windowed spectral divergence ratio ", div);
  CHECK(div <= 1e-3);
  CHECK(semigroup::divergence_ratio(semigroup::leray_project(g)) <= 1e-10);
}

TEST_CASE("grid spec validation") {
  CHECK_THROWS_AS((GridSpec{48, 32.0}.validate()), GridError);
  CHECK_THROWS_AS((GridSpec{16, 32.0}.validate()), GridError);
  CHECK_THROWS_AS((GridSpec{64, 8.0}.validate()), GridError);
  CHECK_THROWS_AS((GridSpec{64, 32.0}.require_resolves(0.5)), GridError);
  CHECK_NOTHROW((GridSpec{64, 32.0}.require_resolves(4.0)));
}
