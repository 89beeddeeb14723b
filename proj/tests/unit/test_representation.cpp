#include <doctest.h>

#include <cmath>

#include "decaylab/errors.hpp"
#include "decaylab/representation.hpp"

using namespace decaylab;
using namespace decaylab::analysis;

namespace {
InitialField field(double alpha, double m0 = 1.0) { return make_slow_decay_field(RadialProfile{alpha, m0}); }
}  // namespace

TEST_CASE("cutoff profile derivatives match finite differences") {
  for (double r : {2.3, 2.9, 3.5, 3.95}) {
    const double h = 1e-5;
    const auto c = cutoff_profile(r, 2.0, 4.0);
    const auto p = cutoff_profile(r + h, 2.0, 4.0), m = cutoff_profile(r - h, 2.0, 4.0);
    CHECK(c[1] == doctest::Approx((p[0] - m[0]) / (2 * h)).epsilon(1e-8));
    CHECK(c[2] == doctest::Approx((p[1] - m[1]) / (2 * h)).epsilon(1e-8));
  }
  CHECK(cutoff_profile(1.0, 2.0, 4.0)[0] == 0.0);
  CHECK(cutoff_profile(5.0, 2.0, 4.0)[0] == 1.0);
}

TEST_CASE("zero data gives zero terms") {
  const auto res = representation_residual(field(2.0, 0.0), {{10.0, 0.0, 0.0}}, 1.0);
  REQUIRE(res.size() == 1);
  CHECK(norm(res[0].i1) == 0.0);
  CHECK(norm(res[0].i4) == 0.0);
  CHECK(res[0].residual == 0.0);
}

TEST_CASE("alpha = 2, t = 1, |x| = 10 satisfies the representation") {
  const auto res = representation_residual(field(2.0), {{0.0, 10.0, 0.0}, {6.0, 8.0, 0.0}}, 1.0);
  for (const auto& r : res) {
    MESSAGE("residual " << r.residual << " cutoff residual " << r.cutoff_residual << " |I4| " << norm(r.i4));
    CHECK(r.residual <= 1e-2);
  }
}

TEST_CASE("cutoff terms balance at larger times") {
  const auto res = representation_residual(field(2.0), {{8.0, 0.0, 0.0}, {0.0, 6.0, 6.0}}, 10.0);
  for (const auto& r : res) {
    MESSAGE("t = 10: residual " << r.residual << " cutoff residual " << r.cutoff_residual << " |inner| "
                                << norm(r.inner) << " |I4| " << norm(r.i4));
    CHECK(r.residual <= 1e-2);
    CHECK(r.cutoff_residual <= 1e-2);
    CHECK(norm(r.i2) < 1e-14 * norm(r.lhs));
    CHECK(norm(r.i3) < 1e-14 * norm(r.lhs));
  }
}

TEST_CASE("refining the rule does not worsen the cutoff residual") {
  RepresentationOptions coarse;
  coarse.radial_nodes = coarse.polar_nodes = coarse.time_nodes = 8;
  coarse.azimuthal_nodes = 16;
  RepresentationOptions fine;
  const Vec3 x{8.0, 0.0, 1.0};
  const double rc = representation_residual(field(1.0), {x}, 10.0, coarse)[0].cutoff_residual;
  const double rf = representation_residual(field(1.0), {x}, 10.0, fine)[0].cutoff_residual;
  MESSAGE("coarse " << rc << " fine " << rf);
  CHECK(rf <= rc);
}

TEST_CASE("unit cutoff reduces to the heat representation") {
  RepresentationOptions opt;
  opt.unit_cutoff = true;
  const auto res = representation_residual(field(2.0), {{1.0, 0.5, 0.3}, {3.0, 0.0, 2.0}, {10.0, 0.0, 0.0}}, 1.0, opt);
  for (const auto& r : res) {
    MESSAGE("unit cutoff residual " << r.residual);
    CHECK(r.residual <= 1e-6);
  }
}

TEST_CASE("representation argument checks") {
  CHECK_THROWS_AS(representation_residual(field(2.0), {{3.0, 0.0, 0.0}}, 1.0), DomainError);
  CHECK_THROWS_AS(representation_residual(field(2.0), {{10.0, 0.0, 0.0}}, 0.0), DomainError);
}
