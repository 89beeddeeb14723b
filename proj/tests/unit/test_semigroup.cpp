#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "decaylab/errors.hpp"
#include "decaylab/initial_data.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/radial.hpp"
#include "decaylab/semigroup.hpp"
#include "doctest.h"

using namespace decaylab;
using namespace decaylab::semigroup;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_l2(const GridField& a, const GridField& b) {
  double d = 0.0, n = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.comp(c).size(); ++i) {
      d += std::pow(a.comp(c)[i] - b.comp(c)[i], 2);
      n += std::pow(b.comp(c)[i], 2);
    }
  return n > 0.0 ? std::sqrt(d / n) : std::sqrt(d);
}

GridField gaussian_scalar(const GridSpec& g, double t, double shift = 0.0) {
  GridField f(g);
  for (int k = 0; k < g.N; ++k)
    for (int j = 0; j < g.N; ++j)
      for (int i = 0; i < g.N; ++i) {
        Vec3 x = g.node(i, j, k);
        x[0] -= shift;
        f.comp(0)[g.index(i, j, k)] = kernels::heat_kernel(x, t);
      }
  return f;
}

/// Spectral gradient (pure gradient field) or curl (solenoidal field) of a scalar potential.
GridField spectral_derivative_field(const GridField& phi, bool curl) {
  const Spectral sp(phi.spec);
  ComplexArray p = sp.make_complex();
  sp.forward(phi.comp(0), p);
  SpectralField s = sp.make_spectral();
  const cplx I{0.0, 1.0};
  sp.for_each_mode([&](std::size_t idx, const std::array<double, 3>&, const std::array<double, 3>& kd) {
    if (curl) {
      // curl((phi, phi, phi))
      s.c[0][idx] = I * (kd[1] - kd[2]) * p[idx];
      s.c[1][idx] = I * (kd[2] - kd[0]) * p[idx];
      s.c[2][idx] = I * (kd[0] - kd[1]) * p[idx];
    } else {
      for (int c = 0; c < 3; ++c) s.c[c][idx] = I * kd[c] * p[idx];
    }
  });
  return sp.backward(s, phi.meta);
}

TensorField constant_tensor_field(const GridSpec& g) {
  TensorField F(g);
  for (int k = 0; k < g.N; ++k)
    for (int j = 0; j < g.N; ++j)
      for (int i = 0; i < g.N; ++i) {
        const Vec3 x = g.node(i, j, k);
        const double a = kernels::heat_kernel({x[0] - 1.0, x[1], x[2]}, 2.0);
        const double b = kernels::heat_kernel({x[0], x[1] + 1.5, x[2]}, 3.0);
        const std::size_t idx = g.index(i, j, k);
        F(0, 0)[idx] = a;
        F(0, 1)[idx] = F(1, 0)[idx] = b;
        F(2, 2)[idx] = a - b;
        F(1, 2)[idx] = 0.5 * a;
      }
  return F;
}

}  // namespace

TEST_CASE("heat_evolve at t = 0 is bit-identical") {
  const GridField u = sample_to_grid(make_slow_decay_field({2.0, 1.0}), {32, 16.0});
  const GridField v = heat_evolve(u, 0.0);
  for (int c = 0; c < 3; ++c) CHECK(v.comp(c) == u.comp(c));
}

TEST_CASE("heat semigroup composition and guards") {
  const GridField u = sample_to_grid(make_slow_decay_field({1.0, 1.0}), {32, 16.0});
  const GridField a = heat_evolve(heat_evolve(u, 0.7), 1.9);
  const GridField b = heat_evolve(u, 2.6);
  CHECK(rel_l2(a, b) <= 1e-12);
  CHECK(b.meta.time == doctest::Approx(2.6));
  CHECK_THROWS_AS(heat_evolve(u, std::pow(0.21 * 16.0, 2)), TruncationError);
  CHECK_THROWS_AS(heat_evolve(u, -1.0), DomainError);
}

TEST_CASE("grid heat flow agrees with the radial oracle") {
  const GridSpec g{128, 32.0};
  const double alpha = 1.0, t = 4.0;
  const double r_in = 0.8 * g.L;
  auto a = [&](double r) { return std::pow(1.0 + r * r, -0.5 * alpha) * cosine_window(r, r_in, g.L); };
  const GridField u0 = sample_scalar_to_grid(a, g);
  const GridField u = heat_evolve(u0, t);
  double worst = 0.0;
  int probes = 0;
  // 17 nodes on the x axis and 13 on the xy diagonal, all within |x| <= 0.5 L
  std::vector<std::array<int, 3>> nodes;
  for (int s = 0; s <= 32; s += 2) nodes.push_back({64 + s, 64, 64});
  for (int s = 1; s <= 13; ++s) nodes.push_back({64 + s, 64 + s, 64});
  for (const auto& n : nodes) {
    const Vec3 x = g.node(n[0], n[1], n[2]);
    REQUIRE(norm(x) <= 0.5 * g.L);
    const double ref = radial::radial_heat_oracle(a, norm(x), t);
    worst = std::max(worst, std::abs(u.comp(0)[g.index(n[0], n[1], n[2])] - ref) / ref);
    ++probes;
  }
  MESSAGE("worst relative error ", worst, " over ", probes, " probes");
  CHECK(probes == 30);
  CHECK(worst <= 1e-4);
}

TEST_CASE("Leray projection") {
  const GridSpec g{32, 16.0};
  const GridField phi = gaussian_scalar(g, 2.0);
  const GridField grad = spectral_derivative_field(phi, false);
  CHECK(leray_project(grad).rms() <= 1e-10 * grad.rms());

  const GridField sol = spectral_derivative_field(phi, true);
  CHECK(divergence_ratio(sol) <= 1e-12);
  CHECK(rel_l2(leray_project(sol), sol) <= 1e-12);

  const GridField u = sample_to_grid(make_slow_decay_field({2.0, 1.0}), g);
  const GridField p = leray_project(u);
  CHECK(p.meta.solenoidal);
  CHECK(rel_l2(leray_project(p), p) <= 1e-12);
  CHECK(divergence_ratio(p) <= 1e-10);
  CHECK(rel_l2(heat_evolve(p, 1.3), leray_project(heat_evolve(u, 1.3))) <= 1e-12);
  CHECK(divergence_ratio(heat_evolve(p, 1.3)) <= 1e-10);
}

TEST_CASE("Duhamel integral of zero forcing is zero") {
  const GridSpec g{32, 16.0};
  const DuhamelResult r = duhamel_convolve([&](double) { return TensorField(g); }, 1.0, {4, 1e-6});
  CHECK(r.value.rms() == 0.0);
  CHECK(r.error_estimate == 0.0);
}

TEST_CASE("Duhamel integral of constant forcing matches the spectral antiderivative") {
  const GridSpec g{32, 16.0};
  const TensorField F = constant_tensor_field(g);
  const double t = 2.5;
  const DuhamelResult r = duhamel_convolve([&](double) { return F; }, t, {4, 1e-6});

  // oracle: (1 - e^{-t k^2}) / k^2 applied to P div F
  const Spectral sp(g);
  SpectralField s = projected_divergence(sp, F);
  sp.for_each_mode([&](std::size_t idx, const std::array<double, 3>& k, const std::array<double, 3>&) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const double m = k2 > 0.0 ? -std::expm1(-t * k2) / k2 : t;
    for (int c = 0; c < 3; ++c) s.c[c][idx] *= m;
  });
  const GridField oracle = sp.backward(s, {});
  CHECK(rel_l2(r.value, oracle) <= 1e-6);
  CHECK(divergence_ratio(r.value) <= 1e-10);
}

TEST_CASE("Duhamel mesh halving converges at second order") {
  const GridSpec g{32, 16.0};
  const TensorField F0 = constant_tensor_field(g);
  auto F = [&](double tau) {
    TensorField F1 = F0;
    const double w = std::cos(3.0 * tau) + tau * tau;
    for (auto& c : F1.data)
      for (double& v : c) v *= w;
    return F1;
  };
  const double t = 2.0;
  const DuhamelResult a = duhamel_convolve(F, t, {8, 1.0});
  const DuhamelResult b = duhamel_convolve(F, t, {16, 1.0});
  MESSAGE("mesh-halving estimates ", a.error_estimate, " ", b.error_estimate);
  CHECK(a.error_estimate / b.error_estimate >= 3.0);
  CHECK_THROWS_AS(duhamel_convolve(F, t, {8, 1e-12}), RefinementError);
}

TEST_CASE("product weights integrate linear forcing exactly") {
  for (double lam : {0.0, 1e-3, 0.3, 5.0, 1e4}) {
    const double d = 0.7;
    const auto [wa, wb] = product_weights(lam, d);
    // g(tau) = 1: int_0^d e^{-lam s} ds ; g(tau) = tau - a: int_0^d e^{-lam s} (d - s) ds
    const double exact1 = lam > 0 ? -std::expm1(-lam * d) / lam : d;
    const double exact2 = lam > 0 ? (d * lam + std::expm1(-lam * d)) / (lam * lam) : 0.5 * d * d;
    CHECK(wa + wb == doctest::Approx(exact1).epsilon(1e-12));
    CHECK(wb * d == doctest::Approx(exact2).epsilon(1e-10));
  }
}

TEST_CASE("field norms") {
  const GridSpec g{64, 16.0};
  CHECK(field_norm(GridField(g), {2.0}).value == 0.0);
  const GridField gam = gaussian_scalar(g, 1.0);
  CHECK(std::abs(field_norm(gam, {2.0}).value - std::pow(8.0 * kPi, -0.75)) <= 1e-3 * std::pow(8.0 * kPi, -0.75));

  // |grad Gamma|^2 integrates to 3 t (2 pi t)^{3/2} / (4 t^2 (4 pi t)^3) at t = 1
  const double grad_exact = std::sqrt(3.0 * std::pow(2.0 * kPi, 1.5) / (4.0 * std::pow(4.0 * kPi, 3)));
  CHECK(std::abs(gradient_norm(gam, {2.0}).value - grad_exact) <= 1e-3 * grad_exact);

  const GridField u = sample_to_grid(make_slow_decay_field({2.0, 1.0}), g);
  double mx = 0.0;
  for (std::size_t i = 0; i < g.points(); ++i)
    if (norm(g.node(i % 64, (i / 64) % 64, i / 4096)) <= 0.8 * g.L) mx = std::max(mx, norm(u.at(i)));
  CHECK(field_norm(u, {INFINITY}).value == mx);
  CHECK_THROWS_AS(field_norm(u, {1.0}), UnsupportedError);
  CHECK_THROWS_AS(field_norm(u, {2.0, 0.9 * g.L}), DomainError);

  double prev_value = 0.0, prev_tail = INFINITY;
  for (double R : {4.0, 6.0, 8.0, 10.0, 12.8}) {
    const NormResult n = field_norm(u, {3.0, R, 2.0});
    CHECK(n.value >= prev_value);
    CHECK(n.tail_bound <= prev_tail);
    CHECK(std::isfinite(n.tail_bound));
    prev_value = n.value;
    prev_tail = n.tail_bound;
  }
  CHECK(std::isinf(field_norm(u, {1.2, {}, 2.0}).tail_bound));
}

TEST_CASE("gradient norms of simple fields") {
  const GridSpec g{64, 16.0};
  GridField c(g);
  for (auto& comp : c.data) std::fill(comp.begin(), comp.end(), 2.5);
  CHECK(gradient_norm(c, {3.0}).value <= 1e-12);

  // windowed linear field u = a x1 e2: interior gradient magnitude a
  const double a = 0.3;
  GridField lin(g);
  for (int k = 0; k < g.N; ++k)
    for (int j = 0; j < g.N; ++j)
      for (int i = 0; i < g.N; ++i) {
        const Vec3 x = g.node(i, j, k);
        lin.comp(1)[g.index(i, j, k)] = a * x[0] * cosine_window(norm(x), 0.5 * g.L, g.L);
      }
  const NormResult sup = gradient_norm(lin, {INFINITY, 4.0});
  CHECK(sup.value == doctest::Approx(a).epsilon(0.02));
}

TEST_CASE("grid field file round trip") {
  GridField u = sample_to_grid(make_slow_decay_field({1.5, 2.0}), {32, 16.0});
  u.meta.time = 3.25;
  u.meta.solenoidal = true;
  const auto path = (std::filesystem::temp_directory_path() / "decaylab_roundtrip.dclf").string();
  write_grid_field(u, path);
  const GridField v = read_grid_field(path);
  CHECK(v.spec == u.spec);
  CHECK(v.meta.time == 3.25);
  CHECK(v.meta.window_radius == u.meta.window_radius);
  CHECK(v.meta.provenance == u.meta.provenance);
  CHECK(v.meta.solenoidal);
  for (int c = 0; c < 3; ++c) CHECK(v.comp(c) == u.comp(c));
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 4 + 3 * 8 + 3 * 8 * u.spec.points());
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".json");
  CHECK_THROWS_AS(read_grid_field(path), GridError);
}
