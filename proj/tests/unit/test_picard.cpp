#include <doctest.h>

#include <cmath>

#include "decaylab/errors.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/picard.hpp"

using namespace decaylab;
using namespace decaylab::picard;

namespace {

PicardConfig small_config(double m0, int iterations = 4) {
  PicardConfig cfg;
  cfg.alpha = 1.0;
  cfg.q = 4.0;
  cfg.m0 = m0;
  cfg.grid = GridSpec{32, 16.0};
  cfg.t_first = 0.05;
  cfg.t_final = 10.0;
  cfg.time_nodes = 12;
  cfg.max_iterations = iterations;
  return cfg;
}

double rel_l2(const GridField& a, const GridField& b) {
  double d = 0.0, n = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t p = 0; p < a.data[c].size(); ++p) {
      d += std::pow(a.data[c][p] - b.data[c][p], 2);
      n += b.data[c][p] * b.data[c][p];
    }
  return n > 0.0 ? std::sqrt(d / n) : std::sqrt(d);
}

}  // namespace

TEST_CASE("config validation enforces the admissible window") {
  CHECK_NOTHROW(small_config(0.1).validate());
  auto bad = small_config(0.1);
  bad.alpha = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config(0.1);
  bad.q = 3.0;  // 3 / alpha at alpha = 1 is excluded
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config(0.1);
  bad.alpha = 2.0;
  bad.q = 3.0;  // upper end 3 / (alpha - 1) excluded
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.q = 2.0;
  CHECK_NOTHROW(bad.validate());
  bad = small_config(0.1);
  bad.t_final = 20.0;  // sqrt(20) > 0.2 * 16
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config(-1.0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config(0.1);
  bad.q = 13.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("time grid starts at zero and is geometric") {
  const auto t = small_config(0.1).time_grid();
  REQUIRE(t.size() == 13);
  CHECK(t[0] == 0.0);
  CHECK(t[1] == doctest::Approx(0.05));
  CHECK(t.back() == doctest::Approx(10.0));
  CHECK(t[3] / t[2] == doctest::Approx(t[8] / t[7]));
}

TEST_CASE("zero data is a fixed point") {
  const auto cfg = small_config(0.0);
  const Trajectory tr = run_picard(initial_grid_field(cfg), cfg);
  for (const auto& level : tr.iterates)
    for (const auto& e : level) {
      CHECK(e.lq == 0.0);
      CHECK(e.linf == 0.0);
      CHECK(e.grad_ln == 0.0);
    }
  CHECK(x_norm(tr.times, tr.iterates.back(), cfg.alpha, cfg.q).x_norm == 0.0);
  const auto rep = contraction_report(tr, cfg);
  CHECK(rep.ratios.empty());
}

TEST_CASE("zeroed nonlinearity reproduces the heat flow bit for bit") {
  auto cfg = small_config(0.5, 2);
  cfg.nonlinear = false;
  const GridField u0 = initial_grid_field(cfg);
  const Trajectory tr = run_picard(u0, cfg, RunOptions{{6}});
  for (std::size_t n = 0; n < tr.times.size(); ++n) {
    CHECK(tr.differences[0][n].linf == 0.0);
    CHECK(tr.iterates[1][n].lq == tr.iterates[0][n].lq);
  }
  const Iterate heat = heat_iterate(u0, tr.times);
  const Iterate one = picard_step(heat, u0, cfg);
  for (std::size_t n = 0; n < heat.fields.size(); ++n)
    for (int c = 0; c < 3; ++c) CHECK(one.fields[n].data[c] == heat.fields[n].data[c]);
}

TEST_CASE("node-by-node run agrees with classical steps") {
  const auto cfg = small_config(0.5, 2);
  const GridField u0 = initial_grid_field(cfg);
  const std::size_t last = cfg.time_grid().size() - 1;
  const Trajectory tr = run_picard(u0, cfg, RunOptions{{4, last}});
  Iterate it = heat_iterate(u0, cfg.time_grid());
  it = picard_step(it, u0, cfg);
  it = picard_step(it, u0, cfg);
  CHECK(rel_l2(tr.snapshots.at(4), it.fields[4]) < 1e-13);
  CHECK(rel_l2(tr.snapshots.at(last), it.fields[last]) < 1e-13);
  const NormEntry e = norm_entry(it.fields[last], cfg.q);
  CHECK(e.linf == doctest::Approx(tr.iterates[2][last].linf).epsilon(1e-12));
  CHECK(e.grad_ln == doctest::Approx(tr.iterates[2][last].grad_ln).epsilon(1e-12));
}

TEST_CASE("iterates stay solenoidal") {
  const auto cfg = small_config(1.0, 3);
  const Trajectory tr = run_picard(initial_grid_field(cfg), cfg);
  CHECK(tr.max_divergence < 1e-10);
}

TEST_CASE("first correction is quadratic in the amplitude") {
  auto run = [](double m0) {
    const auto cfg = small_config(m0, 1);
    const Trajectory tr = run_picard(initial_grid_field(cfg), cfg);
    return x_norm(tr.times, tr.differences[0], cfg.alpha, cfg.q).x_norm;
  };
  const double a = run(1e-4), b = run(5e-5);
  MESSAGE("||u1 - u0||_X ratio under halving: " << a / b);
  CHECK(a / b == doctest::Approx(4.0).epsilon(0.5 / 4.0));
  CHECK(a / (1e-4 * 1e-4) == doctest::Approx(b / (5e-5 * 5e-5)).epsilon(0.01));
}

TEST_CASE("small data contracts and the X norm settles") {
  const auto cfg = small_config(0.5, 6);
  const Trajectory tr = run_picard(initial_grid_field(cfg), cfg);
  const ContractionReport rep = contraction_report(tr, cfg);
  REQUIRE(!rep.ratios.empty());
  for (double r : rep.ratios) CHECK(r <= 0.5);
  CHECK(rep.contracting);
  CHECK(rep.converged);
  CHECK(rep.converged_iterations <= 6);
  const double x1 = x_norm(tr.times, tr.iterates[1], cfg.alpha, cfg.q).x_norm;
  for (int m = 2; m < tr.levels(); ++m)
    CHECK(x_norm(tr.times, tr.iterates[m], cfg.alpha, cfg.q).x_norm <= 1.05 * x1);
}

TEST_CASE("large data is reported as non-contracting without failing") {
  const auto cfg = small_config(40.0, 3);
  Trajectory tr;
  REQUIRE_NOTHROW(tr = run_picard(initial_grid_field(cfg), cfg));
  const ContractionReport rep = contraction_report(tr, cfg);
  MESSAGE("max ratio at m0 = 40: " << rep.max_ratio);
  CHECK_FALSE(rep.contracting);
}

TEST_CASE("bisection brackets the contraction threshold") {
  auto cfg = small_config(1.0);
  cfg.time_nodes = 6;
  const ThresholdResult th = bisect_threshold(cfg, 1.0, 64.0, 6, 3);
  MESSAGE("threshold " << th.threshold << " upper " << th.upper);
  CHECK(th.threshold < th.upper);
  CHECK(th.upper / th.threshold == doctest::Approx(std::pow(64.0, 1.0 / 64.0)));
  CHECK(th.history.size() == 8);
  CHECK_THROWS_AS(bisect_threshold(cfg, 32.0, 64.0, 2, 3), DomainError);
}

TEST_CASE("x norm weights") {
  std::vector<double> times{0.0, 1.0, 10.0, 100.0};
  std::vector<NormEntry> ledger;
  for (double t : times) ledger.push_back(NormEntry{0.0, std::pow(1.0 + t, -0.5), 0.0});
  const XNormReport rep = x_norm(times, ledger, 1.0, 4.0);
  CHECK(rep.terms[0] == doctest::Approx(1.0));
  CHECK(rep.terms[1] == 0.0);
  CHECK(rep.x_norm == doctest::Approx(1.0));
  const auto w = x_weights(3.0, 3.0, 4.0);
  CHECK(w[0] == doctest::Approx(8.0 * std::log(5.0)));
  CHECK(w[2] == doctest::Approx(std::sqrt(3.0) * 4.0 * std::log(5.0)));
  CHECK_THROWS_AS(x_norm(times, {}, 1.0, 4.0), DomainError);
}

TEST_CASE("contraction report needs three iterates") {
  auto cfg = small_config(0.1, 1);
  const Trajectory tr = run_picard(initial_grid_field(cfg), cfg);
  CHECK_THROWS_AS(contraction_report(tr, cfg), DomainError);
}

TEST_CASE("restart from an intermediate node reproduces the trajectory") {
  const auto cfg = small_config(1.0, 8);
  const GridField u0 = initial_grid_field(cfg);
  const auto times = cfg.time_grid();
  const std::size_t k = 6, last = times.size() - 1;
  const Trajectory tr = run_picard(u0, cfg, RunOptions{{k, last}});
  PicardConfig rc = cfg;
  rc.explicit_times.clear();
  for (std::size_t n = k; n < times.size(); ++n) rc.explicit_times.push_back(times[n] - times[k]);
  const Trajectory again = run_picard(tr.snapshots.at(k), rc, RunOptions{{last - k}});
  const double gap = rel_l2(again.snapshots.at(last - k), tr.snapshots.at(last));
  const ContractionReport rep = contraction_report(tr, cfg);
  MESSAGE("restart gap " << gap << ", tail " << rep.difference_norms.back());
  CHECK(gap < 2.0 * cfg.contraction_tolerance);
}

TEST_CASE("converged iterate satisfies the integral equation on a finer mesh") {
  auto cfg = small_config(1.0, 8);
  const GridField u0 = initial_grid_field(cfg);
  Iterate it = heat_iterate(u0, cfg.time_grid());
  for (int m = 0; m < 8; ++m) it = picard_step(it, u0, cfg);
  const std::size_t node = it.times.size() - 1;
  const ResubstitutionResult r = resubstitution_residual(it, u0, node, semigroup::TimeGridSpec{32, 1e-6});
  MESSAGE("resubstitution residual " << r.residual << ", quadrature estimate " << r.quadrature_estimate);
  CHECK(r.residual <= std::max(r.quadrature_estimate, 1e-6));
}

TEST_CASE("bilinear probe matches the Oseen oracle for Gaussian forcing") {
  // F_ij = c_ij Gamma(x, s0) gives e^{t Delta} P div F = c_lj d_j G_il(x, t + s0).
  const GridSpec spec{64, 16.0};
  const double s0 = 1.0;
  GridField u(spec);
  // u = (a, b, 0) sqrt(Gamma) so that u (x) u = (a, b, 0) (x) (a, b, 0) Gamma
  const double a = 0.7, b = -0.4;
  for (int k = 0; k < spec.N; ++k)
    for (int j = 0; j < spec.N; ++j)
      for (int i = 0; i < spec.N; ++i) {
        const double g = std::sqrt(kernels::heat_kernel(spec.node(i, j, k), s0));
        u.data[0][spec.index(i, j, k)] = a * g;
        u.data[1][spec.index(i, j, k)] = b * g;
      }
  const std::vector<double> times{0.5, 1.0, 2.0};
  const BilinearProbe probe = bilinear_decay_probe(u, 2.0, INFINITY, times);
  CHECK(probe.predicted_slope == doctest::Approx(-1.25));
  const double c[2] = {a, b};
  for (std::size_t n = 0; n < times.size(); ++n) {
    double peak = 0.0;
    for (int k = 0; k < spec.N; ++k)
      for (int j = 0; j < spec.N; ++j)
        for (int i = 0; i < spec.N; ++i) {
          const Vec3 x = spec.node(i, j, k);
          if (norm(x) > 0.8 * spec.L) continue;
          const Tensor dG = kernels::oseen_tensor(x, times[n] + s0, 1);
          Vec3 v{};
          for (int ii = 0; ii < 3; ++ii)
            for (int l = 0; l < 2; ++l)
              for (int jj = 0; jj < 2; ++jj) v[ii] += c[l] * c[jj] * dG(ii, l, jj);
          peak = std::max(peak, norm(v));
        }
    const double grid = probe.series.points[n].second;
    MESSAGE("t = " << times[n] << ": grid " << grid << " oracle " << peak);
    CHECK(grid == doctest::Approx(peak).epsilon(1e-4));
  }
}
