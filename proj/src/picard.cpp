#include "decaylab/picard.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>

#include "decaylab/errors.hpp"
#include "decaylab/initial_data.hpp"

namespace decaylab::picard {

namespace {

constexpr cplx kI(0.0, 1.0);
using semigroup::DuhamelAccumulator;

double kpow(double x, double q) {
  if (q == 2.0) return x * x;
  if (q == 3.0) return x * x * x;
  if (q == 4.0) {
    const double x2 = x * x;
    return x2 * x2;
  }
  return std::pow(x, q);
}

/// Norm functionals restricted to the truncation ball |x| <= 0.8 L.
class BallNorms {
 public:
  explicit BallNorms(const GridSpec& spec) : h3_(std::pow(spec.h(), 3)) {
    const double R = 0.8 * spec.L;
    for (int k = 0; k < spec.N; ++k)
      for (int j = 0; j < spec.N; ++j)
        for (int i = 0; i < spec.N; ++i)
          if (norm(spec.node(i, j, k)) <= R) inside_.push_back(spec.index(i, j, k));
    mag_.resize(inside_.size());
  }

  /// mag(idx) must return the pointwise magnitude at a flat grid index.
  template <class Mag>
  std::pair<double, double> lq_and_sup(const Mag& mag, double q) {
    double peak = 0.0;
    for (std::size_t p = 0; p < inside_.size(); ++p) {
      mag_[p] = mag(inside_[p]);
      peak = std::max(peak, mag_[p]);
    }
    if (!(peak > 0.0)) return {peak == 0.0 ? 0.0 : peak, peak};
    const double inv = 1.0 / peak;
    double acc = 0.0;
    for (double m : mag_) acc += kpow(m * inv, q);
    return {peak * std::pow(acc * h3_, 1.0 / q), peak};
  }

 private:
  double h3_;
  std::vector<std::size_t> inside_;
  std::vector<double> mag_;
};

/// Physical velocity and gradient of one iterate at one node.
struct PhysicalState {
  std::array<RealArray, 3> u;
  std::array<RealArray, 9> g;  // g[3 c + d] = d_d u_c
  explicit PhysicalState(const Spectral& sp) {
    for (auto& a : u) a = sp.make_real();
    for (auto& a : g) a = sp.make_real();
  }
};

NormEntry ledger_entry(BallNorms& ball, const PhysicalState& s, const PhysicalState* minus, double q) {
  NormEntry e;
  auto umag = [&](std::size_t idx) {
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double v = minus ? s.u[c][idx] - minus->u[c][idx] : s.u[c][idx];
      acc += v * v;
    }
    return std::sqrt(acc);
  };
  auto gmag = [&](std::size_t idx) {
    double acc = 0.0;
    for (int c = 0; c < 9; ++c) {
      const double v = minus ? s.g[c][idx] - minus->g[c][idx] : s.g[c][idx];
      acc += v * v;
    }
    return std::sqrt(acc);
  };
  std::tie(e.lq, e.linf) = ball.lq_and_sup(umag, q);
  e.grad_ln = ball.lq_and_sup(gmag, 3.0).first;
  if (!std::isfinite(e.lq) || !std::isfinite(e.linf) || !std::isfinite(e.grad_ln))
    throw SolverError("non-finite norm");
  return e;
}

/// Shared spectral machinery of the scheme.
class Engine {
 public:
  Engine(const GridSpec& spec, bool dealias)
      : sp_(spec), dealias_(dealias), lambda_(sp_.modes()), tmp_c_(sp_.make_complex()), tmp_r_(sp_.make_real()) {
    sp_.for_each_mode([&](std::size_t idx, const std::array<double, 3>& k, const std::array<double, 3>&) {
      lambda_[idx] = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    });
  }

  const Spectral& sp() const { return sp_; }

  void heat_factor(double t, std::vector<double>& E) const {
    E.resize(lambda_.size());
    for (std::size_t i = 0; i < lambda_.size(); ++i) E[i] = std::exp(-lambda_[i] * t);
  }

  /// Velocity, gradient and divergence ratio of a spectral iterate.
  double to_physical(const SpectralField& s, PhysicalState& out) {
    for (int c = 0; c < 3; ++c) sp_.backward(s.c[c], out.u[c]);
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d) {
        sp_.for_each_mode([&](std::size_t idx, const std::array<double, 3>&, const std::array<double, 3>& kd) {
          tmp_c_[idx] = kI * kd[d] * s.c[c][idx];
        });
        sp_.backward(tmp_c_, out.g[3 * c + d]);
      }
    double div2 = 0.0, grad2 = 0.0;
    const int nh = sp_.nx_half(), n = sp_.spec().N;
    sp_.for_each_mode([&](std::size_t idx, const std::array<double, 3>&, const std::array<double, 3>& kd) {
      const int kx = static_cast<int>(idx % nh);
      const double w = (kx == 0 || (n % 2 == 0 && kx == n / 2)) ? 1.0 : 2.0;
      const cplx dv = kd[0] * s.c[0][idx] + kd[1] * s.c[1][idx] + kd[2] * s.c[2][idx];
      const double kk = kd[0] * kd[0] + kd[1] * kd[1] + kd[2] * kd[2];
      div2 += w * std::norm(dv);
      grad2 += w * kk * (std::norm(s.c[0][idx]) + std::norm(s.c[1][idx]) + std::norm(s.c[2][idx]));
    });
    return grad2 > 0.0 ? std::sqrt(div2 / grad2) : 0.0;
  }

  /// P div(u (x) u) with the optional 2/3 rule.
  void bilinear(const std::array<RealArray, 3>& u, SpectralField& g) {
    for (auto& c : g.c) std::fill(c.begin(), c.end(), cplx(0.0, 0.0));
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        for (std::size_t p = 0; p < tmp_r_.size(); ++p) tmp_r_[p] = u[i][p] * u[j][p];
        sp_.forward(tmp_r_, tmp_c_);
        sp_.for_each_mode([&](std::size_t idx, const std::array<double, 3>&, const std::array<double, 3>& kd) {
          g.c[i][idx] += kI * kd[j] * tmp_c_[idx];
          if (i != j) g.c[j][idx] += kI * kd[i] * tmp_c_[idx];
        });
      }
    finish_projection(g);
  }

  void finish_projection(SpectralField& g) const {
    sp_.for_each_mode([&](std::size_t idx, const std::array<double, 3>&, const std::array<double, 3>& kd) {
      if (dealias_ && !sp_.dealias_keep(idx)) {
        for (auto& c : g.c) c[idx] = 0.0;
        return;
      }
      const double kk = kd[0] * kd[0] + kd[1] * kd[1] + kd[2] * kd[2];
      if (kk == 0.0) return;
      const cplx dot = (kd[0] * g.c[0][idx] + kd[1] * g.c[1][idx] + kd[2] * g.c[2][idx]) / kk;
      for (int c = 0; c < 3; ++c) g.c[c][idx] -= kd[c] * dot;
    });
  }

 private:
  Spectral sp_;
  bool dealias_;
  std::vector<double> lambda_;
  ComplexArray tmp_c_;
  RealArray tmp_r_;
};

void require_grid(const GridField& u0, const GridSpec& spec) {
  if (u0.spec.N != spec.N || u0.spec.L != spec.L) throw GridError("picard: initial field does not live on cfg.grid");
  if (!u0.all_finite()) throw SolverError("picard: initial field is not finite");
}

std::string at_node(int m, std::size_t n, double t) {
  std::ostringstream os;
  os << "iterate " << m << ", node " << n << " (t = " << t << ")";
  return os.str();
}

double x_sup(const std::vector<double>& times, const std::vector<NormEntry>& ledger, double alpha, double q) {
  return x_norm(times, ledger, alpha, q).x_norm;
}

}  // namespace

void PicardConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("PicardConfig: " + msg); };
  if (!(alpha >= 1.0 && alpha <= 3.0)) fail("alpha must lie in [1, 3]");
  if (!std::isfinite(q) || !(q > 3.0 / alpha)) fail("q must exceed 3 / alpha");
  if (alpha > 1.0 && !(q < 3.0 / (alpha - 1.0))) fail("q must be below 3 / (alpha - 1)");
  if (q > 12.0) fail("q above 12 is not supported");
  if (!std::isfinite(m0) || m0 < 0.0) fail("m0 must be finite and non-negative");
  try {
    grid.validate();
  } catch (const GridError& e) {
    fail(e.what());
  }
  if (max_iterations < 1) fail("max_iterations must be at least 1");
  if (!(contraction_tolerance > 0.0)) fail("contraction_tolerance must be positive");
  const double t_limit = std::pow(0.2 * grid.L, 2);
  if (explicit_times.empty()) {
    if (!(t_first > 0.0) || !(t_final > t_first)) fail("need 0 < t_first < t_final");
    if (time_nodes < 2) fail("time_nodes must be at least 2");
    if (t_final > t_limit) fail("sqrt(t_final) exceeds 0.2 L");
  } else {
    if (explicit_times.size() < 2 || explicit_times.front() != 0.0) fail("explicit_times must start at 0");
    for (std::size_t i = 1; i < explicit_times.size(); ++i)
      if (!(explicit_times[i] > explicit_times[i - 1])) fail("explicit_times must increase");
    if (explicit_times.back() > t_limit) fail("sqrt(last explicit time) exceeds 0.2 L");
  }
}

std::vector<double> PicardConfig::time_grid() const {
  if (!explicit_times.empty()) return explicit_times;
  std::vector<double> t{0.0};
  const auto pos = log_space(t_first, t_final, static_cast<std::size_t>(time_nodes));
  t.insert(t.end(), pos.begin(), pos.end());
  return t;
}

GridField initial_grid_field(const PicardConfig& cfg) {
  const InitialField field = make_slow_decay_field(RadialProfile{cfg.alpha, cfg.m0});
  GridField g = semigroup::leray_project(sample_to_grid(field, cfg.grid));
  g.meta.provenance = "picard initial data, leray projected";
  return g;
}

Trajectory run_picard(const GridField& u0, const PicardConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  require_grid(u0, cfg.grid);
  const int M = cfg.max_iterations;
  Engine eng(cfg.grid, cfg.dealias);
  const Spectral& sp = eng.sp();
  BallNorms ball(cfg.grid);

  Trajectory traj;
  traj.times = cfg.time_grid();
  const std::size_t nt = traj.times.size();
  traj.iterates.assign(M + 1, std::vector<NormEntry>(nt));
  traj.differences.assign(M, std::vector<NormEntry>(nt));
  traj.correction.assign(nt, NormEntry{});

  const SpectralField u0_hat = sp.forward(u0);
  std::vector<std::unique_ptr<DuhamelAccumulator>> acc;  // acc[m] holds W for iterate m >= 1
  acc.emplace_back(nullptr);
  for (int m = 1; m <= M; ++m) acc.emplace_back(std::make_unique<DuhamelAccumulator>(sp));
  std::vector<SpectralField> g_prev(M);
  if (cfg.nonlinear)
    for (auto& g : g_prev) g = sp.make_spectral();

  PhysicalState level0(sp), buf_a(sp), buf_b(sp);
  SpectralField uhat = sp.make_spectral(), g_now = sp.make_spectral();
  std::vector<double> E;

  for (std::size_t n = 0; n < nt; ++n) {
    const double t = traj.times[n];
    eng.heat_factor(t, E);
    PhysicalState* prev = nullptr;
    for (int m = 0; m <= M; ++m) {
      for (int c = 0; c < 3; ++c)
        for (std::size_t idx = 0; idx < sp.modes(); ++idx)
          uhat.c[c][idx] = m == 0 ? E[idx] * u0_hat.c[c][idx] : E[idx] * u0_hat.c[c][idx] - acc[m]->value().c[c][idx];
      PhysicalState& cur = m == 0 ? level0 : (m % 2 == 1 ? buf_a : buf_b);
      traj.max_divergence = std::max(traj.max_divergence, eng.to_physical(uhat, cur));
      try {
        traj.iterates[m][n] = ledger_entry(ball, cur, nullptr, cfg.q);
        if (prev) traj.differences[m - 1][n] = ledger_entry(ball, cur, prev, cfg.q);
        if (m == M) traj.correction[n] = ledger_entry(ball, cur, &level0, cfg.q);
      } catch (const SolverError&) {
        throw SolverError("run_picard: non-finite values at " + at_node(m, n, t));
      }
      if (m == M && std::find(opt.snapshot_nodes.begin(), opt.snapshot_nodes.end(), n) != opt.snapshot_nodes.end()) {
        GridField snap(cfg.grid);
        for (int c = 0; c < 3; ++c) snap.data[c] = cur.u[c];
        snap.meta.time = t;
        snap.meta.solenoidal = true;
        snap.meta.window_radius = u0.meta.window_radius;
        snap.meta.provenance = "picard iterate " + std::to_string(M);
        traj.snapshots.emplace(n, std::move(snap));
      }
      if (m < M && cfg.nonlinear) {
        eng.bilinear(cur.u, g_now);
        if (n > 0) acc[m + 1]->advance(traj.times[n - 1], t, g_prev[m], g_now);
        std::swap(g_prev[m], g_now);
      }
      prev = &cur;
    }
  }
  for (std::size_t n : opt.snapshot_nodes)
    if (n >= nt) throw DomainError("run_picard: snapshot node out of range");
  return traj;
}

NormEntry norm_entry(const GridField& u, double q) {
  Engine eng(u.spec, false);
  BallNorms ball(u.spec);
  PhysicalState s(eng.sp());
  eng.to_physical(eng.sp().forward(u), s);
  return ledger_entry(ball, s, nullptr, q);
}

Iterate heat_iterate(const GridField& u0, const std::vector<double>& times) {
  Iterate it;
  it.times = times;
  const Spectral sp(u0.spec);
  const SpectralField u0_hat = sp.forward(u0);
  for (double t : times) {
    SpectralField s = u0_hat;
    semigroup::heat_multiply(sp, s, t);
    GridMetadata meta = u0.meta;
    meta.time = t;
    it.fields.push_back(sp.backward(s, meta));
  }
  return it;
}

Iterate picard_step(const Iterate& prev, const GridField& u0, const PicardConfig& cfg) {
  if (prev.times.size() != prev.fields.size() || prev.times.empty())
    throw DomainError("picard_step: iterate has mismatched times and fields");
  Engine eng(u0.spec, cfg.dealias);
  const Spectral& sp = eng.sp();
  const SpectralField u0_hat = sp.forward(u0);
  DuhamelAccumulator acc(sp);
  SpectralField g_prev = sp.make_spectral(), g_now = sp.make_spectral(), uhat = sp.make_spectral();
  std::vector<double> E;
  Iterate next;
  next.times = prev.times;
  for (std::size_t n = 0; n < prev.times.size(); ++n) {
    const double t = prev.times[n];
    if (cfg.nonlinear) {
      eng.bilinear(prev.fields[n].data, g_now);
      if (n > 0) acc.advance(prev.times[n - 1], t, g_prev, g_now);
      std::swap(g_prev, g_now);
    }
    eng.heat_factor(t, E);
    for (int c = 0; c < 3; ++c)
      for (std::size_t idx = 0; idx < sp.modes(); ++idx)
        uhat.c[c][idx] = E[idx] * u0_hat.c[c][idx] - acc.value().c[c][idx];
    GridMetadata meta = u0.meta;
    meta.time = t;
    meta.solenoidal = true;
    GridField f = sp.backward(uhat, meta);
    if (!f.all_finite()) throw SolverError("picard_step: non-finite values at node " + std::to_string(n));
    next.fields.push_back(std::move(f));
  }
  return next;
}

ResubstitutionResult resubstitution_residual(const Iterate& it, const GridField& u0, std::size_t node,
                                             const semigroup::TimeGridSpec& grid) {
  if (node == 0 || node >= it.times.size()) throw DomainError("resubstitution_residual: node out of range");
  const GridSpec spec = u0.spec;
  const Spectral sp(spec);
  auto product = [&](std::size_t n) {
    semigroup::TensorField F(spec);
    const auto& u = it.fields[n].data;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (std::size_t p = 0; p < u[i].size(); ++p) F(i, j)[p] = u[i][p] * u[j][p];
    // same 2/3 filter as the scheme, applied to the tensor
    ComplexArray c = sp.make_complex();
    for (auto& comp : F.data) {
      sp.forward(comp, c);
      for (std::size_t idx = 0; idx < sp.modes(); ++idx)
        if (!sp.dealias_keep(idx)) c[idx] = 0.0;
      sp.backward(c, comp);
    }
    return F;
  };
  std::vector<semigroup::TensorField> F;
  for (std::size_t n = 0; n <= node; ++n) F.push_back(product(n));
  auto interp = [&](double tau) {
    std::size_t b = 1;
    while (b < node && it.times[b] < tau) ++b;
    const double ta = it.times[b - 1], tb = it.times[b];
    const double th = std::clamp((tau - ta) / (tb - ta), 0.0, 1.0);
    semigroup::TensorField out(spec);
    for (int s = 0; s < 9; ++s)
      for (std::size_t p = 0; p < out.data[s].size(); ++p)
        out.data[s][p] = (1.0 - th) * F[b - 1].data[s][p] + th * F[b].data[s][p];
    return out;
  };
  const double t = it.times[node];
  semigroup::TimeGridSpec relaxed = grid;
  relaxed.tolerance = std::numeric_limits<double>::infinity();
  const semigroup::DuhamelResult d = semigroup::duhamel_convolve(interp, t, relaxed);
  const GridField heat = semigroup::heat_evolve(u0, t);
  double diff2 = 0.0, ref2 = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t p = 0; p < heat.data[c].size(); ++p) {
      const double r = it.fields[node].data[c][p] - (heat.data[c][p] - d.value.data[c][p]);
      diff2 += r * r;
      ref2 += it.fields[node].data[c][p] * it.fields[node].data[c][p];
    }
  ResubstitutionResult out;
  out.residual = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
  out.quadrature_estimate = d.error_estimate;
  return out;
}

std::array<double, 3> x_weights(double t, double alpha, double q) {
  const double l = alpha == 3.0 ? std::log(2.0 + t) : 1.0;
  return {std::pow(1.0 + t, 0.5 * alpha) * l, std::pow(1.0 + t, 0.5 * alpha - 1.5 / q) * l,
          std::sqrt(t) * std::pow(1.0 + t, 0.5 * (alpha - 1.0)) * l};
}

XNormReport x_norm(const std::vector<double>& times, const std::vector<NormEntry>& ledger, double alpha, double q) {
  if (ledger.empty() || ledger.size() != times.size())
    throw DomainError("x_norm: ledger entries missing for some time nodes");
  XNormReport rep;
  rep.terms.fill(-1.0);
  for (std::size_t n = 0; n < times.size(); ++n) {
    const auto w = x_weights(times[n], alpha, q);
    const std::array<double, 3> v{w[0] * ledger[n].linf, w[1] * ledger[n].lq, w[2] * ledger[n].grad_ln};
    for (int c = 0; c < 3; ++c)
      if (v[c] > rep.terms[c]) {
        rep.terms[c] = v[c];
        rep.argmax_t[c] = times[n];
      }
  }
  rep.x_norm = rep.terms[0] + rep.terms[1] + rep.terms[2];
  return rep;
}

ContractionReport contraction_report(const Trajectory& traj, const PicardConfig& cfg) {
  if (traj.levels() < 3) throw DomainError("contraction_report: needs at least three iterates");
  ContractionReport rep;
  for (const auto& d : traj.differences) rep.difference_norms.push_back(x_sup(traj.times, d, cfg.alpha, cfg.q));
  int above_one = 0;
  for (std::size_t m = 0; m < rep.difference_norms.size(); ++m) {
    const double scale = x_sup(traj.times, traj.iterates[m + 1], cfg.alpha, cfg.q);
    const double vm = rep.difference_norms[m];
    if (rep.converged_iterations < 0 && vm <= cfg.contraction_tolerance * scale && scale > 0.0)
      rep.converged_iterations = static_cast<int>(m) + 1;
    if (m == 0) continue;
    const double prev = rep.difference_norms[m - 1];
    if (!(prev > cfg.roundoff_floor * scale)) break;
    const double rho = vm / prev;
    rep.ratios.push_back(rho);
    rep.max_ratio = std::max(rep.max_ratio, rho);
    if (rho > 1.0) ++above_one;
  }
  rep.contracting = rep.max_ratio <= 0.5;
  rep.diverging = above_one >= 2;
  rep.converged = rep.converged_iterations > 0 && rep.contracting;
  return rep;
}

ChannelReport channel_report(const std::vector<double>& times, const std::vector<NormEntry>& ledger,
                             const PicardConfig& cfg, double budget, double trend_tolerance) {
  if (ledger.size() != times.size()) throw DomainError("channel_report: ledger and times differ in length");
  ChannelReport rep;
  static const char* names[3] = {"weighted Linf", "weighted Lq", "weighted grad L3"};
  std::array<std::vector<BoundSample>, 3> samples;
  for (std::size_t n = 0; n < times.size(); ++n) {
    if (!(times[n] > 0.0)) continue;
    const auto w = x_weights(times[n], cfg.alpha, cfg.q);
    const std::array<double, 3> v{w[0] * ledger[n].linf, w[1] * ledger[n].lq, w[2] * ledger[n].grad_ln};
    for (int c = 0; c < 3; ++c) {
      samples[c].push_back(BoundSample{times[n], v[c], {times[n]}});
      rep.series[c].push(times[n], v[c]);
    }
  }
  for (int c = 0; c < 3; ++c) {
    rep.series[c].descriptor = names[c];
    rep.series[c].provenance = "picard ledger";
    rep.bounds[c] = make_bound_report(samples[c], budget, trend_tolerance, TrendMode::Stable);
  }
  return rep;
}

ThresholdResult bisect_threshold(const PicardConfig& cfg, double lo, double hi, int steps, int levels) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("bisect_threshold: need 0 < lo < hi");
  if (levels < 3) throw DomainError("bisect_threshold: need at least three iterates");
  ThresholdResult res;
  auto probe = [&](double m0) {
    PicardConfig c = cfg;
    c.m0 = m0;
    c.max_iterations = levels;
    const Trajectory tr = run_picard(initial_grid_field(c), c);
    const ContractionReport rep = contraction_report(tr, c);
    res.history.emplace_back(m0, rep.max_ratio);
    return rep.contracting;
  };
  if (!probe(lo)) throw DomainError("bisect_threshold: lower end does not contract");
  if (probe(hi)) throw DomainError("bisect_threshold: upper end contracts");
  for (int s = 0; s < steps; ++s) {
    const double mid = std::sqrt(lo * hi);
    (probe(mid) ? lo : hi) = mid;
  }
  res.threshold = lo;
  res.lower = lo;
  res.upper = hi;
  return res;
}

BilinearProbe bilinear_decay_probe(const GridField& u, double r, double q, const std::vector<double>& times) {
  if (!(r >= 1.0) || !(q >= r)) throw DomainError("bilinear_decay_probe: need 1 <= r <= q");
  const Spectral sp(u.spec);
  semigroup::TensorField F(u.spec);
  RealArray fmag(u.spec.points());
  for (std::size_t p = 0; p < fmag.size(); ++p) {
    double s2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        F(i, j)[p] = u.data[i][p] * u.data[j][p];
        s2 += F(i, j)[p] * F(i, j)[p];
      }
    fmag[p] = std::sqrt(s2);
  }
  BilinearProbe out;
  out.predicted_slope = -0.5 - 1.5 * (1.0 / r - (std::isinf(q) ? 0.0 : 1.0 / q));
  semigroup::NormProbe pr;
  pr.q = r;
  out.forcing_lr = semigroup::magnitude_norm(u.spec, fmag, pr).value;
  const SpectralField g = semigroup::projected_divergence(sp, F);
  pr.q = q;
  for (double t : times) {
    SpectralField s = g;
    semigroup::heat_multiply(sp, s, t);
    GridMetadata meta;
    meta.time = t;
    out.series.push(t, semigroup::field_norm(sp.backward(s, meta), pr).value);
  }
  out.series.descriptor = "||e^{t Delta} P div(u x u)||_q";
  out.series.provenance = "bilinear probe";
  return out;
}

void write_ledger_csv(const Trajectory& traj, const PicardConfig& cfg, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_ledger_csv: cannot open " + path);
  os << "m,t,Lq_norm,Linf_norm,grad_Ln_norm,x_weight_applied\n";
  os << std::setprecision(10);
  for (int m = 0; m < traj.levels(); ++m)
    for (std::size_t n = 0; n < traj.times.size(); ++n) {
      const NormEntry& e = traj.iterates[m][n];
      const auto w = x_weights(traj.times[n], cfg.alpha, cfg.q);
      const double applied = w[0] * e.linf + w[1] * e.lq + w[2] * e.grad_ln;
      os << m << ',' << traj.times[n] << ',' << e.lq << ',' << e.linf << ',' << e.grad_ln << ',' << applied << '\n';
    }
}

}  // namespace decaylab::picard
