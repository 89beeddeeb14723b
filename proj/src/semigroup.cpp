#include "decaylab/semigroup.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "decaylab/errors.hpp"

namespace decaylab::semigroup {

namespace {

constexpr cplx kI{0.0, 1.0};

double norm2(const std::array<double, 3>& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }

/// Parseval weight of a stored r2c mode: interior kx planes stand for two conjugate modes.
double parseval_weight(const Spectral& sp, std::size_t idx) {
  const std::size_t kx = idx % static_cast<std::size_t>(sp.nx_half());
  return (kx == 0 || static_cast<int>(kx) == sp.spec().N / 2) ? 1.0 : 2.0;
}

double spectral_l2_squared(const Spectral& sp, const SpectralField& s) {
  double total = 0.0;
  for (std::size_t idx = 0; idx < sp.modes(); ++idx) {
    const double w = parseval_weight(sp, idx);
    for (int c = 0; c < 3; ++c) total += w * std::norm(s.c[c][idx]);
  }
  return total;
}

/// int_R^inf (1 + r)^{-p} r^2 dr for p > 3.
double radial_power_tail(double R, double p) {
  const double u = 1.0 + R;
  return std::pow(u, 3.0 - p) / (p - 3.0) - 2.0 * std::pow(u, 2.0 - p) / (p - 2.0) + std::pow(u, 1.0 - p) / (p - 1.0);
}

}  // namespace

void heat_multiply(const Spectral& sp, SpectralField& s, double t) {
  if (t == 0.0) return;
  sp.for_each_mode([&](std::size_t idx, const std::array<double, 3>& k, const std::array<double, 3>&) {
    const double m = std::exp(-norm2(k) * t);
    for (int c = 0; c < 3; ++c) s.c[c][idx] *= m;
  });
}

void leray_project_inplace(const Spectral& sp, SpectralField& s) {
  sp.for_each_mode([&](std::size_t idx, const std::array<double, 3>&, const std::array<double, 3>& kd) {
    const double k2 = norm2(kd);
    if (k2 == 0.0) return;
    const cplx kdotu = kd[0] * s.c[0][idx] + kd[1] * s.c[1][idx] + kd[2] * s.c[2][idx];
    for (int c = 0; c < 3; ++c) s.c[c][idx] -= kd[c] * kdotu / k2;
  });
}

void dealias_inplace(const Spectral& sp, SpectralField& s) {
  for (std::size_t idx = 0; idx < sp.modes(); ++idx)
    if (!sp.dealias_keep(idx))
      for (int c = 0; c < 3; ++c) s.c[c][idx] = 0.0;
}

GridField heat_evolve(const GridField& field, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("heat_evolve: t must be finite and non-negative");
  if (t == 0.0) return field;
  if (std::sqrt(t) > 0.2 * field.spec.L)
    throw TruncationError("heat_evolve: sqrt(t) = " + std::to_string(std::sqrt(t)) + " exceeds 0.2 L = " +
                          std::to_string(0.2 * field.spec.L) + "; periodic images would dominate");
  const Spectral sp(field.spec);
  SpectralField s = sp.forward(field);
  heat_multiply(sp, s, t);
  GridMetadata meta = field.meta;
  meta.time += t;
  return sp.backward(s, meta);
}

GridField leray_project(const GridField& field) {
  const Spectral sp(field.spec);
  SpectralField s = sp.forward(field);
  leray_project_inplace(sp, s);
  GridMetadata meta = field.meta;
  meta.solenoidal = true;
  return sp.backward(s, meta);
}

double divergence_ratio(const GridField& field) {
  const Spectral sp(field.spec);
  const SpectralField s = sp.forward(field);
  double div2 = 0.0, grad2 = 0.0;
  sp.for_each_mode([&](std::size_t idx, const std::array<double, 3>&, const std::array<double, 3>& kd) {
    const double w = parseval_weight(sp, idx);
    const cplx d = kd[0] * s.c[0][idx] + kd[1] * s.c[1][idx] + kd[2] * s.c[2][idx];
    div2 += w * std::norm(d);
    double u2 = 0.0;
    for (int c = 0; c < 3; ++c) u2 += std::norm(s.c[c][idx]);
    grad2 += w * norm2(kd) * u2;
  });
  return grad2 > 0.0 ? std::sqrt(div2 / grad2) : 0.0;
}

TensorField::TensorField(const GridSpec& s) : spec(s) {
  for (auto& c : data) c.assign(s.points(), 0.0);
}

SpectralField projected_divergence(const Spectral& sp, const TensorField& F) {
  SpectralField g = sp.make_spectral();
  ComplexArray fij = sp.make_complex();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      sp.forward(F(i, j), fij);
      sp.for_each_mode([&](std::size_t idx, const std::array<double, 3>&, const std::array<double, 3>& kd) {
        g.c[i][idx] += kI * kd[j] * fij[idx];
      });
    }
  leray_project_inplace(sp, g);
  return g;
}

std::vector<double> graded_nodes(double t, int M) {
  if (M < 1) throw DomainError("graded_nodes: M must be positive");
  std::vector<double> nodes(M + 1);
  for (int j = 0; j <= M; ++j) {
    const double s = 1.0 - static_cast<double>(j) / M;
    nodes[j] = t * (1.0 - s * s);
  }
  nodes[M] = t;
  return nodes;
}

std::pair<double, double> product_weights(double lambda, double d) {
  const double z = -lambda * d;
  double phi1, psi;
  if (std::abs(z) < 0.5) {
    // phi1 = sum z^n / (n+1)!, psi = sum z^n / (n! (n+2))
    phi1 = 0.0;
    psi = 0.0;
    double zn_over_nfact = 1.0;
    for (int n = 0; n < 24; ++n) {
      phi1 += zn_over_nfact / (n + 1.0);
      psi += zn_over_nfact / (n + 2.0);
      zn_over_nfact *= z / (n + 1.0);
    }
  } else {
    const double ez = std::exp(z);
    phi1 = (ez - 1.0) / z;
    psi = (ez * (z - 1.0) + 1.0) / (z * z);
  }
  return {d * psi, d * (phi1 - psi)};
}

DuhamelAccumulator::DuhamelAccumulator(const Spectral& sp) : sp_(&sp), lambda_(sp.modes()), w_(sp.make_spectral()) {
  sp.for_each_mode([&](std::size_t idx, const std::array<double, 3>& k, const std::array<double, 3>&) { lambda_[idx] = norm2(k); });
}

void DuhamelAccumulator::reset() {
  for (auto& c : w_.c) std::fill(c.begin(), c.end(), cplx(0.0, 0.0));
}

void DuhamelAccumulator::advance(double a, double b, const SpectralField& g_a, const SpectralField& g_b) {
  const double d = b - a;
  if (!(d >= 0.0)) throw DomainError("DuhamelAccumulator: interval must be non-decreasing");
  if (d == 0.0) return;
  double last_lambda = -1.0, decay = 1.0, wa = 0.0, wb = 0.0;
  for (std::size_t idx = 0; idx < sp_->modes(); ++idx) {
    const double lam = lambda_[idx];
    if (lam != last_lambda) {
      decay = std::exp(-lam * d);
      std::tie(wa, wb) = product_weights(lam, d);
      last_lambda = lam;
    }
    for (int c = 0; c < 3; ++c) w_.c[c][idx] = decay * w_.c[c][idx] + wa * g_a.c[c][idx] + wb * g_b.c[c][idx];
  }
}

DuhamelResult duhamel_convolve(const std::function<TensorField(double)>& F, double t, const TimeGridSpec& grid) {
  if (!(t > 0.0)) throw DomainError("duhamel_convolve: t must be positive");
  if (grid.M < 1) throw DomainError("duhamel_convolve: M must be positive");
  const auto nodes = graded_nodes(t, 2 * grid.M);
  const TensorField first = F(nodes[0]);
  const Spectral sp(first.spec);
  DuhamelAccumulator fine(sp), coarse(sp);

  SpectralField g_prev2, g_prev = projected_divergence(sp, first);
  for (std::size_t j = 1; j < nodes.size(); ++j) {
    SpectralField g = projected_divergence(sp, F(nodes[j]));
    fine.advance(nodes[j - 1], nodes[j], g_prev, g);
    if (j % 2 == 0) coarse.advance(nodes[j - 2], nodes[j], g_prev2, g);
    g_prev2 = std::move(g_prev);
    g_prev = std::move(g);
  }

  SpectralField diff = sp.make_spectral();
  for (int c = 0; c < 3; ++c)
    for (std::size_t idx = 0; idx < sp.modes(); ++idx) diff.c[c][idx] = fine.value().c[c][idx] - coarse.value().c[c][idx];
  const double n_fine = std::sqrt(spectral_l2_squared(sp, fine.value()));
  const double n_diff = std::sqrt(spectral_l2_squared(sp, diff));

  DuhamelResult out;
  out.error_estimate = n_fine > 0.0 ? n_diff / n_fine : n_diff;
  out.fine_nodes = static_cast<int>(nodes.size());
  GridMetadata meta;
  meta.time = t;
  meta.solenoidal = true;
  meta.provenance = "duhamel";
  out.value = sp.backward(fine.value(), meta);
  if (out.error_estimate > grid.tolerance)
    throw RefinementError("duhamel_convolve: mesh-halving disagreement " + std::to_string(out.error_estimate) +
                          " exceeds tolerance " + std::to_string(grid.tolerance) + " at M = " + std::to_string(grid.M));
  return out;
}

void spectral_gradient(const Spectral& sp, const SpectralField& s, std::array<RealArray, 9>& grad) {
  ComplexArray tmp = sp.make_complex();
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d) {
      sp.for_each_mode([&](std::size_t idx, const std::array<double, 3>&, const std::array<double, 3>& kd) {
        tmp[idx] = kI * kd[d] * s.c[c][idx];
      });
      sp.backward(tmp, grad[3 * c + d]);
    }
}

NormResult magnitude_norm(const GridSpec& spec, const RealArray& magnitude, const NormProbe& probe) {
  if (!(probe.q > 1.0)) throw UnsupportedError("field_norm: q must exceed 1");
  const double R = probe.truncation_radius.value_or(0.8 * spec.L);
  if (!(R > 0.0) || R > 0.8 * spec.L * (1.0 + 1e-12))
    throw DomainError("field_norm: truncation radius must lie in (0, 0.8 L]");
  const bool sup = std::isinf(probe.q);
  const double p = probe.tail_exponent.value_or(0.0);
  const double h3 = std::pow(spec.h(), 3);
  const int n = spec.N;

  double peak = 0.0, envelope = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 x = spec.node(i, j, k);
        const double r = norm(x);
        if (r > R) continue;
        const double m = magnitude[spec.index(i, j, k)];
        peak = std::max(peak, m);
        if (r >= 0.5 * R) envelope = std::max(envelope, m * std::pow(1.0 + r, p));
      }

  NormResult out;
  out.truncation_radius = R;
  out.envelope_constant = envelope;
  if (sup) {
    out.value = peak;
  } else if (peak > 0.0) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          if (norm(spec.node(i, j, k)) > R) continue;
          acc += std::pow(magnitude[spec.index(i, j, k)] / peak, probe.q);
        }
    out.value = peak * std::pow(acc * h3, 1.0 / probe.q);
  }

  if (!probe.tail_exponent) {
    out.tail_bound = std::numeric_limits<double>::quiet_NaN();
  } else if (sup) {
    out.tail_bound = envelope * std::pow(1.0 + R, -p);
  } else if (p * probe.q > 3.0) {
    out.tail_bound = envelope * std::pow(4.0 * std::numbers::pi * radial_power_tail(R, p * probe.q), 1.0 / probe.q);
  } else {
    out.tail_bound = envelope > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return out;
}

NormResult field_norm(const GridField& field, const NormProbe& probe) {
  RealArray mag(field.spec.points());
  for (std::size_t idx = 0; idx < mag.size(); ++idx) mag[idx] = norm(field.at(idx));
  return magnitude_norm(field.spec, mag, probe);
}

NormResult gradient_norm(const GridField& field, const NormProbe& probe) {
  const Spectral sp(field.spec);
  const SpectralField s = sp.forward(field);
  std::array<RealArray, 9> grad;
  spectral_gradient(sp, s, grad);
  RealArray mag(field.spec.points());
  for (std::size_t idx = 0; idx < mag.size(); ++idx) {
    double s2 = 0.0;
    for (const auto& g : grad) s2 += g[idx] * g[idx];
    mag[idx] = std::sqrt(s2);
  }
  return magnitude_norm(field.spec, mag, probe);
}

}  // namespace decaylab::semigroup
