#include "decaylab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "decaylab/errors.hpp"

namespace decaylab::kernels {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_time(double t, const char* who) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be positive, got " + std::to_string(t));
}

}  // namespace

KernelOrder::KernelOrder(int m) : m_(m) {
  if (m < 0 || m > 3) throw UnsupportedError("KernelOrder: derivative order must be in 0..3, got " + std::to_string(m));
}

double heat_kernel(const Vec3& x, double t) {
  require_positive_time(t, "heat_kernel");
  return std::pow(4.0 * kPi * t, -1.5) * std::exp(-dot(x, x) / (4.0 * t));
}

Vec3 grad_heat_kernel(const Vec3& x, double t) {
  const double g = heat_kernel(x, t);
  return (-g / (2.0 * t)) * x;
}

double newtonian(const Vec3& x) {
  const double r = norm(x);
  if (r == 0.0) throw SingularityError("newtonian: singular at x = 0");
  return -1.0 / (4.0 * kPi * r);
}

Vec3 grad_newtonian(const Vec3& x) {
  const double r = norm(x);
  if (r == 0.0) throw SingularityError("grad_newtonian: singular at x = 0");
  return (1.0 / (4.0 * kPi * r * r * r)) * x;
}

Mat3 hess_newtonian(const Vec3& x) {
  const double r = norm(x);
  if (r == 0.0) throw SingularityError("hess_newtonian: singular at x = 0");
  const double r2 = r * r;
  const double c = 1.0 / (4.0 * kPi * r2 * r2 * r);
  Mat3 h{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h[i][j] = c * ((i == j ? r2 : 0.0) - 3.0 * x[i] * x[j]);
  return h;
}

std::array<double, 4> erf_ratio_derivatives(double s, double series_threshold) {
  std::array<double, 4> e{};
  const double two_over_sqrt_pi = 2.0 / std::sqrt(kPi);
  if (s < series_threshold * series_threshold) {
    // e^(k)(s) = 2/sqrt(pi) sum_{n>=k} (-1)^n s^{n-k} / ((n-k)! (2n+1))
    for (int k = 0; k < 4; ++k) {
      double term_pow = 1.0;  // s^{n-k} / (n-k)!
      double sum = 0.0;
      for (int n = k; n < k + 40; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        sum += sign * term_pow / (2.0 * n + 1.0);
        term_pow *= s / static_cast<double>(n - k + 1);
        if (term_pow < 1e-30) break;
      }
      e[k] = two_over_sqrt_pi * sum;
    }
    return e;
  }
  // Leibniz on e = h * p with h = erf(sqrt s), p = s^{-1/2}.
  const double rs = std::sqrt(s);
  const double p0 = 1.0 / rs;
  const double p1 = -0.5 * p0 / s;
  const double p2 = 0.75 * p0 / (s * s);
  const double p3 = -1.875 * p0 / (s * s * s);
  const double h0 = std::erf(rs);
  const double w = std::exp(-s) / std::sqrt(kPi);
  const double h1 = w * p0;
  const double h2 = w * (p1 - p0);
  const double h3 = w * (p2 - 2.0 * p1 + p0);
  e[0] = h0 * p0;
  e[1] = h1 * p0 + h0 * p1;
  e[2] = h2 * p0 + 2.0 * h1 * p1 + h0 * p2;
  e[3] = h3 * p0 + 3.0 * h2 * p1 + 3.0 * h1 * p2 + h0 * p3;
  return e;
}

double omega(const Vec3& x, double t, const KernelOptions& opt) {
  return omega_kernel(x, t, KernelOrder(0), opt)();
}

Tensor omega_kernel(const Vec3& x, double t, KernelOrder order, const KernelOptions& opt) {
  require_positive_time(t, "omega_kernel");
  // omega = c e(s), s = |x|^2 / 4t, c = -1 / (8 pi sqrt t).
  const double s = dot(x, x) / (4.0 * t);
  const auto e = erf_ratio_derivatives(s, opt.series_threshold);
  const double c = -1.0 / (8.0 * kPi * std::sqrt(t));
  Tensor out;
  out.rank = order.value();
  switch (order.value()) {
    case 0:
      out() = c * e[0];
      break;
    case 1:
      for (int i = 0; i < 3; ++i) out(i) = c * e[1] * x[i] / (2.0 * t);
      break;
    case 2:
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          const double xx = x[i] * x[j];
          out(i, j) = out(j, i) = c * (e[2] * xx / (4.0 * t * t) + (i == j ? e[1] / (2.0 * t) : 0.0));
        }
      break;
    case 3:
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) {
            double sym = 0.0;
            if (i == j) sym += x[k];
            if (i == k) sym += x[j];
            if (j == k) sym += x[i];
            out(i, j, k) = c * (e[3] * x[i] * x[j] * x[k] / (8.0 * t * t * t) + e[2] * sym / (4.0 * t * t));
          }
      break;
  }
  return out;
}

Tensor oseen_tensor(const Vec3& x, double t, int order, const KernelOptions& opt) {
  if (order != 0 && order != 1) throw UnsupportedError("oseen_tensor: order must be 0 or 1");
  require_positive_time(t, "oseen_tensor");
  Tensor g;
  if (order == 0) {
    g.rank = 2;
    const double gamma = heat_kernel(x, t);
    const Tensor h = omega_kernel(x, t, KernelOrder(2), opt);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = (i == j ? gamma : 0.0) - h(i, j);
    return g;
  }
  g.rank = 3;
  const Vec3 dgamma = grad_heat_kernel(x, t);
  const Tensor d3 = omega_kernel(x, t, KernelOrder(3), opt);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) g(i, j, k) = (i == j ? dgamma[k] : 0.0) - d3(i, j, k);
  return g;
}

BoundReport envelope_report(const std::function<double(const Vec3&, double)>& value, double exponent,
                            const EnvelopeProbe& probe, double budget) {
  const Vec3 dir = (1.0 / norm(probe.direction)) * probe.direction;
  const auto radii = log_space(probe.r_min, probe.r_max, probe.r_count);
  const auto times = log_space(probe.t_min, probe.t_max, probe.t_count);
  std::vector<BoundSample> samples;
  samples.reserve(radii.size() * times.size());
  for (double t : times) {
    for (double r : radii) {
      const double scale = r + std::sqrt(t);
      const double v = std::abs(value(r * dir, t));
      samples.push_back({scale, v * std::pow(scale, exponent), {r, t}});
    }
  }
  return make_bound_report(samples, budget);
}

BoundReport kernel_envelope_report(KernelOrder order, const EnvelopeProbe& probe, double budget) {
  const int k = order.value();
  return envelope_report([k](const Vec3& x, double t) { return omega_kernel(x, t, KernelOrder(k)).frobenius(); },
                         1.0 + k, probe, budget);
}

}  // namespace decaylab::kernels
