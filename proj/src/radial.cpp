#include "decaylab/radial.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "decaylab/bounds.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/quadrature.hpp"

namespace decaylab::radial {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaussReach = 40.0;  // exp(-reach^2 / 4) is far below double precision

/// Throws QuadratureError when the adaptive rule misses max(abs_tol, rel_tol |I|).
template <class F>
double integrate_pieces(const F& f, std::vector<double> pts, const QuadratureOptions& opt, const char* who,
                        double r, double t) {
  const AdaptiveResult res = adaptive_integrate(f, std::move(pts), opt.abs_tol, opt.rel_tol, opt.max_panels);
  if (!res.converged) {
    std::ostringstream os;
    os << who << ": quadrature did not converge (r = " << r << ", t = " << t << ", value = " << res.value
       << ", error estimate = " << res.error << ", panels = " << res.panels << ")";
    throw QuadratureError(os.str());
  }
  return res.value;
}

/// Breakpoints resolving the Gaussian window around s = r and the unit-scale core of the data.
std::vector<double> gaussian_breakpoints(double r, double t) {
  const double w = std::sqrt(t);
  const double lo = std::max(0.0, r - kGaussReach * w), hi = r + kGaussReach * w;
  std::vector<double> pts{lo, hi, std::clamp(r, lo, hi)};
  for (double c : {1.0, 3.0, 10.0, 30.0}) {
    for (double sgn : {-1.0, 1.0}) {
      const double s = r + sgn * c * w;
      if (s > lo && s < hi) pts.push_back(s);
    }
  }
  for (int e = -2; e <= 9; ++e) {
    const double s = std::pow(10.0, e);
    if (s > lo && s < hi) pts.push_back(s);
  }
  return pts;
}

void require_time(double r, double t, const char* who) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be positive");
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError(std::string(who) + ": r must be non-negative");
}

/// i1(z) / z for z >= 0.
double i1_over_z(double z) {
  if (z < 0.5) {
    // i1(z) = z sum_k (z^2/2)^k / (k! (2k+3)!!)
    double term = 1.0 / 3.0, sum = 0.0;
    const double h = 0.5 * z * z;
    for (int k = 0; k < 12; ++k) {
      sum += term;
      term *= h / ((k + 1.0) * (2.0 * k + 5.0));
    }
    return sum;
  }
  return (z * std::cosh(z) - std::sinh(z)) / (z * z * z);
}

}  // namespace

double radial_heat_oracle(const Amplitude& a, double r, double t, const QuadratureOptions& opt) {
  require_time(r, t, "radial_heat_oracle");
  const auto pts = gaussian_breakpoints(r, t);
  if (r == 0.0) {
    auto f = [&](double s) { return 4.0 * kPi * s * s * a(s) * std::exp(-s * s / (4.0 * t)); };
    return std::pow(4.0 * kPi * t, -1.5) * integrate_pieces(f, pts, opt, "radial_heat_oracle", r, t);
  }
  auto f = [&](double s) {
    const double d = r - s;
    return s * a(s) * std::exp(-d * d / (4.0 * t)) * (-std::expm1(-r * s / t));
  };
  const double pref = 1.0 / (r * std::sqrt(4.0 * kPi * t));
  // The integrand carries a factor r, so scale the absolute tolerance to the prefactor.
  QuadratureOptions inner = opt;
  inner.abs_tol = opt.abs_tol / pref;
  return pref * integrate_pieces(f, pts, inner, "radial_heat_oracle", r, t);
}

double curl_heat_ratio(const InitialField& field, double r, double t, const QuadratureOptions& opt) {
  require_time(r, t, "curl_heat_ratio");
  const auto pts = gaussian_breakpoints(r, t);
  auto f = [&](double s) {
    const double z = r * s / (2.0 * t);
    double kernel;
    if (z < 0.5) {
      kernel = std::exp(-(r * r + s * s) / (4.0 * t)) * i1_over_z(z);
    } else {
      // e^{-(r^2+s^2)/4t} i1(z) without overflow: combine the exponents first.
      const double em = std::exp(-(r - s) * (r - s) / (4.0 * t));
      const double ep = std::exp(-(r + s) * (r + s) / (4.0 * t));
      kernel = ((z - 1.0) * em + (z + 1.0) * ep) / (2.0 * z * z * z);
    }
    return field.potential_derivative(s) * s * s * s * kernel;
  };
  const double pref = std::pow(4.0 * kPi * t, -1.5) * 4.0 * kPi / (2.0 * t);
  QuadratureOptions inner = opt;
  inner.abs_tol = opt.abs_tol / pref;
  return pref * integrate_pieces(f, pts, inner, "curl_heat_ratio", r, t);
}

double curl_heat_radial_derivative(const InitialField& field, double r, double t, const QuadratureOptions& opt) {
  return r * curl_heat_ratio(field, r, t, opt);
}

Vec3 curl_heat_velocity(const InitialField& field, const Vec3& x, double t, const QuadratureOptions& opt) {
  const double g = curl_heat_ratio(field, norm(x), t, opt);
  return {g * x[1], -g * x[0], 0.0};
}

namespace {

RadialNorm lq_norm_impl(const std::function<double(double)>& V, double q, double t, double decay, double angular,
                        const QuadratureOptions& opt) {
  if (!(q > 1.0)) throw UnsupportedError("radial norm: q must exceed 1");
  RadialNorm out;
  const double w = std::sqrt(t);
  out.r_max = 1e3 * (1.0 + w);
  if (std::isinf(q)) {
    std::vector<double> rs{0.0};
    for (double r : log_space(1e-3 * (1.0 + w), out.r_max, 241)) rs.push_back(r);
    std::size_t best = 0;
    std::vector<double> vals(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      vals[i] = std::abs(V(rs[i]));
      if (vals[i] > vals[best]) best = i;
    }
    double arg = rs[best], val = vals[best];
    if (best > 0 && best + 1 < rs.size()) {
      auto neg = [&](double r) { return -std::abs(V(r)); };
      const auto res = boost::math::tools::brent_find_minima(neg, rs[best - 1], rs[best + 1], 40);
      if (-res.second > val) {
        arg = res.first;
        val = -res.second;
      }
    }
    out.value = val;
    out.argmax = arg;
    return out;
  }
  if (!(decay * q > 3.0)) throw DomainError("radial norm: tail not summable (decay * q <= 3)");
  std::vector<double> pts{0.0, out.r_max};
  for (double c : {0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0}) pts.push_back(std::min(out.r_max, c * (1.0 + w)));
  for (int e = -1; e <= 9; ++e) pts.push_back(std::min(out.r_max, std::pow(10.0, e)));
  auto f = [&](double r) { return angular * r * r * std::pow(std::abs(V(r)), q); };
  QuadratureOptions outer = opt;
  outer.rel_tol = std::max(opt.rel_tol, 1e-8);
  outer.abs_tol = 0.0;
  const double body = integrate_pieces(f, pts, outer, "radial norm", out.r_max, t);
  const double vr = std::abs(V(out.r_max));
  const double tail = angular * std::pow(vr, q) * std::pow(out.r_max, 3.0) / (decay * q - 3.0);
  out.value = std::pow(body + tail, 1.0 / q);
  out.tail = tail;
  return out;
}

}  // namespace

RadialNorm scalar_lq_norm(const std::function<double(double)>& V, double q, double t, double decay,
                          const QuadratureOptions& opt) {
  return lq_norm_impl(V, q, t, decay, 4.0 * kPi, opt);
}

RadialNorm curl_lq_norm(const InitialField& field, double q, double t, const QuadratureOptions& opt) {
  auto dF = [&](double r) { return curl_heat_radial_derivative(field, r, t, opt); };
  // int over S^2 of |sin theta|^q
  const double angular =
      std::isinf(q) ? 1.0 : 2.0 * kPi * std::sqrt(kPi) * std::tgamma(0.5 * (q + 2.0)) / std::tgamma(0.5 * (q + 3.0));
  return lq_norm_impl(dF, q, t, field.profile().alpha, angular, opt);
}

}  // namespace decaylab::radial
