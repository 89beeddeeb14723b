#include "decaylab/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "decaylab/errors.hpp"

namespace decaylab {

double RadialProfile::amplitude(double r) const { return m0 * std::pow(1.0 + r * r, -0.5 * alpha); }

void RadialProfile::validate() const {
  if (!(alpha > 0.0 && alpha <= 3.0)) throw DomainError("RadialProfile: alpha must lie in (0, 3], got " + std::to_string(alpha));
  if (!(m0 >= 0.0) || !std::isfinite(m0)) throw DomainError("RadialProfile: m0 must be finite and non-negative");
}

InitialField::InitialField(RadialProfile profile) : profile_(profile) { profile_.validate(); }

Vec3 InitialField::operator()(const Vec3& x) const {
  const double r2 = dot(x, x);
  const double c = profile_.m0 * std::pow(1.0 + r2, -0.5 * (1.0 + profile_.alpha));
  return {c * x[1], -c * x[0], 0.0};
}

double InitialField::potential(double r) const {
  const double a = profile_.alpha;
  if (a == 1.0) return 0.5 * profile_.m0 * std::log1p(r * r);
  return profile_.m0 * std::pow(1.0 + r * r, 0.5 * (1.0 - a)) / (1.0 - a);
}

double InitialField::potential_derivative(double r) const {
  return profile_.m0 * r * std::pow(1.0 + r * r, -0.5 * (1.0 + profile_.alpha));
}

InitialField InitialField::scaled(double factor) const {
  RadialProfile p = profile_;
  p.m0 *= factor;
  return InitialField(p);
}

InitialField make_slow_decay_field(const RadialProfile& profile) { return InitialField(profile); }

double effective_m0(const InitialField& field, const std::vector<double>& radii) {
  if (radii.empty()) throw DomainError("effective_m0: empty probe set");
  const double a = field.profile().alpha;
  double best = 0.0;
  for (double r : radii) best = std::max(best, std::pow(1.0 + r, a) * norm(field({r, 0.0, 0.0})));
  return best;
}

double cosine_window(double r, double r_in, double r_out) {
  if (r <= r_in) return 1.0;
  if (r >= r_out) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (r - r_in) / (r_out - r_in)));
}

GridField sample_to_grid(const InitialField& field, const GridSpec& box) {
  box.validate();
  GridField g(box);
  const double r_in = 0.8 * box.L;
  g.meta.window_radius = r_in;
  g.meta.provenance = "curl-of-potential alpha=" + std::to_string(field.profile().alpha) +
                      " m0=" + std::to_string(field.profile().m0);
  const int n = box.N;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 x = box.node(i, j, k);
        const double w = cosine_window(norm(x), r_in, box.L);
        const Vec3 u = field(x);
        const std::size_t idx = box.index(i, j, k);
        for (int c = 0; c < 3; ++c) g.comp(c)[idx] = w * u[c];
      }
  return g;
}

}  // namespace decaylab
