#pragma once

#include <vector>

#include "decaylab/grid.hpp"
#include "decaylab/vec.hpp"

namespace decaylab {

/// Scalar amplitude a(r) = m0 (1 + r^2)^{-alpha/2}.
struct RadialProfile {
  double alpha = 1.0;
  double m0 = 1.0;

  double amplitude(double r) const;
  /// Throws DomainError unless alpha is in (0, 3] and m0 >= 0 is finite.
  void validate() const;
};

/// Solenoidal field u0 = curl(f(|x|) e3), f'(r) = m0 r (1 + r^2)^{-(1+alpha)/2}, so that
/// u0(x) = m0 (1 + |x|^2)^{-(1+alpha)/2} (x2, -x1, 0) and |u0| ~ |x|^{-alpha} off the e3 axis.
class InitialField {
 public:
  explicit InitialField(RadialProfile profile);

  const RadialProfile& profile() const { return profile_; }
  Vec3 operator()(const Vec3& x) const;
  /// Stream potential f(r); grows like r^{1-alpha} for alpha < 1 and like ln r at alpha = 1.
  double potential(double r) const;
  double potential_derivative(double r) const;
  /// Same field with amplitude scaled by `factor`.
  InitialField scaled(double factor) const;

 private:
  RadialProfile profile_;
};

InitialField make_slow_decay_field(const RadialProfile& profile);

/// sup over probes r e1 of (1 + r)^alpha |u0(r e1)|. Throws DomainError on an empty probe set.
double effective_m0(const InitialField& field, const std::vector<double>& radii);

/// Smooth radial window: 1 on |x| <= r_in, cosine taper to 0 at |x| = r_out.
double cosine_window(double r, double r_in, double r_out);

/// Samples u0 at grid nodes under the window on [0.8 L, L].
GridField sample_to_grid(const InitialField& field, const GridSpec& box);

/// Samples a radial scalar a(|x|) into component 0 (other components zero) under the same window.
template <class F>
GridField sample_scalar_to_grid(const F& a, const GridSpec& box);

}  // namespace decaylab

#include "decaylab/initial_data_impl.hpp"
