#pragma once

#include <functional>

#include "decaylab/bounds.hpp"
#include "decaylab/vec.hpp"

/// Fundamental solutions in R^3: heat kernel, Newtonian potential, the composite
/// kernel omega = N * Gamma_t and the Oseen tensor built from them.
namespace decaylab::kernels {

/// Spatial derivative order for omega, 0..3.
class KernelOrder {
 public:
  explicit KernelOrder(int m);
  int value() const { return m_; }

 private:
  int m_;
};

struct KernelOptions {
  /// Below this value of |x| / (2 sqrt t) the omega derivatives come from the power series of
  /// erf(z)/z. The closed form has O(z^-2k) cancellation in the k-th derivative, so the series
  /// must be used well past the 0/0 point itself.
  double series_threshold = 1.0;
};

/// (4 pi t)^{-3/2} exp(-|x|^2 / 4t). Throws DomainError for t <= 0.
double heat_kernel(const Vec3& x, double t);
/// Gradient of the heat kernel in x.
Vec3 grad_heat_kernel(const Vec3& x, double t);

/// -1 / (4 pi |x|). Throws SingularityError at x = 0.
double newtonian(const Vec3& x);
Vec3 grad_newtonian(const Vec3& x);
Mat3 hess_newtonian(const Vec3& x);

/// erf(sqrt s)/sqrt s and its first three derivatives in s.
std::array<double, 4> erf_ratio_derivatives(double s, double series_threshold = 1.0);

/// omega(x,t) = -erf(|x| / 2 sqrt t) / (4 pi |x|), finite at x = 0.
double omega(const Vec3& x, double t, const KernelOptions& opt = {});

/// All spatial derivatives of omega of the requested order as a rank-`order` tensor.
/// Throws DomainError for t <= 0.
Tensor omega_kernel(const Vec3& x, double t, KernelOrder order, const KernelOptions& opt = {});

/// Oseen tensor G_ij = Gamma delta_ij - d_i d_j omega (order 0, rank 2), or its gradient
/// dG(i, j, k) = d_k G_ij (order 1, rank 3).
Tensor oseen_tensor(const Vec3& x, double t, int order, const KernelOptions& opt = {});

/// Log-spaced probe grid over (|x|, t) along one fixed direction.
struct EnvelopeProbe {
  double r_min = 1e-2, r_max = 1e3;
  double t_min = 1e-2, t_max = 1e3;
  std::size_t r_count = 41, t_count = 41;
  Vec3 direction{1.0, 2.0, 3.0};  // normalised internally
};

/// sup over probes of |value(x,t)| (|x| + sqrt t)^exponent, with top-decade trend.
BoundReport envelope_report(const std::function<double(const Vec3&, double)>& value, double exponent,
                            const EnvelopeProbe& probe, double budget);

/// Decay envelope of D^k omega against (|x| + sqrt t)^{-1-k}.
BoundReport kernel_envelope_report(KernelOrder order, const EnvelopeProbe& probe, double budget);

}  // namespace decaylab::kernels
