#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "decaylab/grid.hpp"
#include "decaylab/spectral.hpp"

/// Heat semigroup, Leray projection and Duhamel integrals on the periodic box. For solenoidal
/// data on the whole space the Stokes flow coincides with the heat flow.
namespace decaylab::semigroup {

/// e^{t Delta} as the multiplier exp(-|k|^2 t). t = 0 returns a copy of the input.
/// Throws TruncationError when sqrt(t) > 0.2 L and DomainError for t < 0.
GridField heat_evolve(const GridField& field, double t);

/// Whole-space projection I - k k^T / |k|^2 built from the derivative wavevector; mean untouched.
GridField leray_project(const GridField& field);

/// ||div u||_2 / ||grad u||_2 computed spectrally; 0 for a constant field.
double divergence_ratio(const GridField& field);

void heat_multiply(const Spectral& sp, SpectralField& s, double t);
void leray_project_inplace(const Spectral& sp, SpectralField& s);
/// Zeroes modes outside the 2/3 rule.
void dealias_inplace(const Spectral& sp, SpectralField& s);

/// Nine real components F_ij at slot 3 i + j.
struct TensorField {
  GridSpec spec;
  std::array<RealArray, 9> data;
  TensorField() = default;
  explicit TensorField(const GridSpec& s);
  RealArray& operator()(int i, int j) { return data[3 * i + j]; }
  const RealArray& operator()(int i, int j) const { return data[3 * i + j]; }
};

/// Fourier transform of P div F, (div F)_i = d_j F_ij.
SpectralField projected_divergence(const Spectral& sp, const TensorField& F);

/// Graded nodes tau_j = t (1 - (1 - j/M)^2), j = 0..M, clustered toward tau = t.
std::vector<double> graded_nodes(double t, int M);

/// Marches W(b) = e^{-(b-a)|k|^2} W(a) + int_a^b e^{-(b-tau)|k|^2} g(tau) dtau with g linear
/// between its end values; exact for piecewise-linear forcing.
class DuhamelAccumulator {
 public:
  explicit DuhamelAccumulator(const Spectral& sp);
  void reset();
  void advance(double a, double b, const SpectralField& g_a, const SpectralField& g_b);
  const SpectralField& value() const { return w_; }
  SpectralField& value() { return w_; }

 private:
  const Spectral* sp_;
  std::vector<double> lambda_;
  SpectralField w_;
};

/// Weights (w_a, w_b) of the exponential product rule on an interval of length d at rate lambda.
std::pair<double, double> product_weights(double lambda, double d);

struct TimeGridSpec {
  int M = 16;                 // coarse node count; the fine mesh uses 2M
  double tolerance = 1e-6;    // admissible relative mesh-halving disagreement
};

struct DuhamelResult {
  GridField value;
  double error_estimate = 0.0;  // ||W_2M - W_M||_2 / ||W_2M||_2, or absolute when W_2M = 0
  int fine_nodes = 0;
};

/// int_0^t e^{(t - tau) Delta} P div F(tau) dtau on graded meshes with M and 2M intervals.
/// Throws RefinementError if the mesh-halving estimate exceeds the tolerance.
DuhamelResult duhamel_convolve(const std::function<TensorField(double)>& F, double t, const TimeGridSpec& grid);

struct NormProbe {
  double q = 2.0;                      // in (1, inf]; use INFINITY for the sup norm
  std::optional<double> truncation_radius;  // defaults to 0.8 L
  std::optional<double> tail_exponent;      // envelope (1+|x|)^{-p} used for the reported tail
};

struct NormResult {
  double value = 0.0;             // norm over the ball |x| <= R_tr
  double tail_bound = 0.0;        // analytic estimate of the missing contribution; inf if not summable
  double envelope_constant = 0.0; // max of |u| (1+|x|)^p over R_tr/2 <= |x| <= R_tr
  double truncation_radius = 0.0;
};

/// L^q norm of |u| (Euclidean in components) over the truncation ball; the tail is reported only.
NormResult field_norm(const GridField& field, const NormProbe& probe);
/// Same functional applied to the Frobenius norm of the spectral gradient.
NormResult gradient_norm(const GridField& field, const NormProbe& probe);
/// Norm functional on a precomputed non-negative magnitude per node.
NormResult magnitude_norm(const GridSpec& spec, const RealArray& magnitude, const NormProbe& probe);

/// grad[3 c + d] = d_d u_c in physical space (9 inverse transforms).
void spectral_gradient(const Spectral& sp, const SpectralField& s, std::array<RealArray, 9>& grad);

}  // namespace decaylab::semigroup
