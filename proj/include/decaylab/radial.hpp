#pragma once

#include <functional>
#include <string>

#include "decaylab/initial_data.hpp"

/// High-accuracy whole-space heat evolution of radial data by 1-D adaptive quadrature.
namespace decaylab::radial {

struct QuadratureOptions {
  double abs_tol = 1e-10;  // accept when error <= max(abs_tol, rel_tol |I|)
  double rel_tol = 1e-10;
  int max_panels = 4000;
};

using Amplitude = std::function<double(double)>;

/// (Gamma_t * a)(r) for radial a; r >= 0, t > 0. Throws QuadratureError with diagnostics.
double radial_heat_oracle(const Amplitude& a, double r, double t, const QuadratureOptions& opt = {});

/// Heat flow of the curl field u0 = curl(f e3): U(x,t) = g(|x|,t) (x2, -x1, 0) with
/// g = (d/dr)(Gamma_t * f) / r, evaluated from f' so growing potentials are harmless.
double curl_heat_ratio(const InitialField& field, double r, double t, const QuadratureOptions& opt = {});
/// |U| maximised over directions at radius r, i.e. r g(r, t).
double curl_heat_radial_derivative(const InitialField& field, double r, double t, const QuadratureOptions& opt = {});
Vec3 curl_heat_velocity(const InitialField& field, const Vec3& x, double t, const QuadratureOptions& opt = {});

struct RadialNorm {
  double value = 0.0;
  double tail = 0.0;            // analytic contribution beyond r_max, already included in value
  double r_max = 0.0;
  double argmax = 0.0;          // for the sup norm
};

/// ||V||_q of a radial scalar V(r) on R^3: (4 pi int r^2 |V|^q dr)^{1/q}. For q = inf the sup is
/// taken over a dense radial grid. Beyond r_max = 1e3 (1 + sqrt t) the tail is the analytic power
/// tail of exponent `decay`, anchored at V(r_max).
RadialNorm scalar_lq_norm(const std::function<double(double)>& V, double q, double t, double decay,
                          const QuadratureOptions& opt = {});
/// Same for the curl field; the polar integral of |sin theta|^q is done in closed form.
RadialNorm curl_lq_norm(const InitialField& field, double q, double t, const QuadratureOptions& opt = {});

}  // namespace decaylab::radial
