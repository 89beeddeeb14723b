#pragma once

#include <string>
#include <vector>

#include "decaylab/initial_data.hpp"
#include "decaylab/vec.hpp"

/// Whole-space check of the cutoff representation of the Stokes flow with zero forcing:
///   zeta u_i = I1 + I2 + I3 + I4,
///   I1 = int Gamma(x-y,t) zeta u0_i,            I2 = -int (d_i omega)(x-y,t) (u0 . grad zeta),
///   I3 = int (d_i N)(x-y) (u(t) . grad zeta),   I4 = int_0^t int u_j [-2 d_k zeta d_k G_ij + Lap zeta G_ij].
/// u is the heat flow of the solenoidal data, taken from the radial curl oracle.
namespace decaylab::analysis {

struct RepresentationOptions {
  double r_in = 2.0;    // zeta = 0 on |y| <= r_in
  double r_out = 4.0;   // zeta = 1 on |y| >= r_out
  bool unit_cutoff = false;  // zeta == 1 everywhere: only I1 survives
  int radial_nodes = 24;     // Gauss orders (see gauss_rule)
  int polar_nodes = 24;
  int time_nodes = 24;
  int azimuthal_nodes = 48;  // trapezoid in the azimuth
  int direction_polar_nodes = 32;     // angular rule of the centred I1 integral
  int direction_azimuthal_nodes = 48;
  double abs_tol = 1e-14;  // radial adaptive rule of I1
  double rel_tol = 1e-11;
};

struct RepresentationTerms {
  Vec3 x{};
  double t = 0.0;
  Vec3 lhs{}, i1{}, i2{}, i3{}, i4{};
  Vec3 inner{};  // int Gamma (1 - zeta) u0, which equals I2 + I3 + I4 when zeta(x) = 1
  double residual = 0.0;         // |lhs - (I1 + I2 + I3 + I4)| / |lhs|
  double cutoff_residual = 0.0;  // |inner - (I2 + I3 + I4)| / (|inner| + |I2 + I3 + I4|); 0 if both vanish
};

/// One entry per probe. Requires t > 0 and |x| >= 2 r_out for every probe unless unit_cutoff.
/// Throws DomainError on bad arguments and QuadratureError naming the offending term.
std::vector<RepresentationTerms> representation_residual(const InitialField& u0, const std::vector<Vec3>& probes,
                                                         double t, const RepresentationOptions& opt = {});

/// 1 - cosine_window(r, r_in, r_out) and its first two radial derivatives.
std::array<double, 3> cutoff_profile(double r, double r_in, double r_out);

}  // namespace decaylab::analysis
