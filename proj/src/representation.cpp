#include "decaylab/representation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "decaylab/errors.hpp"
#include "decaylab/gauss_rule.hpp"
#include "decaylab/kernels.hpp"
#include "decaylab/quadrature.hpp"
#include "decaylab/radial.hpp"

namespace decaylab::analysis {

namespace {

constexpr double kPi = std::numbers::pi;

struct Frame {
  Vec3 e1, e2, e3;
};

// Orthonormal frame with e3 along x (any frame when x = 0).
Frame frame_along(const Vec3& x) {
  const double r = norm(x);
  Vec3 e3 = r > 0.0 ? (1.0 / r) * x : Vec3{0.0, 0.0, 1.0};
  Vec3 helper = std::abs(e3[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 e1 = cross(helper, e3);
  e1 = (1.0 / norm(e1)) * e1;
  return {e1, cross(e3, e1), e3};
}

// Positive sigma with |x - sigma w| = R.
void sphere_crossings(const Vec3& x, const Vec3& w, double R, std::vector<double>& out) {
  const double b = dot(x, w), c = dot(x, x) - R * R;
  const double disc = b * b - c;
  if (disc <= 0.0) return;
  const double s = std::sqrt(disc);
  for (double sigma : {b - s, b + s})
    if (sigma > 0.0) out.push_back(sigma);
}

[[noreturn]] void term_failure(const char* term, const Vec3& x, double t, const AdaptiveResult& r) {
  std::ostringstream os;
  os << "representation_residual: term " << term << " failed at x = (" << x[0] << ", " << x[1] << ", " << x[2]
     << "), t = " << t << ": value " << r.value << ", error " << r.error << ", panels " << r.panels;
  throw QuadratureError(os.str());
}

// I1 = int Gamma(z, t) zeta(x - z) u0(x - z) dz in spherical coordinates centred at x.
Vec3 centred_heat_term(const InitialField& u0, const Vec3& x, double t, const RepresentationOptions& opt) {
  const Frame fr = frame_along(x);
  const GaussRule mu = gauss_rule(opt.direction_polar_nodes, -1.0, 1.0);
  const int nphi = opt.direction_azimuthal_nodes;
  const double st = std::sqrt(t), sigma_max = 40.0 * st;
  const double pref = std::pow(4.0 * kPi * t, -1.5);
  Vec3 total{};
  for (std::size_t a = 0; a < mu.x.size(); ++a) {
    const double ct = mu.x[a], sn = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int b = 0; b < nphi; ++b) {
      const double phi = 2.0 * kPi * b / nphi;
      const Vec3 w = (sn * std::cos(phi)) * fr.e1 + (sn * std::sin(phi)) * fr.e2 + ct * fr.e3;
      std::vector<double> pts{0.0, st, 3.0 * st, 10.0 * st, sigma_max};
      if (!opt.unit_cutoff) {
        sphere_crossings(x, w, opt.r_in, pts);
        sphere_crossings(x, w, opt.r_out, pts);
      }
      // the data vary on unit scale near the origin
      sphere_crossings(x, w, 1.0, pts);
      std::erase_if(pts, [&](double s) { return s > sigma_max; });
      for (int c = 0; c < 3; ++c) {
        if (c == 2) continue;  // u0 has no e3 component
        auto f = [&](double sigma) {
          const Vec3 y = x - sigma * w;
          const double z = opt.unit_cutoff ? 1.0 : cutoff_profile(norm(y), opt.r_in, opt.r_out)[0];
          if (z == 0.0) return 0.0;
          return sigma * sigma * std::exp(-sigma * sigma / (4.0 * t)) * z * u0(y)[c];
        };
        const AdaptiveResult r = adaptive_integrate(f, pts, opt.abs_tol, opt.rel_tol);
        if (!r.converged) term_failure("I1", x, t, r);
        total[c] += mu.w[a] * (2.0 * kPi / nphi) * r.value;
      }
    }
  }
  return pref * total;
}

struct AnnulusTerms {
  Vec3 inner{}, i2{}, i3{}, i4{};
};

AnnulusTerms annulus_terms(const InitialField& u0, const Vec3& x, double t, const RepresentationOptions& opt) {
  const GaussRule rho = gauss_rule(opt.radial_nodes, opt.r_in, opt.r_out);
  const GaussRule core = gauss_rule(opt.radial_nodes, 0.0, opt.r_in);
  const GaussRule mu = gauss_rule(opt.polar_nodes, -1.0, 1.0);
  const GaussRule tau = gauss_rule(opt.time_nodes, 0.0, t);
  const int nphi = opt.azimuthal_nodes;
  const double dphi = 2.0 * kPi / nphi;

  // g(rho, tau) of the curl oracle, u(y, tau) = g (y2, -y1, 0); last column at tau = t.
  const std::size_t nr = rho.x.size(), nt = tau.x.size();
  std::vector<double> g((nt + 1) * nr);
  for (std::size_t a = 0; a < nr; ++a) {
    for (std::size_t b = 0; b < nt; ++b) g[b * nr + a] = radial::curl_heat_ratio(u0, rho.x[a], tau.x[b]);
    g[nt * nr + a] = radial::curl_heat_ratio(u0, rho.x[a], t);
  }

  AnnulusTerms out;
  auto direction = [&](std::size_t m, int p) {
    const double ct = mu.x[m], sn = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double phi = dphi * p;
    return Vec3{sn * std::cos(phi), sn * std::sin(phi), ct};
  };

  // int Gamma (1 - zeta) u0 over the ball |y| <= r_out.
  for (const GaussRule* rule : {&core, &rho}) {
    for (std::size_t a = 0; a < rule->x.size(); ++a) {
      const double r = rule->x[a];
      const double one_minus = 1.0 - cutoff_profile(r, opt.r_in, opt.r_out)[0];
      for (std::size_t m = 0; m < mu.x.size(); ++m)
        for (int p = 0; p < nphi; ++p) {
          const Vec3 y = r * direction(m, p);
          const double w = rule->w[a] * mu.w[m] * dphi * r * r;
          out.inner = out.inner + (w * one_minus * kernels::heat_kernel(x - y, t)) * u0(y);
        }
    }
  }

  for (std::size_t a = 0; a < nr; ++a) {
    const double r = rho.x[a];
    const auto zp = cutoff_profile(r, opt.r_in, opt.r_out);
    const double dz = zp[1], lap = zp[2] + 2.0 * zp[1] / r;
    for (std::size_t m = 0; m < mu.x.size(); ++m)
      for (int p = 0; p < nphi; ++p) {
        const Vec3 n = direction(m, p);
        const Vec3 y = r * n;
        const Vec3 d = x - y;
        const double w = rho.w[a] * mu.w[m] * dphi * r * r;
        // u . grad zeta = zeta'(r) (u . n)
        const double flux0 = dz * dot(u0(y), n);
        const Vec3 ut = g[nt * nr + a] * Vec3{y[1], -y[0], 0.0};
        const double flux_t = dz * dot(ut, n);
        const Tensor dw = kernels::omega_kernel(d, t, kernels::KernelOrder(1));
        const Vec3 gn = kernels::grad_newtonian(d);
        for (int i = 0; i < 3; ++i) {
          out.i2[i] -= w * dw(i) * flux0;
          out.i3[i] += w * gn[i] * flux_t;
        }
        for (std::size_t b = 0; b < nt; ++b) {
          const double s = t - tau.x[b];
          const Vec3 u = g[b * nr + a] * Vec3{y[1], -y[0], 0.0};
          const Tensor G = kernels::oseen_tensor(d, s, 0);
          const Tensor dG = kernels::oseen_tensor(d, s, 1);
          const double wt = w * tau.w[b];
          for (int i = 0; i < 3; ++i) {
            double acc = 0.0;
            for (int j = 0; j < 2; ++j) {
              double grad_part = 0.0;
              for (int k = 0; k < 3; ++k) grad_part += n[k] * dG(i, j, k);
              acc += u[j] * (-2.0 * dz * grad_part + lap * G(i, j));
            }
            out.i4[i] += wt * acc;
          }
        }
      }
  }
  return out;
}

}  // namespace

std::array<double, 3> cutoff_profile(double r, double r_in, double r_out) {
  if (r <= r_in) return {0.0, 0.0, 0.0};
  if (r >= r_out) return {1.0, 0.0, 0.0};
  const double k = kPi / (r_out - r_in), arg = k * (r - r_in);
  return {0.5 * (1.0 - std::cos(arg)), 0.5 * k * std::sin(arg), 0.5 * k * k * std::cos(arg)};
}

std::vector<RepresentationTerms> representation_residual(const InitialField& u0, const std::vector<Vec3>& probes,
                                                         double t, const RepresentationOptions& opt) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("representation_residual: t must be positive");
  if (!(opt.r_in > 0.0) || !(opt.r_out > opt.r_in))
    throw DomainError("representation_residual: need 0 < r_in < r_out");
  std::vector<RepresentationTerms> out;
  out.reserve(probes.size());
  for (const Vec3& x : probes) {
    if (!opt.unit_cutoff && norm(x) < 2.0 * opt.r_out * (1.0 - 1e-12))
      throw DomainError("representation_residual: probes must satisfy |x| >= 2 r_out");
    RepresentationTerms rt;
    rt.x = x;
    rt.t = t;
    const double zx = opt.unit_cutoff ? 1.0 : cutoff_profile(norm(x), opt.r_in, opt.r_out)[0];
    rt.lhs = zx * radial::curl_heat_velocity(u0, x, t);
    rt.i1 = centred_heat_term(u0, x, t, opt);
    if (!opt.unit_cutoff) {
      const AnnulusTerms at = annulus_terms(u0, x, t, opt);
      rt.inner = at.inner;
      rt.i2 = at.i2;
      rt.i3 = at.i3;
      rt.i4 = at.i4;
    }
    const Vec3 rhs = rt.i1 + rt.i2 + rt.i3 + rt.i4;
    const double ln = norm(rt.lhs);
    rt.residual = ln > 0.0 ? norm(rt.lhs - rhs) / ln : norm(rhs);
    const Vec3 remainder = rt.i2 + rt.i3 + rt.i4;
    const double scale = norm(rt.inner) + norm(remainder);
    rt.cutoff_residual = scale > 0.0 ? norm(rt.inner - remainder) / scale : 0.0;
    out.push_back(rt);
  }
  return out;
}

}  // namespace decaylab::analysis
