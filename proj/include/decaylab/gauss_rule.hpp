#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <vector>

#include "decaylab/errors.hpp"

namespace decaylab {

/// Gauss-Legendre nodes and weights mapped to [a, b].
struct GaussRule {
  std::vector<double> x, w;
};

namespace detail {
template <unsigned N>
GaussRule gauss_rule_fixed(double a, double b) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& abs = G::abscissa();
  const auto& wts = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  GaussRule r;
  for (std::size_t i = 0; i < abs.size(); ++i) {
    if (abs[i] == 0.0) {
      r.x.push_back(c);
      r.w.push_back(h * wts[i]);
      continue;
    }
    r.x.push_back(c - h * abs[i]);
    r.w.push_back(h * wts[i]);
    r.x.push_back(c + h * abs[i]);
    r.w.push_back(h * wts[i]);
  }
  return r;
}
}  // namespace detail

/// Supported orders: 8, 16, 24, 32, 48, 64. Throws UnsupportedError otherwise.
inline GaussRule gauss_rule(int n, double a, double b) {
  switch (n) {
    case 8: return detail::gauss_rule_fixed<8>(a, b);
    case 16: return detail::gauss_rule_fixed<16>(a, b);
    case 24: return detail::gauss_rule_fixed<24>(a, b);
    case 32: return detail::gauss_rule_fixed<32>(a, b);
    case 48: return detail::gauss_rule_fixed<48>(a, b);
    case 64: return detail::gauss_rule_fixed<64>(a, b);
    default: throw UnsupportedError("gauss_rule: unsupported order " + std::to_string(n));
  }
}

}  // namespace decaylab
