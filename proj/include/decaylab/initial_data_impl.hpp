#pragma once

namespace decaylab {

template <class F>
GridField sample_scalar_to_grid(const F& a, const GridSpec& box) {
  box.validate();
  GridField g(box);
  const double r_in = 0.8 * box.L;
  g.meta.window_radius = r_in;
  const int n = box.N;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 x = box.node(i, j, k);
        const double r = norm(x);
        g.comp(0)[box.index(i, j, k)] = a(r) * cosine_window(r, r_in, box.L);
      }
  return g;
}

}  // namespace decaylab
