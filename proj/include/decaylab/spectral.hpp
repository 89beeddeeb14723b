#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "decaylab/grid.hpp"

namespace decaylab {

/// Three complex component arrays in r2c layout: mode index kx + (N/2+1)(ky + N kz).
struct SpectralField {
  std::array<ComplexArray, 3> c;
};

/// Real-to-complex FFTs on one grid. Forward is unnormalised; backward divides by N^3 and
/// leaves its input intact.
class Spectral {
 public:
  explicit Spectral(const GridSpec& spec);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const GridSpec& spec() const { return spec_; }
  std::size_t modes() const { return modes_; }
  int nx_half() const { return spec_.N / 2 + 1; }

  void forward(const RealArray& in, ComplexArray& out) const;
  void backward(const ComplexArray& in, RealArray& out) const;

  SpectralField forward(const GridField& f) const;
  GridField backward(const SpectralField& s, const GridMetadata& meta) const;

  ComplexArray make_complex() const { return ComplexArray(modes_); }
  RealArray make_real() const { return RealArray(spec_.points()); }
  SpectralField make_spectral() const;

  /// Visits every stored mode with f(idx, k, kd), where k is the wavevector and kd the
  /// derivative wavevector with Nyquist components zeroed.
  template <class F>
  void for_each_mode(F&& f) const {
    const int n = spec_.N, nh = nx_half();
    std::size_t idx = 0;
    for (int kz = 0; kz < n; ++kz)
      for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < nh; ++kx, ++idx) {
          const std::array<double, 3> k{wave_[kx], wave_[ky], wave_[kz]};
          const std::array<double, 3> kd{dwave_[kx], dwave_[ky], dwave_[kz]};
          f(idx, k, kd);
        }
  }

  /// Integer mode number for axis index m in 0..N-1.
  int mode_number(int m) const { return m <= spec_.N / 2 ? m : m - spec_.N; }
  /// True if the mode survives the 2/3 dealiasing rule in every direction.
  bool dealias_keep(std::size_t idx) const { return keep_[idx] != 0; }

 private:
  GridSpec spec_;
  std::size_t modes_;
  std::vector<double> wave_, dwave_;
  std::vector<unsigned char> keep_;
  void* plan_r2c_ = nullptr;
  void* plan_c2r_ = nullptr;
  mutable ComplexArray scratch_;
};

}  // namespace decaylab
