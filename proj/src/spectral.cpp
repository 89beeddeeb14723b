#include "decaylab/spectral.hpp"

#include <fftw3.h>

#include <cstring>
#include <numbers>

namespace decaylab {

void* fftw_aligned_malloc(std::size_t bytes) { return fftw_malloc(bytes); }
void fftw_aligned_free(void* p) { fftw_free(p); }

Spectral::Spectral(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  const int n = spec_.N;
  modes_ = static_cast<std::size_t>(n) * n * (n / 2 + 1);
  const double dk = std::numbers::pi / spec_.L;
  wave_.resize(n);
  dwave_.resize(n);
  for (int m = 0; m < n; ++m) {
    wave_[m] = dk * mode_number(m);
    dwave_[m] = (m == n / 2) ? 0.0 : wave_[m];
  }
  keep_.resize(modes_);
  const int cut = n / 3;
  std::size_t idx = 0;
  for (int kz = 0; kz < n; ++kz)
    for (int ky = 0; ky < n; ++ky)
      for (int kx = 0; kx < n / 2 + 1; ++kx, ++idx)
        keep_[idx] = (std::abs(mode_number(kx)) <= cut && std::abs(mode_number(ky)) <= cut &&
                      std::abs(mode_number(kz)) <= cut);

  RealArray r(spec_.points());
  scratch_.resize(modes_);
  auto* c = reinterpret_cast<fftw_complex*>(scratch_.data());
  plan_r2c_ = fftw_plan_dft_r2c_3d(n, n, n, r.data(), c, FFTW_ESTIMATE);
  plan_c2r_ = fftw_plan_dft_c2r_3d(n, n, n, c, r.data(), FFTW_ESTIMATE);
}

Spectral::~Spectral() {
  if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

void Spectral::forward(const RealArray& in, ComplexArray& out) const {
  out.resize(modes_);
  // r2c does not modify its input for out-of-place transforms.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Spectral::backward(const ComplexArray& in, RealArray& out) const {
  out.resize(spec_.points());
  std::memcpy(scratch_.data(), in.data(), modes_ * sizeof(cplx));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_), reinterpret_cast<fftw_complex*>(scratch_.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(spec_.points());
  for (double& v : out) v *= scale;
}

SpectralField Spectral::forward(const GridField& f) const {
  SpectralField s;
  for (int c = 0; c < 3; ++c) forward(f.comp(c), s.c[c]);
  return s;
}

GridField Spectral::backward(const SpectralField& s, const GridMetadata& meta) const {
  GridField f(spec_);
  f.meta = meta;
  for (int c = 0; c < 3; ++c) backward(s.c[c], f.comp(c));
  return f;
}

SpectralField Spectral::make_spectral() const {
  SpectralField s;
  for (auto& c : s.c) c.assign(modes_, cplx(0.0, 0.0));
  return s;
}

}  // namespace decaylab
