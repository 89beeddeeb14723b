#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace decaylab {

void* fftw_aligned_malloc(std::size_t bytes);
void fftw_aligned_free(void* p);

/// Allocator returning SIMD-aligned storage so FFTW plans can be reused across arrays.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) {}
  T* allocate(std::size_t n) {
    void* p = fftw_aligned_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) { fftw_aligned_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const { return true; }
};

using cplx = std::complex<double>;
using RealArray = std::vector<double, FftwAllocator<double>>;
using ComplexArray = std::vector<cplx, FftwAllocator<cplx>>;

}  // namespace decaylab
