#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace decaylab {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline bool all_finite(const Vec3& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

/// Dense tensor of rank 0..3 over R^3, stored row-major in a fixed 27-slot buffer.
struct Tensor {
  int rank = 0;
  std::array<double, 27> data{};

  double& operator()() { return data[0]; }
  double operator()() const { return data[0]; }
  double& operator()(int i) { return data[i]; }
  double operator()(int i) const { return data[i]; }
  double& operator()(int i, int j) { return data[3 * i + j]; }
  double operator()(int i, int j) const { return data[3 * i + j]; }
  double& operator()(int i, int j, int k) { return data[9 * i + 3 * j + k]; }
  double operator()(int i, int j, int k) const { return data[9 * i + 3 * j + k]; }

  std::size_t size() const {
    std::size_t n = 1;
    for (int r = 0; r < rank; ++r) n *= 3;
    return n;
  }

  /// Frobenius norm over the populated entries.
  double frobenius() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += data[i] * data[i];
    return std::sqrt(s);
  }
};

}  // namespace decaylab
