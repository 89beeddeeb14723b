#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "decaylab/spectral_alloc.hpp"
#include "decaylab/vec.hpp"

namespace decaylab {

/// Periodic box [-L, L)^3 with N nodes per axis; nodes at x_i = -L + i h, h = 2L / N.
struct GridSpec {
  int N = 128;
  double L = 64.0;

  double h() const { return 2.0 * L / N; }
  std::size_t points() const { return static_cast<std::size_t>(N) * N * N; }
  /// x-fastest linear index.
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(N) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(N) * k);
  }
  Vec3 node(int i, int j, int k) const { return {-L + i * h(), -L + j * h(), -L + k * h()}; }
  /// Throws GridError unless N is a power of two with N >= 32 and L >= 16.
  void validate() const;
  /// Throws GridError if sqrt(t_min) < 2h.
  void require_resolves(double t_min) const;
  bool operator==(const GridSpec& o) const { return N == o.N && L == o.L; }
};

struct GridMetadata {
  double window_radius = 0.0;
  double time = 0.0;
  std::string provenance;
  bool solenoidal = false;
};

/// Three real components of N^3 samples each.
struct GridField {
  GridSpec spec;
  std::array<RealArray, 3> data;
  GridMetadata meta;

  GridField() = default;
  explicit GridField(const GridSpec& s);

  RealArray& comp(int c) { return data[c]; }
  const RealArray& comp(int c) const { return data[c]; }
  Vec3 at(std::size_t idx) const { return {data[0][idx], data[1][idx], data[2][idx]}; }
  bool all_finite() const;
  /// sqrt(mean |u|^2) over all nodes.
  double rms() const;
};

/// Binary layout: "DCLF", u32 version, u32 N, f64 L, f64 time, f64 window radius, then
/// 3 N^3 little-endian f64 values, component-major, x fastest. A JSON sidecar `path + ".json"`
/// carries the metadata including provenance.
void write_grid_field(const GridField& f, const std::string& path);
GridField read_grid_field(const std::string& path);

}  // namespace decaylab
