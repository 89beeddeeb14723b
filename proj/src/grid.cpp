#include "decaylab/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include "json.hpp"

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

constexpr char kMagic[4] = {'D', 'C', 'L', 'F'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "grid files are written in native little-endian order");

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw GridError("read_grid_field: truncated header");
  return v;
}

}  // namespace

void GridSpec::validate() const {
  if (N < 32 || (N & (N - 1)) != 0) throw GridError("GridSpec: N must be a power of two >= 32, got " + std::to_string(N));
  if (!(L >= 16.0) || !std::isfinite(L)) throw GridError("GridSpec: half-width L must be >= 16, got " + std::to_string(L));
}

void GridSpec::require_resolves(double t_min) const {
  if (std::sqrt(t_min) < 2.0 * h())
    throw GridError("GridSpec: sqrt(t_min) = " + std::to_string(std::sqrt(t_min)) + " is below 2h = " + std::to_string(2.0 * h()));
}

GridField::GridField(const GridSpec& s) : spec(s) {
  for (auto& c : data) c.assign(s.points(), 0.0);
}

bool GridField::all_finite() const {
  for (const auto& c : data)
    for (double v : c)
      if (!std::isfinite(v)) return false;
  return true;
}

double GridField::rms() const {
  double s = 0.0;
  for (const auto& c : data)
    for (double v : c) s += v * v;
  return std::sqrt(s / static_cast<double>(spec.points()));
}

void write_grid_field(const GridField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw GridError("write_grid_field: cannot open " + path);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.spec.N));
  put<double>(os, f.spec.L);
  put<double>(os, f.meta.time);
  put<double>(os, f.meta.window_radius);
  for (const auto& c : f.data) os.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
  if (!os) throw GridError("write_grid_field: write failed for " + path);

  nlohmann::ordered_json meta;
  meta["format"] = "DCLF";
  meta["version"] = kVersion;
  meta["N"] = f.spec.N;
  meta["L"] = f.spec.L;
  meta["time"] = f.meta.time;
  meta["window_radius"] = f.meta.window_radius;
  meta["solenoidal"] = f.meta.solenoidal;
  meta["provenance"] = f.meta.provenance;
  std::ofstream js(path + ".json");
  js << meta.dump(2) << "\n";
}

GridField read_grid_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw GridError("read_grid_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw GridError("read_grid_field: bad magic in " + path);
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw GridError("read_grid_field: unsupported version " + std::to_string(version));
  GridSpec spec;
  spec.N = static_cast<int>(get<std::uint32_t>(is));
  spec.L = get<double>(is);
  spec.validate();
  GridField f(spec);
  f.meta.time = get<double>(is);
  f.meta.window_radius = get<double>(is);
  for (auto& c : f.data) {
    is.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
    if (!is) throw GridError("read_grid_field: truncated payload in " + path);
  }
  std::ifstream js(path + ".json");
  if (js) {
    const auto meta = nlohmann::json::parse(js, nullptr, false);
    if (!meta.is_discarded()) {
      f.meta.provenance = meta.value("provenance", std::string());
      f.meta.solenoidal = meta.value("solenoidal", false);
    }
  }
  return f;
}

}  // namespace decaylab
