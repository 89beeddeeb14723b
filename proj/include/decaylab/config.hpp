#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace decaylab {

/// Flat key=value configuration. Lines are `key = value`; `#` starts a comment.
class Config {
 public:
  Config() = default;
  /// Throws ConfigError on unreadable files or malformed lines.
  static Config load(const std::string& path);
  static Config parse(const std::string& text, const std::string& origin = "<string>");

  /// Applies `--key=value` tokens; throws ConfigError on tokens of another shape.
  void apply_overrides(const std::vector<std::string>& tokens);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  /// Accepts `inf` for infinity. Throws ConfigError on unparsable values.
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated reals.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
  /// Comma-separated `a:b` pairs, e.g. `1:inf,2:3`.
  std::vector<std::pair<double, double>> get_pairs(const std::string& key,
                                                   const std::vector<std::pair<double, double>>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Parses a real, accepting inf / -inf. Throws ConfigError naming `what` on failure.
double parse_real(const std::string& text, const std::string& what);

}  // namespace decaylab
