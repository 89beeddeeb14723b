#include "decaylab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

double parse_real(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: cannot parse '" + text + "' as a real for " + what);
  }
}

Config Config::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), path);
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) + ": expected key = value");
    c.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return c;
}

void Config::apply_overrides(const std::vector<std::string>& tokens) {
  for (const std::string& tok : tokens) {
    if (tok.rfind("--", 0) != 0 || tok.find('=') == std::string::npos)
      throw ConfigError("config: override '" + tok + "' is not of the form --key=value");
    const auto eq = tok.find('=');
    const std::string key = trim(tok.substr(2, eq - 2));
    if (key.empty()) throw ConfigError("config: empty key in override '" + tok + "'");
    values_[key] = trim(tok.substr(eq + 1));
  }
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_real(it->second, key);
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const double v = parse_real(it->second, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("config: " + key + " must be an integer");
  return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config: " + key + " must be a boolean");
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& tok : split(it->second, ',')) out.push_back(parse_real(tok, key));
  if (out.empty()) throw ConfigError("config: " + key + " is an empty list");
  return out;
}

std::vector<std::pair<double, double>> Config::get_pairs(const std::string& key,
                                                         const std::vector<std::pair<double, double>>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::pair<double, double>> out;
  for (const auto& tok : split(it->second, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw ConfigError("config: " + key + " entries must look like a:b");
    out.emplace_back(parse_real(tok.substr(0, colon), key), parse_real(tok.substr(colon + 1), key));
  }
  if (out.empty()) throw ConfigError("config: " + key + " is an empty list");
  return out;
}

}  // namespace decaylab
