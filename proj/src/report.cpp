#include "decaylab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace decaylab {

namespace {

ojson number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

}  // namespace

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ojson to_json(const CheckResult& r) {
  ojson j;
  j["id"] = r.id;
  j["statement"] = r.statement;
  j["parameters"] = r.parameters;
  j["kind"] = r.kind;
  j["measured"] = number(r.measured);
  j["predicted"] = number(r.predicted);
  j["tolerance"] = number(r.tolerance);
  j["negative_control"] = r.negative_control;
  j["holds"] = r.holds;
  j["pass"] = r.pass;
  j["probes"] = r.probes;
  j["runtime_s"] = r.runtime_s;
  j["details"] = r.details;
  return j;
}

void write_report(const std::string& dir, const std::string& name, const ojson& config,
                  const std::vector<CheckResult>& checks) {
  ojson j;
  j["command"] = name;
  j["config"] = config;
  bool all = true;
  ojson arr = ojson::array();
  for (const auto& c : checks) {
    arr.push_back(to_json(c));
    all = all && c.pass;
  }
  j["pass"] = all;
  j["checks"] = arr;
  auto os = open_out((std::filesystem::path(dir) / (name + ".json")).string());
  os << j.dump(2) << '\n';
}

void write_summary(const std::string& path, const std::vector<CheckResult>& checks) {
  auto os = open_out(path);
  os << "check\tpredicted\tmeasured\ttolerance\tpass\n";
  for (const auto& c : checks)
    os << c.id << '\t' << fmt(c.predicted) << '\t' << fmt(c.measured) << '\t' << fmt(c.tolerance) << '\t'
       << (c.pass ? "yes" : "no") << '\n';
}

CsvWriter::CsvWriter(std::string path, const std::vector<std::string>& header)
    : path_(std::move(path)), width_(header.size()) {
  std::string h;
  for (std::size_t i = 0; i < header.size(); ++i) h += (i ? "," : "") + header[i];
  lines_.push_back(h);
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  row_.push_back(s);
  return *this;
}

CsvWriter& CsvWriter::cell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  row_.emplace_back(std::isfinite(v) ? buf : fmt(v));
  return *this;
}

void CsvWriter::end_row() {
  if (row_.size() != width_) throw std::logic_error("CsvWriter: row width mismatch in " + path_);
  std::string l;
  for (std::size_t i = 0; i < row_.size(); ++i) l += (i ? "," : "") + row_[i];
  lines_.push_back(l);
  row_.clear();
}

void CsvWriter::save() const {
  auto os = open_out(path_);
  for (const auto& l : lines_) os << l << '\n';
}

}  // namespace decaylab
