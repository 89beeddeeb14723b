#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace decaylab {

using ojson = nlohmann::ordered_json;

/// Outcome of one acceptance-style check.
struct CheckResult {
  std::string id;         // command.check, unique within a run
  std::string statement;  // the inequality or rate under test
  ojson parameters = ojson::object();
  std::string kind;       // slope | bound | trend | ratio | residual | count
  double measured = 0.0;
  double predicted = 0.0;  // expected slope, budget or threshold
  double tolerance = 0.0;
  bool negative_control = false;  // expectation is that the underlying statement fails
  bool holds = false;             // whether the statement held numerically
  bool pass = false;              // holds != negative_control
  std::size_t probes = 0;
  double runtime_s = 0.0;
  ojson details = ojson::object();

  void finish(bool statement_holds) {
    holds = statement_holds;
    pass = holds != negative_control;
  }
};

ojson to_json(const CheckResult& r);

/// `<dir>/<name>.json` with the command name, its configuration and every check.
void write_report(const std::string& dir, const std::string& name, const ojson& config,
                  const std::vector<CheckResult>& checks);
/// Tab-separated check, predicted, measured, tolerance, pass. No timing columns, so reruns match.
void write_summary(const std::string& path, const std::vector<CheckResult>& checks);
/// Fixed-precision rendering used in summaries and CSVs.
std::string fmt(double v);

/// Buffered CSV table; `save` writes it out in one go.
class CsvWriter {
 public:
  CsvWriter(std::string path, const std::vector<std::string>& header);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double v);
  /// Throws std::logic_error when the row width differs from the header.
  void end_row();
  void save() const;

 private:
  std::string path_;
  std::vector<std::string> row_;
  std::vector<std::string> lines_;
  std::size_t width_;
};

}  // namespace decaylab
