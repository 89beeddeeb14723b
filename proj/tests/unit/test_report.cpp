#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "decaylab/report.hpp"
#include "doctest.h"

using namespace decaylab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("decaylab_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("negative controls pass exactly when the statement fails") {
  CheckResult c;
  c.finish(true);
  CHECK(c.pass);
  c.negative_control = true;
  c.finish(true);
  CHECK_FALSE(c.pass);
  c.finish(false);
  CHECK(c.pass);
  CHECK_FALSE(c.holds);
}

TEST_CASE("fmt uses six significant digits and spells non-finite values") {
  CHECK(fmt(0.123456789) == "0.123457");
  CHECK(fmt(-2.0) == "-2");
  CHECK(fmt(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(fmt(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("json report and summary round trip") {
  const fs::path d = scratch_dir("report");
  CheckResult c;
  c.id = "x.slope";
  c.statement = "v ~ t^{-1/2}";
  c.kind = "slope";
  c.measured = -0.49;
  c.predicted = -0.5;
  c.tolerance = 0.05;
  c.details["window"] = {10.0, 1000.0};
  c.finish(true);
  CheckResult n = c;
  n.id = "x.nan";
  n.measured = std::numeric_limits<double>::quiet_NaN();
  n.finish(false);
  write_report(d.string(), "demo", {{"k", "v"}}, {c, n});
  const ojson j = ojson::parse(slurp(d / "demo.json"));
  CHECK(j["command"] == "demo");
  CHECK(j["pass"] == false);
  REQUIRE(j["checks"].size() == 2);
  CHECK(j["checks"][0]["measured"].get<double>() == -0.49);
  CHECK(j["checks"][1]["measured"] == "nan");

  write_summary((d / "summary.tsv").string(), {c, n});
  CHECK(slurp(d / "summary.tsv") ==
        "check\tpredicted\tmeasured\ttolerance\tpass\nx.slope\t-0.5\t-0.49\t0.05\tyes\nx.nan\t-0.5\tnan\t0.05\tno\n");
  fs::remove_all(d);
}

TEST_CASE("csv writer enforces the header width and writes on save") {
  const fs::path d = scratch_dir("csv");
  CsvWriter w((d / "t.csv").string(), {"t", "v"});
  w.cell(1.0).cell(0.25).end_row();
  w.cell("a");
  CHECK_THROWS_AS(w.end_row(), std::logic_error);
  CHECK_FALSE(fs::exists(d / "t.csv"));
  w.save();
  CHECK(slurp(d / "t.csv") == "t,v\n1,0.25\n");
  fs::remove_all(d);
}
