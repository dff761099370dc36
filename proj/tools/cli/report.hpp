#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qosc/opmatrix.hpp"

namespace qosc::cli {

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  double max_abs = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct Table {
  std::string name;
  std::vector<Json> rows;  // each row is a flat object; all rows share keys
};

struct RunReport {
  std::string command;
  Json params = Json::object();
  std::vector<Check> checks;
  std::vector<Table> tables;
  std::string version;

  bool pass() const;
  void add_check(const std::string& name, const ResidualReport& r);
  Table& add_table(const std::string& name);
  Json to_json() const;
};

/// Serializes with every floating-point number printed as %.17g; non-finite
/// numbers become null.
void write_json(std::ostream& out, const Json& value, int indent = 2);

/// One CSV file per table: <dir>/<command>_<table>.csv.
void write_csv(const RunReport& report, const std::string& dir);

/// PASS/FAIL summary, one line per check.
void write_text(std::ostream& out, const RunReport& report);

}  // namespace qosc::cli
