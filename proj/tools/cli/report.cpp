#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "qosc/error.hpp"

namespace qosc::cli {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string scalar_text(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

void write_value(std::ostream& out, const Json& v, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    std::size_t i = 0;
    for (const auto& [key, item] : v.items()) {
      out << pad << Json(key).dump() << ": ";
      write_value(out, item, indent, depth + 1);
      out << (++i < v.size() ? ",\n" : "\n");
    }
    out << close << '}';
  } else if (v.is_array()) {
    if (v.empty()) {
      out << "[]";
      return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out << pad;
      write_value(out, v[i], indent, depth + 1);
      out << (i + 1 < v.size() ? ",\n" : "\n");
    }
    out << close << ']';
  } else {
    out << scalar_text(v);
  }
}

std::string csv_field(const Json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    return std::isfinite(d) ? format_double(d) : "nan";
  }
  return v.dump();
}

}  // namespace

bool RunReport::pass() const {
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

void RunReport::add_check(const std::string& name, const ResidualReport& r) {
  checks.push_back({name, r.max_abs, r.tolerance, r.pass});
}

Table& RunReport::add_table(const std::string& name) {
  tables.push_back({name, {}});
  return tables.back();
}

Json RunReport::to_json() const {
  Json j = Json::object();
  j["command"] = command;
  j["params"] = params;
  Json cs = Json::array();
  for (const Check& c : checks) {
    cs.push_back(Json{{"name", c.name}, {"max_abs", c.max_abs}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  j["checks"] = cs;
  Json ts = Json::array();
  for (const Table& t : tables) ts.push_back(Json{{"name", t.name}, {"rows", t.rows}});
  j["tables"] = ts;
  j["version"] = version;
  return j;
}

void write_json(std::ostream& out, const Json& value, int indent) {
  write_value(out, value, indent, 0);
  out << '\n';
}

void write_csv(const RunReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const Table& t : report.tables) {
    const auto path = std::filesystem::path(dir) / (report.command + "_" + t.name + ".csv");
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::invalid_parameter, "cannot write " + path.string());
    if (t.rows.empty()) continue;
    std::size_t i = 0;
    for (const auto& [key, unused] : t.rows.front().items()) {
      f << (i++ ? "," : "") << key;
    }
    f << '\n';
    for (const Json& row : t.rows) {
      i = 0;
      for (const auto& [key, value] : row.items()) f << (i++ ? "," : "") << csv_field(value);
      f << '\n';
    }
  }
}

void write_text(std::ostream& out, const RunReport& report) {
  for (const Check& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << report.command << ' ' << c.name << " max_abs=" << format_double(c.max_abs)
        << " tolerance=" << format_double(c.tolerance) << '\n';
  }
  out << (report.pass() ? "PASS" : "FAIL") << ' ' << report.command << '\n';
}

}  // namespace qosc::cli
