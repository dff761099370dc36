#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using qosc::cli::Json;

qosc::Error param_error(const std::string& msg) { return qosc::Error(qosc::ErrorKind::invalid_parameter, msg); }

Json load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw param_error("cannot read parameter file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw param_error("parameter file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw param_error("parameter file " + path + " must hold a JSON object");
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tridiagonal representations of the q-oscillator algebra"};
  app.require_subcommand(1, 1);

  std::string params_path, csv_dir;
  bool json = true;
  app.add_option("--params", params_path, "JSON parameter file; flags take precedence");
  app.add_option("--csv-dir", csv_dir, "Also write every table as CSV into this directory");
  app.add_flag("--json,!--no-json", json, "Print the JSON report (default) or a PASS/FAIL summary");

  // Numeric and text parameters, keyed by their name in the parameter record.
  std::map<std::string, std::optional<double>> numbers;
  std::map<std::string, std::optional<int>> integers;
  std::map<std::string, std::optional<std::string>> texts;
  std::optional<std::vector<double>> xs;
  std::optional<bool> decompose_flag;

  const std::vector<std::pair<std::string, std::string>> number_flags = {
      {"q", "deformation parameter"},     {"abs-tol", "absolute tolerance"}, {"rel-tol", "relative tolerance"},
      {"xi0", "general solution xi0"},    {"zeta0", "general solution zeta0"}, {"s1", "invariant s1"},
      {"s2", "invariant s2"},             {"c1", "big q-Jacobi c1"},          {"c2", "big q-Jacobi c2"},
      {"c3", "big q-Jacobi c3"},          {"a1", "Askey-Wilson a1"},          {"a2", "Askey-Wilson a2"},
      {"a3", "Askey-Wilson a3"},          {"a4", "Askey-Wilson a4"},          {"mu", "pencil coefficient"},
      {"a", "canonical pair scale"}};
  for (const auto& [name, help] : number_flags) app.add_option("--" + name, numbers[name], help);
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"size", "matrix size"}, {"N", "truncation order"}, {"n-max", "largest polynomial degree"},
           {"k-max", "largest monomial degree"}}) {
    app.add_option("--" + name, integers[name], help);
  }
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"parameterization", "general | structured"},
           {"suite", "qosc | bigqjacobi-algebra | aw-algebra | aw-match | qdiff"},
           {"family", "big-q-jacobi | askey-wilson | q-hahn | q-para"},
           {"pair", "canonical | general | structured | q-hahn | q-para"},
           {"variant", "ML | LM"}}) {
    app.add_option("--" + name, texts[name], help);
  }
  app.add_option("--x", xs, "Evaluation points")->delimiter(',');
  app.add_flag("--decompose", decompose_flag, "Also decompose into geometric-chain blocks");

  for (std::string_view name : qosc::cli::kCommands) {
    app.add_subcommand(std::string(name), "Run the " + std::string(name) + " command")->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Json params = params_path.empty() ? Json::object() : load_params_file(params_path);
    auto key = [](std::string name) {
      for (char& c : name) c = c == '-' ? '_' : c;
      return name;
    };
    for (const auto& [name, v] : numbers) {
      if (v) params[key(name)] = *v;
    }
    for (const auto& [name, v] : integers) {
      if (v) params[key(name)] = *v;
    }
    for (const auto& [name, v] : texts) {
      if (v) params[key(name)] = *v;
    }
    if (xs) params["x"] = *xs;
    if (decompose_flag) params["decompose"] = *decompose_flag;

    const qosc::cli::RunReport report = qosc::cli::run_command(command, params);
    if (json) {
      qosc::cli::write_json(std::cout, report.to_json());
    } else {
      qosc::cli::write_text(std::cout, report);
    }
    if (!csv_dir.empty()) qosc::cli::write_csv(report, csv_dir);
    return qosc::cli::exit_status(report);
  } catch (const qosc::Error& e) {
    std::cerr << "qosc " << command << ": " << e.what() << '\n';
    return qosc::cli::exit_status(e);
  } catch (const std::exception& e) {
    std::cerr << "qosc " << command << ": " << e.what() << '\n';
    return 1;
  }
}
