#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "report.hpp"

namespace qosc::cli {

/// Merged parameter record (file values overridden by flags). Every value a
/// command reads is echoed, with defaults filled in, in read order.
class ParamSet {
 public:
  explicit ParamSet(Json input);

  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  std::string text(const std::string& key, const std::string& fallback);
  bool flag(const std::string& key, bool fallback);
  std::vector<double> numbers(const std::string& key);

  const Json& echo() const noexcept { return echo_; }

 private:
  const Json* find(const std::string& key) const;

  Json input_;
  Json echo_ = Json::object();
};

inline constexpr std::string_view kCommands[] = {"build", "verify", "spectrum", "poly", "algebra", "decompose"};

/// Runs one subcommand. Throws qosc::Error for parameter and numerical errors.
RunReport run_command(const std::string& command, const Json& params);

/// 0 when every check passes, 1 otherwise.
int exit_status(const RunReport& report);

/// 2 for parameter errors, 1 for everything else.
int exit_status(const Error& error);

}  // namespace qosc::cli
