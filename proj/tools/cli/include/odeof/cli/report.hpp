#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace odeof::cli {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;

  bool operator==(const CheckOutcome&) const = default;
};

/// Everything a command prints, in machine form.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, double>> results;
  std::vector<CheckOutcome> checks;
  std::vector<std::string> notes;
  std::optional<std::uint64_t> seed;
  double wall_time_s = 0.0;

  void param(std::string name, std::string value);
  void result(std::string name, double value);
  void check(std::string name, bool passed, double measured, double tolerance);
  void note(std::string text);

  std::optional<double> find_result(const std::string& name) const;
  bool all_passed() const;

  bool operator==(const RunReport&) const = default;
};

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

/// Human-readable rendering; numbers use %.12g.
std::string render_text(const RunReport& report);

/// printf("%.12g").
std::string fmt_num(double x);

}  // namespace odeof::cli
