#include "odeof/cli/report.hpp"

#include <cstdio>
#include <sstream>

namespace odeof::cli {

using nlohmann::json;

void RunReport::param(std::string name, std::string value) {
  parameters.emplace_back(std::move(name), std::move(value));
}

void RunReport::result(std::string name, double value) {
  results.emplace_back(std::move(name), value);
}

void RunReport::check(std::string name, bool passed, double measured, double tolerance) {
  checks.push_back({std::move(name), passed, measured, tolerance});
}

void RunReport::note(std::string text) { notes.push_back(std::move(text)); }

std::optional<double> RunReport::find_result(const std::string& name) const {
  for (const auto& [k, v] : results) {
    if (k == name) return v;
  }
  return std::nullopt;
}

bool RunReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string fmt_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json to_json(const RunReport& r) {
  json j;
  j["command"] = r.command;
  j["parameters"] = json::array();
  for (const auto& [k, v] : r.parameters) j["parameters"].push_back({{"name", k}, {"value", v}});
  j["results"] = json::array();
  for (const auto& [k, v] : r.results) j["results"].push_back({{"name", k}, {"value", v}});
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"measured", c.measured},
                           {"tolerance", c.tolerance}});
  }
  j["notes"] = r.notes;
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  j["wall_time_s"] = r.wall_time_s;
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.command = j.at("command").get<std::string>();
  for (const auto& p : j.at("parameters")) {
    r.param(p.at("name").get<std::string>(), p.at("value").get<std::string>());
  }
  for (const auto& p : j.at("results")) {
    r.result(p.at("name").get<std::string>(), p.at("value").get<double>());
  }
  for (const auto& c : j.at("checks")) {
    r.check(c.at("name").get<std::string>(), c.at("passed").get<bool>(),
            c.at("measured").get<double>(), c.at("tolerance").get<double>());
  }
  r.notes = j.at("notes").get<std::vector<std::string>>();
  if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  return r;
}

std::string render_text(const RunReport& r) {
  std::ostringstream os;
  os << "command: " << r.command << '\n';
  for (const auto& [k, v] : r.parameters) os << k << ": " << v << '\n';
  if (r.seed) os << "seed: " << *r.seed << '\n';
  for (const auto& [k, v] : r.results) os << k << " = " << fmt_num(v) << '\n';
  for (const auto& c : r.checks) {
    os << "check " << c.name << ": " << (c.passed ? "PASS" : "FAIL") << " (measured "
       << fmt_num(c.measured) << ", tol " << fmt_num(c.tolerance) << ")\n";
  }
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  os << "wall time: " << fmt_num(r.wall_time_s) << " s\n";
  return os.str();
}

}  // namespace odeof::cli
