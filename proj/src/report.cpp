#include "domkit/report.hpp"

#include <algorithm>

namespace domkit {

void Report::add(std::string name, bool pass, std::string detail) {
  checks_.push_back(Check{std::move(name), pass, std::move(detail)});
}

void Report::merge(const Report& other, std::string_view prefix) {
  for (const auto& c : other.checks_) {
    std::string name = prefix.empty() ? c.name : std::string(prefix) + "/" + c.name;
    checks_.push_back(Check{std::move(name), c.pass, c.detail});
  }
}

bool Report::ok() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

std::optional<Check> Report::first_failure() const {
  for (const auto& c : checks_)
    if (!c.pass) return c;
  return std::nullopt;
}

nlohmann::json Report::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : checks_) {
    nlohmann::json j{{"name", c.name}, {"pass", c.pass}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(std::move(j));
  }
  return {{"subject", subject_}, {"pass", ok()}, {"checks", std::move(checks)}};
}

std::string Report::to_text() const {
  std::string out = subject_ + ": " + (ok() ? "PASS" : "FAIL") + "\n";
  for (const auto& c : checks_) {
    out += std::string("  [") + (c.pass ? "pass" : "FAIL") + "] " + c.name;
    if (!c.detail.empty()) out += "  -- " + c.detail;
    out += "\n";
  }
  return out;
}

}  // namespace domkit
