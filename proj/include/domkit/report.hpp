#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace domkit {

// One named property and whether it held; `detail` carries a witness on
// failure and optional informational text on success.
struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  Report() = default;
  explicit Report(std::string subject) : subject_(std::move(subject)) {}

  void add(std::string name, bool pass, std::string detail = {});
  // Appends every check of `other`, prefixing names with `prefix/`.
  void merge(const Report& other, std::string_view prefix = {});

  bool ok() const;
  const std::string& subject() const { return subject_; }
  const std::vector<Check>& checks() const { return checks_; }
  std::optional<Check> first_failure() const;

  nlohmann::json to_json() const;
  std::string to_text() const;

 private:
  std::string subject_;
  std::vector<Check> checks_;
};

}  // namespace domkit
