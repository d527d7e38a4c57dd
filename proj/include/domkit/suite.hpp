#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "domkit/diagram_io.hpp"
#include "domkit/generate.hpp"

namespace domkit {

struct SuiteConfig {
  DiagramMode mode = DiagramMode::Total;
  std::uint64_t seed = 0;
  std::size_t count = 100;
  std::size_t first = 0;  // case numbers first .. first+count-1
  DiagramShape shape{};
  std::size_t cones = 3;
  Budget budget{};
  // Internal mode only: number of points in the chain used as base.
  std::size_t base_size = 2;
  unsigned threads = 0;  // 0 picks the hardware concurrency

  // Mode-specific generator defaults.
  static SuiteConfig defaults(DiagramMode mode);
};

struct ConeStats {
  std::size_t apex_size = 0;
  UniversalReport universal;
};

struct CaseResult {
  std::size_t number = 0;
  bool pass = false;
  std::size_t index_size = 0;
  std::vector<std::size_t> object_sizes;
  std::size_t apex_size = 0;
  std::vector<ConeStats> cones;
  Report report;
  std::string error;  // set when the case threw

  nlohmann::json to_json() const;
};

struct SuiteResult {
  SuiteConfig config;
  std::vector<CaseResult> cases;

  std::size_t passed() const;
  bool ok() const { return passed() == cases.size(); }
  // Command line rerunning one case.
  std::string repro(std::size_t number) const;
  // Keys sorted, no timings: identical configs give identical bytes.
  nlohmann::json to_json() const;
  std::string to_text() const;
};

CaseResult run_case(const SuiteConfig& config, std::size_t number);
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace domkit
