#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fqft {

inline constexpr int kReportSchemaVersion = 1;

enum class Arithmetic { exact, float64 };

struct RunConfig {
  int l_max = 4;
  Arithmetic arithmetic = Arithmetic::exact;
  std::map<std::string, double> tolerances;
  std::string backend = "free-boson";  // free-boson | formal | qm
  std::string theory_path;             // formal backend input
  std::uint64_t seed = 1;
  int threads = 1;
  int dim = 4;
  int orders = 2;
  int instances = 1;
  std::string a = "j", b = "j";

  // Validates invariants; throws ContractViolation.
  void validate() const;
  double tolerance(const std::string& key) const;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Report {
  std::string command;
  RunConfig config;
  nlohmann::json results = nlohmann::json::object();
  std::vector<CheckResult> checks{};

  bool passed() const;
  nlohmann::json to_json() const;
};

nlohmann::json config_json(const RunConfig& c);

Report run_verify_cutting(const RunConfig& config);
Report run_ope(const RunConfig& config);
Report run_beta(const RunConfig& config);
Report run_qm(const RunConfig& config);
Report run_all(const RunConfig& config);

// Dispatches on one of verify-cutting, ope, beta, qm, all; throws ContractViolation for others.
Report run_command(const std::string& command, const RunConfig& config);

}  // namespace fqft
