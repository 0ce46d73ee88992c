#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace coend {

enum class Execution { Serial, Parallel };

/// Outcome of a single check. Expected marks a counterexample that the theory
/// predicts (for example minimal expressions that are not unique at length 1).
enum class Status { Pass, Fail, Skipped, Expected };

std::string to_string(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::Pass;
  std::string reason;     // mandatory for Skipped; free text otherwise
  nlohmann::json detail;  // witnesses, counts, bounds
};

nlohmann::json to_json(const CheckResult& r);

/// Report emitted by every CLI command and by verify_all.
struct Report {
  static constexpr int schema_version = 1;

  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<CheckResult> results;
  nlohmann::json data = nlohmann::json::object();  // command-specific payload
  nlohmann::json timing = nlohmann::json::object();

  void add(CheckResult r) { results.push_back(std::move(r)); }
  void add_all(std::vector<CheckResult> rs) {
    for (auto& r : rs) results.push_back(std::move(r));
  }
  std::size_t count(Status s) const;
  bool any_failure() const { return count(Status::Fail) > 0; }

  /// Full report. With include_timing = false the output is a pure function of
  /// the command and its configuration.
  nlohmann::json to_json(bool include_timing = true) const;
  std::string to_text() const;
};

}  // namespace coend
