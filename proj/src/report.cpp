#include "coend/report.hpp"

#include <algorithm>
#include <sstream>

namespace coend {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIPPED";
    case Status::Expected: return "EXPECTED";
  }
  return "?";
}

nlohmann::json to_json(const CheckResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["status"] = to_string(r.status);
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (!r.detail.is_null()) j["detail"] = r.detail;
  return j;
}

std::size_t Report::count(Status s) const {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [s](const CheckResult& r) { return r.status == s; }));
}

nlohmann::json Report::to_json(bool include_timing) const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["config"] = config;
  j["results"] = nlohmann::json::array();
  for (const auto& r : results) j["results"].push_back(coend::to_json(r));
  j["summary"] = {{"pass", count(Status::Pass)},
                  {"fail", count(Status::Fail)},
                  {"skipped", count(Status::Skipped)},
                  {"expected", count(Status::Expected)}};
  if (!data.empty()) j["data"] = data;
  if (include_timing) j["timing"] = timing;
  return j;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << command << "  config " << config.dump() << "\n";
  for (const auto& r : results) {
    out << "  [" << to_string(r.status) << "] " << r.name;
    if (!r.reason.empty()) out << " -- " << r.reason;
    out << "\n";
    if (r.status == Status::Fail || r.status == Status::Expected) {
      if (!r.detail.is_null()) out << "      " << r.detail.dump() << "\n";
    }
  }
  out << "  summary: " << count(Status::Pass) << " pass, " << count(Status::Fail) << " fail, "
      << count(Status::Skipped) << " skipped, " << count(Status::Expected) << " expected\n";
  return out.str();
}

}  // namespace coend
