// Outcome of an executable check: pass/fail, one-line summary and structured details.
#pragma once

#include "json.hpp"

#include <cstdio>
#include <string>

namespace lose {

struct CheckReport {
  std::string name;
  bool passed = false;
  std::string summary;
  nlohmann::json details = nlohmann::json::object();
};

// Compact number formatting for report summaries.
inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

inline nlohmann::json to_json(const CheckReport& r) {
  return {{"check", r.name}, {"passed", r.passed}, {"summary", r.summary}, {"details", r.details}};
}

}  // namespace lose
