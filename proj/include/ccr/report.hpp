#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "ccr/serialize.hpp"

namespace ccr {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool timing = false;  // residual is a wall time in seconds
};

/// residual <= tolerance, with NaN failing.
inline CheckResult make_check(std::string name, double residual, double tolerance) {
  return {std::move(name), residual, tolerance, residual <= tolerance, false};
}

inline CheckResult make_timing_check(std::string name, double seconds, double limit) {
  return {std::move(name), seconds, limit, seconds < limit, true};
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Machine-readable run record. Field order is fixed; with reproducible set,
/// wall times are left out so equal seeds give byte-identical output.
struct RunReport {
  std::vector<std::string> command;
  Json config = Json::object();
  std::vector<CheckResult> checks;
  Json result = Json::object();
  std::optional<double> wall_time;
  bool reproducible = false;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  int exit_code() const { return passed() ? 0 : 1; }

  std::string config_hash() const { return "fnv1a64:" + hex64(fnv1a(config.dump())); }

  void add(CheckResult c) { checks.push_back(std::move(c)); }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["config_hash"] = config_hash();
    j["config"] = config;
    Json cs = Json::array();
    for (const auto& c : checks) {
      Json x;
      x["name"] = c.name;
      if (c.timing && reproducible)
        x["residual"] = nullptr;
      else
        x["residual"] = c.residual;
      x["tolerance"] = c.tolerance;
      x["pass"] = c.pass;
      cs.push_back(std::move(x));
    }
    j["checks"] = std::move(cs);
    j["pass"] = passed();
    j["result"] = result;
    if (wall_time && !reproducible) j["wall_time_s"] = *wall_time;
    return j;
  }

  std::string summary() const {
    std::string out;
    for (const auto& c : checks) {
      out += c.pass ? "PASS " : "FAIL ";
      out += c.name;
      if (c.timing) {
        out += reproducible ? "" : " time=" + sci(c.residual) + "s";
        out += " limit=" + sci(c.tolerance) + "s\n";
      } else {
        out += " residual=" + sci(c.residual) + " tol=" + sci(c.tolerance) + "\n";
      }
    }
    return out;
  }
};

}  // namespace ccr
