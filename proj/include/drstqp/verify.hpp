#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace drstqp {

/// One invariant check, runnable on demand from the CLI.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<std::string> verify_suites();

/// Runs the named property suite ("symlin", "transport", ..., or "all").
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed);

}  // namespace drstqp
