#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idt {

// One named property check with a short value trace for the report.
struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<PropertyResult> properties;
  bool passed() const;
};

// Suites in run order: twirl, fuchs-van-de-graaf, corz, axioms, family,
// curves, solver.
std::vector<std::string> verify_suite_names();

// Runs one suite. Unknown names throw std::invalid_argument.
SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed = 0);

// Runs the named suite, or every suite in order when name is "all".
std::vector<SuiteResult> run_verify(const std::string& name, std::uint64_t seed = 0);

}  // namespace idt
