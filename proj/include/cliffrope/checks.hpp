#pragma once

// Seeded invariant suites behind `cliffrope check`.

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "cliffrope/cl3_fast.hpp"

namespace cliffrope::checks {

struct PropertyResult {
  std::string name;
  double value = 0.0;      // measured deviation (or the witnessed gap)
  double threshold = 0.0;  // value must be <= threshold, or > threshold for existence claims
  bool pass = false;
};

struct SuiteResult {
  std::string name;
  std::vector<PropertyResult> properties;

  bool pass() const;
};

// Kernels under test. Replaceable so a mutated kernel can be shown to fail.
struct CheckOptions {
  std::function<cl3::MV8(const cl3::MV8&, const cl3::MV8&)> mv8_product = cl3::mv8_product;
};

std::vector<SuiteResult> run_all_suites(std::uint64_t seed, const CheckOptions& options = {});

// One line per suite; failing suites name their failing properties.
void print_suites(std::ostream& out, const std::vector<SuiteResult>& suites);

}  // namespace cliffrope::checks
