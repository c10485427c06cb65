#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "softmin/energy.hpp"

namespace softmin::app {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

using GradientFn = std::function<Matrix(const Swarm&, const ObjectiveSpec&, double)>;

struct ValidateOptions {
  // The soft-min gradient under test. Tests swap in broken versions to make
  // sure the suite notices.
  GradientFn gradient = softmin_gradient;
  std::uint64_t seed = 20240611;
};

std::vector<CheckResult> run_invariant_suite(const ValidateOptions& options = {});

/// Prints a pass/fail table; returns 0 when every check passes, 1 otherwise.
int validate(std::ostream& out, const ValidateOptions& options = {});

}  // namespace softmin::app
