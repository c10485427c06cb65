#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace softmin {

// Precondition of a public operation was not met (shape mismatch, beta <= 0, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A point or name that must be listed in a catalog was not.
class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Integration produced a non-finite coordinate.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::int64_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}

  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace softmin
