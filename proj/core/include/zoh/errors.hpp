#pragma once

#include <stdexcept>
#include <string>

namespace zoh {

/// Raised when an auxiliary signal is requested outside the funnel,
/// i.e. ‖e₁‖ ≥ 1, or when α is evaluated at s ≥ 1.
class FunnelViolation : public std::domain_error {
 public:
  explicit FunnelViolation(const std::string& what, double time = 0.0)
      : std::domain_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// The sampling-time bound has a non-positive candidate, or the initial
/// error lies outside the admissible set.
class InfeasibleDesign : public std::runtime_error {
 public:
  // term is the 0-based index of the failing sampling-time candidate, or -1
  // when the failure is not tied to one of them.
  InfeasibleDesign(const std::string& what, int term)
      : std::runtime_error(what), term_(term) {}
  int term() const noexcept { return term_; }

 private:
  int term_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalBlowup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural hypothesis on the plant (positive definite gain, Hurwitz
/// internal dynamics) does not hold.
class AssumptionViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace zoh
