#pragma once

#include <stdexcept>
#include <string>

namespace ovals {

// Caller passed inconsistent arguments (mismatched grids, too few nodes, ...).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ODE integration produced a non-finite state.
struct IntegrationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Two leaves of the atlas cross; carries the offending pair.
struct FoliationViolation : std::runtime_error {
  FoliationViolation(const std::string& what, double p, double q)
      : std::runtime_error(what), first(p), second(q) {}
  double first;
  double second;
};

// A flow step folded the curve (node swap); caller should halve the step.
struct StepRejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Conditional estimate whose hypothesis is not met.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnsatzError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ovals
