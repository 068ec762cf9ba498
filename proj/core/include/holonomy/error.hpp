#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace holonomy {

enum class ErrorKind {
  DegenerateInput,
  NoConvergence,
  SelfOrthogonal,
  InvalidSampling,
  InvalidCurve,
  NearEP,
  AmbiguousMatching,
  OpenCurve,
  NonCyclicBranch,
  PrecisionLoss,
  MismatchedJunction,
  ZeroGauge,
  PatchSingular,
  BranchAmbiguity,
  InvalidParams,
  NotContractible,
  StepUnderflow,
  LowFidelity,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers dispatch on kind().
/// Errors raised while walking a curve carry the curve parameter t.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<double> t = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> curve_parameter() const noexcept { return t_; }

 private:
  ErrorKind kind_;
  std::optional<double> t_;
};

}  // namespace holonomy
