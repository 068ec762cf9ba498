#include "holonomy/error.hpp"

namespace holonomy {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SelfOrthogonal: return "SelfOrthogonal";
    case ErrorKind::InvalidSampling: return "InvalidSampling";
    case ErrorKind::InvalidCurve: return "InvalidCurve";
    case ErrorKind::NearEP: return "NearEP";
    case ErrorKind::AmbiguousMatching: return "AmbiguousMatching";
    case ErrorKind::OpenCurve: return "OpenCurve";
    case ErrorKind::NonCyclicBranch: return "NonCyclicBranch";
    case ErrorKind::PrecisionLoss: return "PrecisionLoss";
    case ErrorKind::MismatchedJunction: return "MismatchedJunction";
    case ErrorKind::ZeroGauge: return "ZeroGauge";
    case ErrorKind::PatchSingular: return "PatchSingular";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NotContractible: return "NotContractible";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::LowFidelity: return "LowFidelity";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& what, std::optional<double> t) {
  std::string msg{to_string(kind)};
  msg += ": ";
  msg += what;
  if (t) {
    msg += " (at t = ";
    msg += std::to_string(*t);
    msg += ")";
  }
  return msg;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& what, std::optional<double> t)
    : std::runtime_error(decorate(kind, what, t)), kind_(kind), t_(t) {}

}  // namespace holonomy
