#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holonomy/phase.hpp"

namespace holonomy {

/// Psi(T) = exp(log_scale) * state. The state is kept at unit norm during
/// integration so non-unitary growth or decay cannot overflow.
struct EvolutionResult {
  ComplexVector state;
  double log_scale = 0.0;
  double T = 0.0;
  int steps = 0;
  int rejected = 0;

  ComplexVector final_state() const { return std::exp(log_scale) * state; }
};

/// Solves i dPsi/dt = H(curve(t/T)) Psi on t in [0, T] with an adaptive
/// Dormand-Prince 5(4) pair in s = t/T. Throws StepUnderflow if the step
/// size collapses.
EvolutionResult integrate(const MatrixFamily& family, const Curve& curve, double T, const ComplexVector& psi0,
                          double rel_tol = 1e-10);

struct Projection {
  /// ln <phi|Psi(T)>, kept in log form.
  cplx log_overlap{};
  /// |<psi|Psi>| / (|psi| |Psi|), in [0, 1].
  double fidelity = 0.0;
};

Projection project(const EvolutionResult& result, const ComplexVector& psi, const ComplexVector& phi);

struct AdiabaticPhase {
  cplx gamma_exact{};
  cplx gamma_discrete{};
  cplx dynamical{};
  double fidelity = 0.0;
  double error() const { return std::abs(gamma_exact - gamma_discrete); }
};

/// gamma_exact = -i ln(<phi_n(T)|Psi(T)> / k) - delta_n(T), with the 2 pi
/// winding chosen nearest the discrete geometric phase of `path`. Throws
/// LowFidelity if the final state is not close to the tracked branch.
AdiabaticPhase adiabatic_extract(const EvolutionResult& result, const SpectralPath& path, int label,
                                 cplx k = {1.0, 0.0}, double min_fidelity = 0.9);

struct SweepRow {
  double T = 0.0;
  double error = 0.0;
  double fidelity = 0.0;
  cplx gamma_exact{};
  /// "ok", "non-adiabatic", or the failing error kind.
  std::string status = "ok";
};

/// One independent evolution per T from psi_label(0) along a closed curve on
/// which the branch is cyclic (lift first).
std::vector<SweepRow> sweep(const MatrixFamily& family, const Curve& curve, int label, const std::vector<double>& T_list,
                            double rel_tol = 1e-10, int n_samples = 2048, const TrackOptions& opts = {});

}  // namespace holonomy
