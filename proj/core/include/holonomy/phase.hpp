#pragma once

#include <functional>
#include <vector>

#include "holonomy/tracking.hpp"

namespace holonomy {

struct PhaseResult {
  int label = 0;
  /// delta_n = -integral of E_n dt over the whole (lifted) curve.
  cplx dynamical{};
  /// gamma_n with the real part as the raw (unwrapped) sum of step logs.
  cplx geometric{};
  /// Re gamma_n wrapped into (-pi, pi].
  double geometric_mod = 0.0;
  /// Integer m with Re gamma = geometric_mod + 2 pi m.
  int winding = 0;
  cplx holonomy_factor{1.0, 0.0};
  int traversals = 1;
  int n_samples_used = 0;
};

struct PhaseOptions {
  /// Refuse steps whose gauge-invariant overlap q deviates from 1 by more.
  double precision_loss = 0.5;
  /// Subtract half the log of the two-sided overlap q_k at each step. This
  /// cancels the second-order metric term of the plain log-overlap sum, so
  /// the discrete phase converges at second order and is exactly unimodular
  /// for Hermitian families.
  bool metric_correction = true;
  /// Combine the sums over every sample and every other sample to cancel the
  /// leading h^2 error (Richardson). Applied when the path has an even number
  /// of steps (at least 16) and no bisected samples.
  bool extrapolate = true;
};

cplx dynamical_phase(const SpectralPath& path, int label);

/// Discrete holonomy gamma = i sum_k [ln<phi(t_k)|psi(t_k+1)> - (1/2) ln q_k],
/// q_k = <phi_k|psi_k+1><phi_k+1|psi_k>, closing onto the frame at t_0,
/// optionally Richardson-extrapolated (see PhaseOptions).
/// Throws NonCyclicBranch unless the monodromy fixes `label`.
PhaseResult geometric_phase(const SpectralPath& path, int label, const PhaseOptions& opts = {});

/// Cumulative phases along the path, for plotting; the geometric part of an
/// open stretch is gauge dependent.
struct RunningPhase {
  double t = 0.0;
  cplx dynamical{};
  cplx geometric{};
};
std::vector<RunningPhase> running_phase(const SpectralPath& path, int label, const PhaseOptions& opts = {});

/// Multiplies psi_j at sample k by k_kj and phi_j by 1/conj(k_kj); indices
/// are frame columns. Throws ZeroGauge on a zero factor.
SpectralPath gauge_perturb(const SpectralPath& path, const std::vector<std::vector<cplx>>& rescalings);

/// One open stretch of a branch in its own local frames. `label` is the
/// frame column of the branch at the stretch's first sample.
struct BranchSegment {
  SpectralPath path;
  int label = 0;
};

/// Cuts a closed path into open stretches at the given sample indices
/// (0 < cut < size - 1, increasing). The first stretch starts at sample 0.
std::vector<BranchSegment> split_path(const SpectralPath& path, int label, const std::vector<int>& cuts);

/// Transition scalar G with psi_prev = G psi_next at the junction where
/// `prev` ends and `next` starts: G = <phi_next|psi_prev>.
cplx junction_transition(const BranchSegment& prev, const BranchSegment& next);

/// Holonomy e^{i gamma} = prod_i e^{i gamma(segment i)} G^{i-1,i}, where
/// transitions[i] relates segment i-1 to segment i at segment i's start
/// (segment -1 being the last one). Throws MismatchedJunction when a
/// transition disagrees with the frames by more than tol relative.
/// Extrapolation applies only when every segment qualifies on its own.
PhaseResult multipatch_phase(const std::vector<BranchSegment>& segments, const std::vector<cplx>& transitions,
                             double tol = 1e-6, const PhaseOptions& opts = {});

enum class CurvatureMethod { ExteriorDerivative, SumOverStates };

struct CurvatureSample {
  Point point;
  int label = 0;
  /// Antisymmetric d x d array F_ij.
  ComplexMatrix components;
  CurvatureMethod method = CurvatureMethod::SumOverStates;
};

/// 1e-4 times the distance to the family's known degeneracy locus, or 1e-4.
double default_curvature_step(const MatrixFamily& family, const Point& p);

/// Curvature of the branch in frame column `label` at p. ExteriorDerivative
/// takes the discrete holonomy of a side-h square centred at p in each
/// coordinate plane divided by h^2; SumOverStates uses
/// F_ij = i sum_{m != n} (X_i^nm X_j^mn - X_j^nm X_i^mn) / (E_m - E_n)^2 with
/// X_i^nm = <phi_n|dH/dR_i|psi_m> from central differences.
CurvatureSample curvature(const MatrixFamily& family, const Point& p, int label, double h, CurvatureMethod method,
                          const TrackOptions& opts = {});

using Surface = std::function<Point(double u, double v)>;

struct FluxOptions {
  int nu = 64;
  int nv = 64;
  CurvatureMethod method = CurvatureMethod::SumOverStates;
  /// Curvature step; <= 0 selects default_curvature_step per point.
  double h = 0.0;
  TrackOptions track{};
};

/// Midpoint-rule integral of F(dS/du, dS/dv) over [0,1]^2. `label` is the
/// frame column at surface(0, 0); the branch is continued along u = 0 and
/// then along each line of constant v.
cplx surface_flux(const MatrixFamily& family, const Surface& surface, int label, const FluxOptions& opts = {});

/// |gamma(loop) - flux through the cone over the loop from its centroid|.
/// For a planar loop this cone is the enclosed flat region. Throws
/// NotContractible if the loop's monodromy is nontrivial, a known
/// degeneracy lies inside, or the region hits a degeneracy.
double stokes_check(const MatrixFamily& family, const Curve& loop, int label, int n_samples = 2048,
                    const FluxOptions& opts = {});

}  // namespace holonomy
