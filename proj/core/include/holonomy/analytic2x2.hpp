#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holonomy/curve.hpp"
#include "holonomy/family.hpp"

namespace holonomy::analytic {

/// Coordinate patches of the double cover: M1 excludes {bc = 0, f = -a},
/// M2 excludes {bc = 0, f = +a}.
enum class Patch { M1, M2 };
enum class Branch { Plus, Minus };

/// A point of the double cover: entries of the traceless part
/// [[a, b], [c, -a]] together with a chosen root f of a^2 + bc.
struct TwoLevelPoint {
  cplx a{}, b{}, c{}, f{};
  Patch patch = Patch::M1;
  /// tr(H)/2, which only shifts both eigenvalues.
  cplx shift{};

  /// Splits h into shift + traceless part. Throws InvalidParams unless
  /// f^2 = a^2 + bc to roundoff.
  static TwoLevelPoint from_matrix(const ComplexMatrix& h, cplx f, Patch patch = Patch::M1);
  double scale() const { return std::abs(a) + std::abs(b) + std::abs(c) + std::abs(f); }
};

/// Unnormalized closed-form frames; <phi_i|psi_j> = delta_ij exactly.
struct PatchFrame2x2 {
  ComplexVector psi_plus, psi_minus, phi_plus, phi_minus;
  Patch patch = Patch::M1;
};

/// M1: psi_+ = (f+a, c), psi_- = (-b, f+a), phi with 1/(2f*(f*+a*)).
/// M2: the M1 forms with the branches exchanged and f -> -f.
/// Throws PatchSingular when f + a (M1) or a - f (M2) vanishes.
PatchFrame2x2 frame_closed_form(const TwoLevelPoint& p);

/// Patch section of one branch, psi from the patch formula and phi from the
/// spectral projector, valid wherever that psi is nonzero.
std::pair<ComplexVector, ComplexVector> branch_frame(const TwoLevelPoint& p, Branch branch);

/// Connection one-form of `branch` on p.patch evaluated on the increment
/// (da, db, dc, df). Throws PatchSingular where the branch's section vanishes.
cplx connection_closed_form(const TwoLevelPoint& p, cplx da, cplx db, cplx dc, cplx df, Branch branch);

/// G with psi^2 = G psi^1 on M1 and M2: G+ = -b/(f+a), G- = c/(f+a).
/// Throws PatchSingular outside the overlap (bc = 0).
cplx transition_closed_form(const TwoLevelPoint& p, Branch branch);
/// The inverse direction, psi^1 = G psi^2.
inline cplx transition_1_2(const TwoLevelPoint& p, Branch branch) { return 1.0 / transition_closed_form(p, branch); }

/// f along the curve's n + 1 uniform samples, continuing from f_start by
/// nearest root with bisection on near-ties.
std::vector<cplx> continue_f(const MatrixFamily& family, const Curve& curve, cplx f_start, int n_samples,
                             int max_depth = 20, double ep_guard_rel = 1e-6);

enum class Example {
  SymA,             // [[1+z, i(1-z)], [i(1-z), -(1+z)]]
  SymB,             // [[1+z, 1-z], [1-z, -(1+z)]]
  NonSymA,          // [[z, 1], [0, -z]]
  NonSymB,          // [[alpha z, 1], [(beta^2 - alpha^2) z^2, -alpha z]]
  ThreeParam,       // (R - i Gamma e3 / 2) . sigma, R in R^3
  ThreeParamSlice,  // ThreeParam at R2 = 0, coordinates (R1, R3)
  H1,               // [[0, 1], [z, 0]]
  H2Block,          // diag(z, H1[z])
  SpinHalf,         // R . sigma, Hermitian
};

struct ExampleParams {
  cplx alpha{1.0, 0.0};
  cplx beta{2.0, 0.0};
  double gamma = 2.0;
};

std::optional<Example> example_from_name(const std::string& name);
std::string example_name(Example e);

/// Complex parameters z occupy coordinates (Re z, Im z).
MatrixFamily example_family(Example e, const ExampleParams& params = {});

/// The paper's stated geometric phase for a unit circle around the EP,
/// real part wrapped into (-pi, pi]; nullopt where no value is stated.
std::optional<cplx> closed_form_phase(Example e, const ExampleParams& params, Branch branch);

/// Loop C_+ or C_- of the R2 = 0 slice around the EP at (+-Gamma/2, 0).
Curve three_param_loop(double gamma, double epsilon, bool plus);

struct ClosedFormHolonomy {
  cplx gamma{};
  cplx holonomy_factor{1.0, 0.0};
  cplx f_end{};
  int patch_switches = 0;
};

/// Independent holonomy of a 2x2 family: f continued along the curve, the
/// closed-form connection integrated by the trapezoid rule with fourth-order
/// differences in t, switching patches with hysteresis and patching the
/// pieces with the closed-form transitions.
ClosedFormHolonomy closed_form_holonomy(const MatrixFamily& family, const Curve& curve, cplx f_start, Branch branch,
                                        int n_samples);

}  // namespace holonomy::analytic
