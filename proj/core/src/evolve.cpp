#include "holonomy/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "holonomy/error.hpp"
#include "holonomy/parallel.hpp"

namespace holonomy {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

EvolutionResult integrate(const MatrixFamily& family, const Curve& curve, double T, const ComplexVector& psi0,
                          double rel_tol) {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidParams, "T must be positive");
  if (!(rel_tol > 1e-14 && rel_tol < 1e-2)) throw Error(ErrorKind::InvalidParams, "rel_tol must lie in (1e-14, 1e-2)");
  const double n0 = psi0.norm();
  if (!(n0 > 0.0) || psi0.size() != family.matrix_dim()) {
    throw Error(ErrorKind::InvalidParams, "initial state must be nonzero with the family's dimension");
  }

  // dPsi/ds = -i T H(curve(s)) Psi
  auto rhs = [&](double s, const ComplexVector& y) -> ComplexVector {
    return (-kI * T) * (family(curve.at(std::clamp(s, 0.0, 1.0))) * y);
  };

  EvolutionResult out;
  out.T = T;
  out.log_scale = std::log(n0);
  ComplexVector y = psi0 / n0;
  double s = 0.0;
  ComplexVector k1 = rhs(s, y);
  double h = std::min(0.01, 0.1 / (k1.norm() + 1e-300));
  constexpr double kMinStep = 1e-13;

  while (s < 1.0) {
    if (s + h > 1.0) h = 1.0 - s;
    const ComplexVector k2 = rhs(s + c2 * h, y + h * (a21 * k1));
    const ComplexVector k3 = rhs(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const ComplexVector k4 = rhs(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const ComplexVector k5 = rhs(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const ComplexVector k6 = rhs(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const ComplexVector y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const ComplexVector k7 = rhs(s + h, y5);
    const ComplexVector err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = err_vec.norm() / (rel_tol * std::max(1.0, y5.norm()));

    if (std::isfinite(err) && err <= 1.0) {
      s = (1.0 - s <= h) ? 1.0 : s + h;
      const double n = y5.norm();
      y = y5 / n;
      k1 = k7 / n;
      out.log_scale += std::log(n);
      ++out.steps;
    } else {
      ++out.rejected;
    }
    const double factor = (std::isfinite(err) && err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (s < 1.0 && h < kMinStep) throw Error(ErrorKind::StepUnderflow, "integrator step collapsed", s);
  }
  out.state = y;
  return out;
}

Projection project(const EvolutionResult& result, const ComplexVector& psi, const ComplexVector& phi) {
  Projection p;
  p.log_overlap = std::log(phi.dot(result.state)) + result.log_scale;
  p.fidelity = std::abs(psi.dot(result.state)) / (psi.norm() * result.state.norm());
  return p;
}

AdiabaticPhase adiabatic_extract(const EvolutionResult& result, const SpectralPath& path, int label, cplx k,
                                 double min_fidelity) {
  if (k == 0.0) throw Error(ErrorKind::InvalidParams, "k must be nonzero");
  const int last = path.size() - 1;
  const Projection proj = project(result, path.psi(last, label), path.phi(last, label));
  AdiabaticPhase out;
  out.fidelity = proj.fidelity;
  if (proj.fidelity < min_fidelity) {
    throw Error(ErrorKind::LowFidelity,
                "final state has fidelity " + std::to_string(proj.fidelity) + " with the tracked branch", 1.0);
  }
  const PhaseResult discrete = geometric_phase(path, label);
  out.gamma_discrete = discrete.geometric;
  out.dynamical = dynamical_phase(path, label) * (result.T / path.base_period());
  cplx g = -kI * (proj.log_overlap - std::log(k)) - out.dynamical;
  const double m = std::round((discrete.geometric.real() - g.real()) / kTwoPi);
  g += kTwoPi * m;
  out.gamma_exact = g;
  return out;
}

std::vector<SweepRow> sweep(const MatrixFamily& family, const Curve& curve, int label, const std::vector<double>& T_list,
                            double rel_tol, int n_samples, const TrackOptions& opts) {
  if (T_list.empty()) return {};
  const SpectralPath path = track(family, curve, n_samples, opts);
  const ComplexVector psi0 = path.psi(0, label);
  return parallel_map(
      T_list.size(),
      [&](std::size_t i) {
        SweepRow row;
        row.T = T_list[i];
        try {
          const EvolutionResult r = integrate(family, curve, row.T, psi0, rel_tol);
          const int last = path.size() - 1;
          row.fidelity = project(r, path.psi(last, label), path.phi(last, label)).fidelity;
          const AdiabaticPhase a = adiabatic_extract(r, path, label);
          row.gamma_exact = a.gamma_exact;
          row.error = a.error();
        } catch (const Error& e) {
          row.status = e.kind() == ErrorKind::LowFidelity ? "non-adiabatic" : std::string(to_string(e.kind()));
          row.error = std::numeric_limits<double>::quiet_NaN();
        }
        return row;
      },
      opts.workers);
}

}  // namespace holonomy
