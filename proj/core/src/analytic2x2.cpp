#include "holonomy/analytic2x2.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "holonomy/error.hpp"

namespace holonomy::analytic {

namespace {

constexpr double kTiny = 1e-12;

struct Forms {
  ComplexVector psi_plus, psi_minus, phi_plus, phi_minus;
};

// Patch-1 formulas evaluated at an arbitrary root f.
Forms m1_forms(cplx a, cplx b, cplx c, cplx f) {
  Forms out;
  out.psi_plus = ComplexVector(2);
  out.psi_plus << f + a, c;
  out.psi_minus = ComplexVector(2);
  out.psi_minus << -b, f + a;
  const cplx norm = std::conj(1.0 / (2.0 * f * (f + a)));
  out.phi_plus = ComplexVector(2);
  out.phi_plus << norm * std::conj(f + a), norm * std::conj(b);
  out.phi_minus = ComplexVector(2);
  out.phi_minus << -norm * std::conj(c), norm * std::conj(f + a);
  return out;
}

ComplexMatrix traceless(const TwoLevelPoint& p) {
  ComplexMatrix h(2, 2);
  h << p.a, p.b, p.c, -p.a;
  return h;
}

ComplexVector branch_psi(const TwoLevelPoint& p, Branch branch) {
  ComplexVector v(2);
  if (p.patch == Patch::M1) {
    if (branch == Branch::Plus) v << p.f + p.a, p.c;
    else v << -p.b, p.f + p.a;
  } else {
    if (branch == Branch::Plus) v << -p.b, p.a - p.f;
    else v << p.a - p.f, p.c;
  }
  return v;
}

// x / y where y * alt_num = x * alt_den (so x/y = alt_num/alt_den), choosing
// whichever denominator is larger.
cplx stable_ratio(cplx x, cplx y, cplx alt_num, cplx alt_den, double tol) {
  if (std::abs(y) >= std::abs(alt_den)) {
    if (std::abs(y) <= tol) throw Error(ErrorKind::PatchSingular, "branch section vanishes on this patch");
    return x / y;
  }
  if (std::abs(alt_den) <= tol) throw Error(ErrorKind::PatchSingular, "branch section vanishes on this patch");
  return alt_num / alt_den;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

cplx z_of(const Point& p) { return {p(0), p(1)}; }

ComplexMatrix mat2(cplx h00, cplx h01, cplx h10, cplx h11) {
  ComplexMatrix h(2, 2);
  h << h00, h01, h10, h11;
  return h;
}

DegeneracyLocus points_locus(std::string description, std::vector<cplx> zs) {
  DegeneracyLocus locus;
  locus.description = std::move(description);
  for (cplx z : zs) locus.points.push_back(complex_point(z));
  return locus;
}

// Curve parameter wrapped into [0, 1) for closed curves, so differences
// straddling t = 0 stay on the loop.
Point at_wrapped(const Curve& curve, double t) {
  if (curve.closed()) t -= std::floor(t);
  return curve.at(t);
}

}  // namespace

TwoLevelPoint TwoLevelPoint::from_matrix(const ComplexMatrix& h, cplx f, Patch patch) {
  if (h.rows() != 2 || h.cols() != 2) throw Error(ErrorKind::InvalidParams, "two-level point needs a 2x2 matrix");
  TwoLevelPoint p;
  p.shift = 0.5 * (h(0, 0) + h(1, 1));
  p.a = 0.5 * (h(0, 0) - h(1, 1));
  p.b = h(0, 1);
  p.c = h(1, 0);
  p.f = f;
  p.patch = patch;
  const cplx disc = p.a * p.a + p.b * p.c;
  if (std::abs(f * f - disc) > 1e-10 * (std::abs(f * f) + std::abs(p.a * p.a) + std::abs(p.b * p.c) + 1e-300)) {
    throw Error(ErrorKind::InvalidParams, "f is not a square root of a^2 + bc");
  }
  return p;
}

PatchFrame2x2 frame_closed_form(const TwoLevelPoint& p) {
  const double tol = kTiny * p.scale();
  if (std::abs(p.f) <= tol) throw Error(ErrorKind::PatchSingular, "f vanishes (degenerate point)");
  PatchFrame2x2 out;
  out.patch = p.patch;
  if (p.patch == Patch::M1) {
    if (std::abs(p.f + p.a) <= tol) throw Error(ErrorKind::PatchSingular, "f + a vanishes; use patch M2");
    const Forms m = m1_forms(p.a, p.b, p.c, p.f);
    out.psi_plus = m.psi_plus;
    out.psi_minus = m.psi_minus;
    out.phi_plus = m.phi_plus;
    out.phi_minus = m.phi_minus;
  } else {
    if (std::abs(p.a - p.f) <= tol) throw Error(ErrorKind::PatchSingular, "a - f vanishes; use patch M1");
    const Forms m = m1_forms(p.a, p.b, p.c, -p.f);
    out.psi_plus = m.psi_minus;
    out.psi_minus = m.psi_plus;
    out.phi_plus = m.phi_minus;
    out.phi_minus = m.phi_plus;
  }
  return out;
}

std::pair<ComplexVector, ComplexVector> branch_frame(const TwoLevelPoint& p, Branch branch) {
  const double tol = kTiny * p.scale();
  if (std::abs(p.f) <= tol) throw Error(ErrorKind::PatchSingular, "f vanishes (degenerate point)");
  const ComplexVector psi = branch_psi(p, branch);
  if (psi.norm() <= tol) throw Error(ErrorKind::PatchSingular, "branch section vanishes on this patch");
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix h0 = traceless(p);
  const double sign = branch == Branch::Plus ? 1.0 : -1.0;
  const ComplexMatrix proj = (p.f * id + sign * h0) / (2.0 * p.f);
  const ComplexVector phi = proj.adjoint() * psi / psi.squaredNorm();
  return {psi, phi};
}

cplx connection_closed_form(const TwoLevelPoint& p, cplx da, cplx db, cplx dc, cplx df, Branch branch) {
  const double tol = kTiny * p.scale();
  if (std::abs(p.f) <= tol) throw Error(ErrorKind::PatchSingular, "f vanishes (degenerate point)");
  const cplx a = p.a, b = p.b, c = p.c, f = p.f;
  if (p.patch == Patch::M1) {
    if (branch == Branch::Plus) {
      const cplx r = stable_ratio(b, f + a, f - a, c, tol);  // b/(f+a)
      return kI / (2.0 * f) * (r * dc + df + da);
    }
    const cplx r = stable_ratio(c, f + a, f - a, b, tol);  // c/(f+a)
    return kI / (2.0 * f) * (r * db + df + da);
  }
  if (branch == Branch::Plus) {
    const cplx r = stable_ratio(c, a - f, -(a + f), b, tol);  // c/(a-f)
    return kI / (-2.0 * f) * (r * db - df + da);
  }
  const cplx r = stable_ratio(b, a - f, -(a + f), c, tol);  // b/(a-f)
  return kI / (-2.0 * f) * (r * dc - df + da);
}

cplx transition_closed_form(const TwoLevelPoint& p, Branch branch) {
  const double tol = kTiny * p.scale();
  if (std::abs(p.b) <= tol || std::abs(p.c) <= tol || std::abs(p.f + p.a) <= tol || std::abs(p.f - p.a) <= tol) {
    throw Error(ErrorKind::PatchSingular, "point is outside the overlap of M1 and M2 (bc = 0)");
  }
  return branch == Branch::Plus ? -p.b / (p.f + p.a) : p.c / (p.f + p.a);
}

std::vector<cplx> continue_f(const MatrixFamily& family, const Curve& curve, cplx f_start, int n_samples,
                             int max_depth, double ep_guard_rel) {
  if (family.matrix_dim() != 2) throw Error(ErrorKind::InvalidParams, "continue_f needs a 2x2 family");
  const auto grid = discretize(curve, n_samples);

  auto root_at = [&](double t) {
    const ComplexMatrix h = family(curve.at(t));
    const cplx a = 0.5 * (h(0, 0) - h(1, 1));
    const cplx r = std::sqrt(a * a + h(0, 1) * h(1, 0));
    if (2.0 * std::abs(r) < ep_guard_rel * h.norm()) throw Error(ErrorKind::NearEP, "f vanishes", t);
    return r;
  };

  const cplx r0 = root_at(0.0);
  if (std::abs(f_start * f_start - r0 * r0) > 1e-8 * std::abs(r0 * r0)) {
    throw Error(ErrorKind::InvalidParams, "f_start is not a root of a^2 + bc at the start point");
  }

  auto advance = [&](auto&& self, double ta, cplx fa, double tb, int depth) -> cplx {
    const cplx r = root_at(tb);
    const double d_plus = std::abs(r - fa);
    const double d_minus = std::abs(-r - fa);
    if (std::min(d_plus, d_minus) < 0.5 * std::abs(r)) return d_plus <= d_minus ? r : -r;
    if (depth >= max_depth) throw Error(ErrorKind::BranchAmbiguity, "root choice stayed ambiguous", ta);
    const double tm = 0.5 * (ta + tb);
    const cplx fm = self(self, ta, fa, tm, depth + 1);
    return self(self, tm, fm, tb, depth + 1);
  };

  std::vector<cplx> out{f_start};
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) out.push_back(advance(advance, grid[k].t, out.back(), grid[k + 1].t, 0));
  return out;
}

std::optional<Example> example_from_name(const std::string& name) {
  const std::string n = lower(name);
  for (Example e : {Example::SymA, Example::SymB, Example::NonSymA, Example::NonSymB, Example::ThreeParam,
                    Example::ThreeParamSlice, Example::H1, Example::H2Block, Example::SpinHalf}) {
    if (lower(example_name(e)) == n) return e;
  }
  return std::nullopt;
}

std::string example_name(Example e) {
  switch (e) {
    case Example::SymA: return "SymA";
    case Example::SymB: return "SymB";
    case Example::NonSymA: return "NonSymA";
    case Example::NonSymB: return "NonSymB";
    case Example::ThreeParam: return "ThreeParam";
    case Example::ThreeParamSlice: return "ThreeParamSlice";
    case Example::H1: return "H1";
    case Example::H2Block: return "H2Block";
    case Example::SpinHalf: return "SpinHalf";
  }
  return "unknown";
}

MatrixFamily example_family(Example e, const ExampleParams& params) {
  switch (e) {
    case Example::SymA:
      return MatrixFamily("SymA", 2, 2,
                          [](const Point& p) {
                            const cplx z = z_of(p);
                            return mat2(1.0 + z, kI * (1.0 - z), kI * (1.0 - z), -(1.0 + z));
                          },
                          points_locus("EP at z = 0", {0.0}));
    case Example::SymB:
      return MatrixFamily("SymB", 2, 2,
                          [](const Point& p) {
                            const cplx z = z_of(p);
                            return mat2(1.0 + z, 1.0 - z, 1.0 - z, -(1.0 + z));
                          },
                          points_locus("EPs at z = +-i", {kI, -kI}));
    case Example::NonSymA:
      return MatrixFamily("NonSymA", 2, 2,
                          [](const Point& p) {
                            const cplx z = z_of(p);
                            return mat2(z, 1.0, 0.0, -z);
                          },
                          points_locus("EP at z = 0", {0.0}));
    case Example::NonSymB: {
      const cplx alpha = params.alpha;
      const cplx beta = params.beta;
      if (alpha == 0.0 || beta == 0.0) throw Error(ErrorKind::InvalidParams, "alpha and beta must be nonzero");
      return MatrixFamily("NonSymB", 2, 2,
                          [alpha, beta](const Point& p) {
                            const cplx z = z_of(p);
                            return mat2(alpha * z, 1.0, (beta * beta - alpha * alpha) * z * z, -alpha * z);
                          },
                          points_locus("EP at z = 0", {0.0}));
    }
    case Example::ThreeParam: {
      const double g = params.gamma;
      if (g == 0.0) throw Error(ErrorKind::InvalidParams, "Gamma must be nonzero");
      DegeneracyLocus locus;
      locus.description = "EP circle R1^2 + R2^2 = Gamma^2/4, R3 = 0";
      locus.distance = [g](const Point& r) {
        return std::hypot(std::hypot(r(0), r(1)) - 0.5 * std::abs(g), r(2));
      };
      return MatrixFamily("ThreeParam", 2, 3,
                          [g](const Point& r) {
                            const cplx d = r(2) - 0.5 * kI * g;
                            return mat2(d, cplx(r(0), -r(1)), cplx(r(0), r(1)), -d);
                          },
                          std::move(locus));
    }
    case Example::ThreeParamSlice: {
      const double g = params.gamma;
      if (g == 0.0) throw Error(ErrorKind::InvalidParams, "Gamma must be nonzero");
      DegeneracyLocus locus;
      locus.description = "EPs at (R1, R3) = (+-Gamma/2, 0)";
      locus.points = {Point::Unit(2, 0) * (0.5 * g), Point::Unit(2, 0) * (-0.5 * g)};
      return MatrixFamily("ThreeParamSlice", 2, 2,
                          [g](const Point& r) {
                            const cplx d = r(1) - 0.5 * kI * g;
                            return mat2(d, r(0), r(0), -d);
                          },
                          std::move(locus));
    }
    case Example::H1:
      return MatrixFamily("H1", 2, 2,
                          [](const Point& p) { return mat2(0.0, 1.0, z_of(p), 0.0); },
                          points_locus("EP at z = 0", {0.0}));
    case Example::H2Block:
      return MatrixFamily("H2Block", 3, 2,
                          [](const Point& p) {
                            ComplexMatrix h = ComplexMatrix::Zero(3, 3);
                            h(0, 0) = z_of(p);
                            h(1, 2) = 1.0;
                            h(2, 1) = z_of(p);
                            return h;
                          },
                          points_locus("EP at z = 0, crossing of z with sqrt(z) at z = 1", {0.0, 1.0}));
    case Example::SpinHalf: {
      DegeneracyLocus locus = {"diabolic point at R = 0", {Point::Zero(3)}, {}};
      return MatrixFamily("SpinHalf", 2, 3,
                          [](const Point& r) { return mat2(r(2), cplx(r(0), -r(1)), cplx(r(0), r(1)), -r(2)); },
                          std::move(locus), true);
    }
  }
  throw Error(ErrorKind::InvalidParams, "unknown example family");
}

std::optional<cplx> closed_form_phase(Example e, const ExampleParams& params, Branch branch) {
  auto wrapped = [](cplx g) { return cplx(wrap_angle(g.real()), g.imag()); };
  switch (e) {
    case Example::NonSymA: return cplx(0.0, 0.0);
    case Example::NonSymB: {
      const cplx ratio = params.alpha / params.beta;
      return wrapped(-kPi * (branch == Branch::Plus ? 1.0 - ratio : 1.0 + ratio));
    }
    default: return std::nullopt;
  }
}

Curve three_param_loop(double gamma, double epsilon, bool plus) {
  if (!(epsilon > 0.0) || !(epsilon < 0.5 * std::abs(gamma))) {
    throw Error(ErrorKind::InvalidParams, "need 0 < epsilon < Gamma/2");
  }
  const double sign = plus ? 1.0 : -1.0;
  return Curve(
      [gamma, epsilon, sign](double t) -> Point {
        Point r(2);
        r << sign * (0.5 * gamma + epsilon * std::cos(kTwoPi * t)), epsilon * std::sin(kTwoPi * t);
        return r;
      },
      true);
}

ClosedFormHolonomy closed_form_holonomy(const MatrixFamily& family, const Curve& curve, cplx f_start, Branch branch,
                                        int n_samples) {
  if (!curve.closed()) throw Error(ErrorKind::OpenCurve, "holonomy needs a closed curve");
  const std::vector<cplx> fs = continue_f(family, curve, f_start, n_samples);
  const double dt = 1.0 / n_samples;
  const double delta = std::min(1e-4, 0.25 * dt);

  struct Local {
    TwoLevelPoint p;
    cplx da, db, dc, df;
  };
  auto local_at = [&](int k) {
    const double t = k == n_samples ? 1.0 : k * dt;
    Local out;
    out.p = TwoLevelPoint::from_matrix(family(curve.at(t)), fs[static_cast<std::size_t>(k)]);
    const ComplexMatrix dh = (-family(at_wrapped(curve, t + 2 * delta)) + 8.0 * family(at_wrapped(curve, t + delta)) -
                              8.0 * family(at_wrapped(curve, t - delta)) + family(at_wrapped(curve, t - 2 * delta))) /
                             (12.0 * delta);
    out.da = 0.5 * (dh(0, 0) - dh(1, 1));
    out.db = dh(0, 1);
    out.dc = dh(1, 0);
    out.df = (2.0 * out.p.a * out.da + out.p.b * out.dc + out.p.c * out.db) / (2.0 * out.p.f);
    return out;
  };
  auto validity = [&](TwoLevelPoint p, Patch patch) {
    p.patch = patch;
    return branch_psi(p, branch).norm() / p.scale();
  };
  auto connection = [&](Local l, Patch patch) {
    l.p.patch = patch;
    return connection_closed_form(l.p, l.da, l.db, l.dc, l.df, branch);
  };
  auto other = [](Patch p) { return p == Patch::M1 ? Patch::M2 : Patch::M1; };
  // psi^prev = G psi^next at p.
  auto junction = [&](TwoLevelPoint p, Patch prev) {
    const cplx g21 = transition_closed_form(p, branch);
    return prev == Patch::M2 ? g21 : 1.0 / g21;
  };

  ClosedFormHolonomy out;
  Local cur = local_at(0);
  const Patch start_patch = validity(cur.p, Patch::M1) >= validity(cur.p, Patch::M2) ? Patch::M1 : Patch::M2;
  Patch patch = start_patch;
  cplx integral = 0.0;
  cplx log_g = 0.0;
  cplx factor_g = 1.0;
  for (int k = 0; k < n_samples; ++k) {
    const Local next = local_at(k + 1);
    integral += 0.5 * dt * (connection(cur, patch) + connection(next, patch));
    cur = next;
    if (validity(cur.p, patch) < 0.25 * validity(cur.p, other(patch))) {
      const cplx g = junction(cur.p, patch);
      factor_g *= g;
      log_g += std::log(g);
      patch = other(patch);
      ++out.patch_switches;
    }
  }
  out.f_end = fs.back();
  if (std::abs(out.f_end - f_start) > 1e-6 * std::abs(f_start)) {
    throw Error(ErrorKind::NonCyclicBranch, "f does not return to its start value; lift the curve first");
  }
  if (patch != start_patch) {
    const cplx g = junction(cur.p, patch);
    factor_g *= g;
    log_g += std::log(g);
  }
  out.gamma = integral - kI * log_g;
  out.holonomy_factor = std::exp(kI * integral) * factor_g;
  return out;
}

}  // namespace holonomy::analytic
