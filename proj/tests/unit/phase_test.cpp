#include <random>

#include <doctest.h>
#include <holonomy/holonomy.hpp>

#include "fixtures.hpp"

using namespace holonomy;
using namespace holonomy::analytic;
namespace ht = holonomy::testing;

namespace {

Curve circle(cplx c, double r) { return Curve::circle(complex_point(c), r); }

MatrixFamily constant_family(ComplexMatrix h) {
  return MatrixFamily("constant", static_cast<int>(h.rows()), 2, [h](const Point&) { return h; });
}

ComplexMatrix diag2(cplx a, cplx b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

MatrixFamily non_sym_b(cplx alpha = 1.0, cplx beta = 2.0) {
  return example_family(Example::NonSymB, {alpha, beta, 2.0});
}

int plus_label(const SpectralPath& path, cplx f) {
  return ht::label_near(path, f);  // traceless family: E_+ = f
}

Point spin_point(double x, double y, double z) {
  Point p(3);
  p << x, y, z;
  return p;
}

}  // namespace

TEST_CASE("dynamical phase") {
  SUBCASE("constant energy over a period of 2 pi") {
    const SpectralPath path = track(constant_family(diag2(1.0, -1.0)), circle(0.0, 1.0).with_period(kTwoPi), 16);
    CHECK(std::abs(dynamical_phase(path, ht::label_near(path, 1.0)) + kTwoPi) < 1e-12);
  }
  SUBCASE("E = z around the unit circle integrates to zero") {
    const SpectralPath path = track(example_family(Example::NonSymA), circle(0.0, 1.0), 256);
    CHECK(std::abs(dynamical_phase(path, ht::label_near(path, 1.0))) < 1e-12);
  }
  SUBCASE("decaying level has Im delta > 0") {
    const SpectralPath path = track(constant_family(diag2(cplx(0, -1), cplx(0, 1))), circle(0.0, 1.0), 16);
    const int decaying = ht::label_near(path, cplx(0, -1));
    CHECK(dynamical_phase(path, decaying).imag() == doctest::Approx(1.0));
    CHECK(dynamical_phase(path, 1 - decaying).imag() == doctest::Approx(-1.0));
  }
}

TEST_CASE("constant eigenvectors carry no geometric phase") {
  const MatrixFamily fam("diag", 2, 2, [](const Point& p) {
    const double g = 2.0 + p(0);
    return diag2(g, -g);
  });
  const SpectralPath path = track(fam, circle(0.0, 1.0), 64);
  for (int n = 0; n < 2; ++n) CHECK(std::abs(geometric_phase(path, n).geometric) < 1e-14);
}

TEST_CASE("non-symmetric family around its exceptional point") {
  const SpectralPath path = track(non_sym_b(), circle(0.0, 1.0), 2048);
  const int plus = plus_label(path, 2.0);
  CHECK(ht::phase_distance(geometric_phase(path, plus).geometric, -kPi / 2.0) < 1e-6);
  CHECK(ht::phase_distance(geometric_phase(path, 1 - plus).geometric, -3.0 * kPi / 2.0) < 1e-6);
}

TEST_CASE("upper-triangular family has zero phase mod 2 pi") {
  const SpectralPath path = track(example_family(Example::NonSymA), circle(0.0, 1.0), 512);
  for (int n = 0; n < 2; ++n) CHECK(ht::phase_distance(geometric_phase(path, n).geometric, 0.0) < 1e-8);
}

TEST_CASE("phase requires a cyclic branch on a closed curve") {
  const MatrixFamily h1 = example_family(Example::H1);
  try {
    geometric_phase(track(h1, circle(0.0, 1.0), 64), 0);
    FAIL("expected NonCyclicBranch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonCyclicBranch);
  }
  const Curve open([](double t) { return complex_point(1.0 + t); }, false);
  try {
    geometric_phase(track(h1, open, 16), 0);
    FAIL("expected OpenCurve");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OpenCurve);
  }
}

TEST_CASE("gauge changes") {
  std::mt19937 rng(41);
  const SpectralPath path = track(non_sym_b({1.0, 0.5}, {2.0, -0.3}), circle(0.0, 1.0), 256);
  const cplx ref = geometric_phase(path, 0).holonomy_factor;

  SUBCASE("identity gauge leaves the path alone") {
    std::vector<std::vector<cplx>> ones(static_cast<std::size_t>(path.size()), std::vector<cplx>(2, 1.0));
    const SpectralPath same = gauge_perturb(path, ones);
    for (int k = 0; k < path.size(); ++k) CHECK((same.psi(k, 0) - path.psi(k, 0)).norm() == 0.0);
  }
  SUBCASE("one interior rescaling changes the steps but not the product") {
    std::vector<std::vector<cplx>> g(static_cast<std::size_t>(path.size()), std::vector<cplx>(2, 1.0));
    g[100][static_cast<std::size_t>(path.branch_index(100, 0))] = 2.0;
    const SpectralPath p2 = gauge_perturb(path, g);
    CHECK(std::abs(p2.phi(99, 0).dot(p2.psi(100, 0)) - 2.0 * path.phi(99, 0).dot(path.psi(100, 0))) < 1e-12);
    CHECK(std::abs(geometric_phase(p2, 0).holonomy_factor - ref) < 1e-12 * std::abs(ref));
  }
  SUBCASE("random gauges") {
    for (int trial = 0; trial < 20; ++trial) {
      const SpectralPath p2 = gauge_perturb(path, ht::random_gauges(path, rng));
      for (int n = 0; n < 2; ++n) {
        const cplx r = geometric_phase(path, n).holonomy_factor;
        CHECK(std::abs(geometric_phase(p2, n).holonomy_factor - r) < 1e-9 * std::abs(r));
      }
    }
  }
  SUBCASE("zero factor is refused") {
    auto g = ht::random_gauges(path, rng);
    g[3][1] = 0.0;
    CHECK_THROWS_AS(gauge_perturb(path, g), Error);
  }
}

TEST_CASE("holonomy does not depend on the start point") {
  const MatrixFamily fam = non_sym_b({1.0, 0.5}, {2.0, -0.3});
  const Curve c = circle(0.0, 1.0);
  const SpectralPath a = track(fam, c, 1024);
  const SpectralPath b = track(fam, c.rebased(0.3), 1024);
  for (int n = 0; n < 2; ++n) {
    const int nb = ht::label_near(b, a.samples()[0].frame.energy(n) * std::polar(1.0, kTwoPi * 0.3));
    const cplx ha = geometric_phase(a, n).holonomy_factor;
    CHECK(std::abs(geometric_phase(b, nb).holonomy_factor - ha) < 1e-8 * std::abs(ha));
  }
}

TEST_CASE("reversing the loop negates the phase") {
  const MatrixFamily fam = non_sym_b({1.0, 0.5}, {2.0, -0.3});
  const Curve c = Curve::ellipse(complex_point(0.0), 1.3, 0.7, 0.4);
  const SpectralPath fwd = track(fam, c, 2048);
  const SpectralPath back = track(fam, c.reversed(), 2048);
  for (int n = 0; n < 2; ++n) {
    const cplx g = geometric_phase(fwd, n).geometric;
    CHECK(ht::phase_distance(geometric_phase(back, n).geometric, -g) < 1e-8);
  }
}

TEST_CASE("plain sum converges at second order, extrapolated sum faster") {
  const MatrixFamily spin = example_family(Example::SpinHalf);
  const Curve cone = Curve::circle(spin_point(0.0, 0.0, 0.5), std::sqrt(0.75), 0, 1);
  PhaseOptions plain;
  plain.extrapolate = false;
  std::vector<double> plain_g, extra_g;
  for (int n : {64, 128, 256, 512}) {
    const SpectralPath path = track(spin, cone, n);
    plain_g.push_back(geometric_phase(path, 0, plain).geometric.real());
    extra_g.push_back(geometric_phase(path, 0).geometric.real());
  }
  for (std::size_t i = 2; i < plain_g.size(); ++i) {
    const double ratio = std::abs(plain_g[i - 1] - plain_g[i - 2]) / std::abs(plain_g[i] - plain_g[i - 1]);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
    CHECK(std::abs(extra_g[i] - extra_g[i - 1]) < std::abs(plain_g[i] - plain_g[i - 1]) / 8.0);
  }
}

TEST_CASE("Hermitian families give unimodular factors") {
  std::mt19937 rng(43);
  const MatrixFamily spin = example_family(Example::SpinHalf);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Point c = spin_point(u(rng), u(rng), 1.5 + u(rng) * 0.2);
    const SpectralPath path = track(spin, Curve::circle(c, 0.8, 0, 1 + trial % 2), 512);
    for (int n = 0; n < 2; ++n) CHECK(std::abs(std::abs(geometric_phase(path, n).holonomy_factor) - 1.0) < 1e-8);
  }
}

TEST_CASE("coarse steps report precision loss") {
  const MatrixFamily spin = example_family(Example::SpinHalf);
  const SpectralPath path = track(spin, Curve::circle(spin_point(0, 0, 0), 1.0, 0, 1), 8);
  PhaseOptions strict;
  strict.precision_loss = 0.01;
  try {
    geometric_phase(path, 0, strict);
    FAIL("expected PrecisionLoss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PrecisionLoss);
    CHECK(std::string(e.what()).find("32") != std::string::npos);
  }
}

TEST_CASE("multi-patch products") {
  std::mt19937 rng(47);
  const SpectralPath path = track(non_sym_b({1.0, 0.5}, {2.0, -0.3}), circle(0.0, 1.0), 1024);
  const cplx ref = geometric_phase(path, 0).holonomy_factor;

  SUBCASE("one segment with unit transition") {
    const auto segs = split_path(path, 0, {});
    REQUIRE(segs.size() == 1);
    CHECK(std::abs(multipatch_phase(segs, {1.0}).holonomy_factor - ref) < 1e-12 * std::abs(ref));
  }
  SUBCASE("random cuts and segment gauges") {
    PhaseOptions plain;
    plain.extrapolate = false;
    const cplx ref_plain = geometric_phase(path, 0, plain).holonomy_factor;
    for (int r : {2, 3, 5}) {
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<int> cuts;
        std::uniform_int_distribution<int> pick(1, path.size() - 2);
        while (static_cast<int>(cuts.size()) < r - 1) {
          const int c = pick(rng);
          if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        auto segs = split_path(path, 0, cuts);
        for (auto& s : segs) s.path = gauge_perturb(s.path, ht::random_gauges(s.path, rng));
        std::vector<cplx> g(segs.size());
        for (std::size_t i = 0; i < segs.size(); ++i) {
          g[i] = junction_transition(segs[(i + segs.size() - 1) % segs.size()], segs[i]);
        }
        CHECK(std::abs(multipatch_phase(segs, g, 1e-6, plain).holonomy_factor - ref_plain) <
              1e-8 * std::abs(ref_plain));
      }
    }
  }
  SUBCASE("wrong transition is caught") {
    const auto segs = split_path(path, 0, {300, 700});
    std::vector<cplx> g(3);
    for (std::size_t i = 0; i < 3; ++i) g[i] = junction_transition(segs[(i + 2) % 3], segs[i]);
    g[1] *= 1.01;
    try {
      multipatch_phase(segs, g);
      FAIL("expected MismatchedJunction");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MismatchedJunction);
    }
  }
}

TEST_CASE("curvature of the spin-1/2 monopole") {
  const MatrixFamily spin = example_family(Example::SpinHalf);
  const Point p = spin_point(0, 0, 1);
  const Eigenframe f = frame_at(spin, p, 0.0);
  const int up = std::abs(f.energy(0) - 1.0) < 0.5 ? 0 : 1;
  for (auto method : {CurvatureMethod::SumOverStates, CurvatureMethod::ExteriorDerivative}) {
    const auto s = curvature(spin, p, up, 1e-4, method);
    CHECK(std::abs(s.components(0, 1) + 0.5) < 1e-6);
    CHECK(std::abs(s.components(1, 0) - 0.5) < 1e-6);
    CHECK(std::abs(s.components(0, 2)) < 1e-6);
    CHECK(std::abs(s.components(1, 2)) < 1e-6);
  }
}

TEST_CASE("constant family has no curvature") {
  std::mt19937 rng(51);
  std::normal_distribution<double> g;
  ComplexMatrix h(2, 2);
  h << cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng));
  for (auto method : {CurvatureMethod::SumOverStates, CurvatureMethod::ExteriorDerivative}) {
    CHECK(curvature(constant_family(h), complex_point(0.3), 0, 1e-3, method).components.norm() < 1e-12);
  }
}

TEST_CASE("sum-over-states curvature matches a gauge-scrambled analytic oracle") {
  std::mt19937 rng(53);
  const cplx alpha(1.0, 0.3), beta(2.0, -0.5);
  const MatrixFamily fam = non_sym_b(alpha, beta);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    const cplx z(u(rng), u(rng));
    if (std::abs(z) < 0.3) continue;
    const Point p = complex_point(z);
    ComplexMatrix dx(2, 2);
    dx << alpha, 0.0, 2.0 * (beta * beta - alpha * alpha) * z, -alpha;
    const ComplexMatrix dy = kI * dx;
    Eigenframe f = frame_at(fam, p, 0.0);
    for (int j = 0; j < 2; ++j) {
      const cplx k = ht::random_gauge(rng);
      f.right.col(j) *= k;
      f.left.col(j) /= std::conj(k);
    }
    for (int n = 0; n < 2; ++n) {
      const int m = 1 - n;
      auto x = [&](const ComplexMatrix& d, int a, int b) { return f.phi(a).dot(d * f.psi(b)); };
      const cplx de = f.energy(m) - f.energy(n);
      const cplx oracle = kI * (x(dx, n, m) * x(dy, m, n) - x(dy, n, m) * x(dx, m, n)) / (de * de);
      const auto s = curvature(fam, p, n, 1e-4, CurvatureMethod::SumOverStates);
      CHECK(std::abs(s.components(0, 1) - oracle) < 1e-7 * (1.0 + std::abs(oracle)));
    }
  }
}

TEST_CASE("curvature methods agree at second order") {
  const MatrixFamily fam = non_sym_b({1.0, 0.3}, {2.0, -0.5});
  const Point p = complex_point(1.0);
  for (int n = 0; n < 2; ++n) {
    const auto a3 = curvature(fam, p, n, 1e-3, CurvatureMethod::ExteriorDerivative);
    const auto b3 = curvature(fam, p, n, 1e-3, CurvatureMethod::SumOverStates);
    const auto a4 = curvature(fam, p, n, 1e-4, CurvatureMethod::ExteriorDerivative);
    const auto b4 = curvature(fam, p, n, 1e-4, CurvatureMethod::SumOverStates);
    CHECK((a3.components - b3.components).norm() < 1e-5);
    CHECK((a4.components - b4.components).norm() < 1e-6);
  }
}

TEST_CASE("Stokes check") {
  const MatrixFamily spin = example_family(Example::SpinHalf);
  SUBCASE("small planar loop") {
    const Curve loop = Curve::circle(spin_point(0.2, -0.3, 0.9), 0.1, 0, 1);
    for (int n = 0; n < 2; ++n) CHECK(stokes_check(spin, loop, n) < 1e-4);
  }
  SUBCASE("zero-area loop") {
    const Curve loop = Curve::polyline({spin_point(0.2, 0.0, 1.0), spin_point(0.4, 0.1, 1.0)}, true);
    const SpectralPath path = track(spin, loop, 256);
    for (int n = 0; n < 2; ++n) {
      CHECK(std::abs(geometric_phase(path, n).geometric) < 1e-8);
      CHECK(stokes_check(spin, loop, n, 256) < 1e-8);
    }
  }
  SUBCASE("loop around a degeneracy is refused") {
    try {
      stokes_check(spin, Curve::circle(spin_point(0, 0, 0), 0.5, 0, 1), 0);
      FAIL("expected NotContractible");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotContractible);
    }
    try {
      stokes_check(non_sym_b(), circle(0.0, 1.0), 0);
      FAIL("expected NotContractible");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotContractible);
    }
  }
}

TEST_CASE("surface flux of the monopole over a cap") {
  const MatrixFamily spin = example_family(Example::SpinHalf);
  const double theta = kPi / 4.0;
  const Surface cap = [theta](double u, double v) {
    return spin_point(std::sin(theta * u) * std::cos(kTwoPi * v), std::sin(theta * u) * std::sin(kTwoPi * v),
                      std::cos(theta * u));
  };
  const Eigenframe top = frame_at(spin, spin_point(0, 0, 1), 0.0);
  const int up = std::abs(top.energy(0) - 1.0) < 0.5 ? 0 : 1;
  // F = -R/(2|R|^3) on the + level; flux over the cap is minus half its solid angle
  const double expected = -0.5 * kTwoPi * (1.0 - std::cos(theta));
  CHECK(std::abs(surface_flux(spin, cap, up) - expected) < 1e-4);
}
