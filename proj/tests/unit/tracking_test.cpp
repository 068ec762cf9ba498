#include <algorithm>
#include <numeric>
#include <random>

#include <doctest.h>
#include <holonomy/holonomy.hpp>

#include "fixtures.hpp"

using namespace holonomy;
using namespace holonomy::analytic;

namespace {

Curve circle(cplx c, double r) { return Curve::circle(complex_point(c), r); }

// Companion matrix of x^3 - 3x + z; branch points at z = +-2.
MatrixFamily cubic_family() {
  return MatrixFamily("cubic", 3, 2, [](const Point& p) {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 1) = 1.0;
    m(1, 2) = 1.0;
    m(2, 0) = -as_complex(p);
    m(2, 1) = 3.0;
    return m;
  });
}

double brute_force_cost(const ComplexVector& from, const ComplexVector& to) {
  std::vector<int> p(static_cast<std::size_t>(from.size()));
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (int i = 0; i < from.size(); ++i) c += std::abs(from(i) - to(p[static_cast<std::size_t>(i)]));
    best = std::min(best, c);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

}  // namespace

TEST_CASE("uniform discretization of the unit circle") {
  const auto s = discretize(circle(0.0, 1.0), 8);
  REQUIRE(s.size() == 9);
  for (int k = 0; k <= 8; ++k) {
    CHECK(s[static_cast<std::size_t>(k)].t == doctest::Approx(k / 8.0));
    const cplx z = as_complex(s[static_cast<std::size_t>(k)].point);
    CHECK(std::abs(z - std::polar(1.0, kTwoPi * k / 8.0)) < 1e-15);
  }
  CHECK_THROWS_AS(discretize(circle(0.0, 1.0), 4), Error);
}

TEST_CASE("curve construction checks closure") {
  const Curve open([](double t) { return complex_point(t); }, false);
  const auto s = discretize(open, 8);
  CHECK((s.front().point - s.back().point).norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(Curve([](double t) { return complex_point(t); }, true), Error);
}

TEST_CASE("monodromy of the square-root family") {
  const MatrixFamily h1 = example_family(Example::H1);
  const SpectralPath path = track(h1, circle(0.0, 1.0), 64);
  CHECK(path.monodromy().cycle_notation() == "(1 2)");
  const Monodromy m = monodromy_of(path);
  CHECK(m.periods == std::vector<int>{2, 2});
  CHECK(monodromy_group(h1, {circle(0.0, 1.0)}, 64).order() == 2);
}

TEST_CASE("monodromy of the three-level block family") {
  const MatrixFamily h2 = example_family(Example::H2Block);
  const SpectralPath path = track(h2, circle(0.0, 2.0), 64);
  CHECK(path.monodromy().cycle_notation() == "(1)(2 3)");
  CHECK(monodromy_of(path).periods == std::vector<int>{1, 2, 2});
  CHECK(monodromy_group(h2, {circle(0.0, 2.0), circle(0.0, 2.0).reversed()}, 64).order() == 2);
}

TEST_CASE("loop enclosing no degeneracy has trivial monodromy") {
  for (Example ex : {Example::H1, Example::SymA, Example::NonSymB}) {
    CHECK(track(example_family(ex), circle({1.5, 0.5}, 0.4), 64).monodromy().is_identity());
  }
  CHECK(monodromy_group(example_family(Example::H1), {}, 64).order() == 1);
}

TEST_CASE("monodromy is stable under refinement and homotopy") {
  std::mt19937 rng(21);
  const MatrixFamily h2 = example_family(Example::H2Block);
  const Permutation base = track(h2, circle(0.0, 2.0), 64).monodromy();
  CHECK(track(h2, circle(0.0, 2.0), 128).monodromy() == base);
  CHECK(track(h2, circle(0.0, 2.0), 1024).monodromy() == base);
  const MatrixFamily h1 = example_family(Example::H1);
  for (int i = 0; i < 10; ++i) {
    const Curve c = holonomy::testing::wobbly_circle(0.0, 1.0, rng);
    CHECK(track(h1, c, 128).monodromy().cycle_notation() == "(1 2)");
  }
}

TEST_CASE("reversal inverts and concatenation composes") {
  const MatrixFamily fam = cubic_family();
  // circles through the base point 0 around each branch point
  const Curve right = circle(2.0, 2.0).rebased(0.5);
  const Curve left = circle(-2.0, 2.0);
  const Permutation a = track(fam, right, 256).monodromy();
  const Permutation b = track(fam, left, 256).monodromy();
  CHECK_FALSE(a.is_identity());
  CHECK_FALSE(b.is_identity());
  CHECK(track(fam, right.reversed(), 256).monodromy() == a.inverse());
  CHECK(track(fam, right.then(left), 512).monodromy() == a.then(b));
  CHECK(track(fam, left.then(right), 512).monodromy() == b.then(a));
  CHECK(monodromy_group(fam, {right, left}, 256).order() == 6);
}

TEST_CASE("lifted loops return every branch to its start") {
  for (auto [ex, r] : {std::pair{Example::H1, 1.0}, std::pair{Example::H2Block, 2.0}, std::pair{Example::SymA, 1.0}}) {
    const MatrixFamily fam = example_family(ex);
    const Curve loop = circle(ex == Example::SymA ? 0.0 : 0.0, r);
    const Monodromy m = monodromy_of(track(fam, loop, 128));
    for (int label = 0; label < fam.matrix_dim(); ++label) {
      const Curve lifted = lift_closed(loop, label, m);
      CHECK(lifted.traversals() == m.periods[static_cast<std::size_t>(label)]);
      const SpectralPath path = track(fam, lifted, 256);
      double emax = 0.0;
      for (int k = 0; k < path.size(); ++k) emax = std::max(emax, std::abs(path.energy(k, label)));
      CHECK(std::abs(path.energy(path.size() - 1, label) - path.energy(0, label)) < 1e-8 * emax);
      CHECK(path.branch_index(path.size() - 1, label) == label);
    }
  }
}

TEST_CASE("lift of a three-cycle triples the curve") {
  const Monodromy m = monodromy_of(Permutation({1, 2, 0}));
  const Curve c = lift_closed(circle(0.0, 1.0), 1, m);
  CHECK(c.traversals() == 3);
  CHECK(lift_closed(circle(0.0, 1.0), 0, monodromy_of(Permutation::identity(2))).traversals() == 1);
}

TEST_CASE("assignment matches brute force") {
  std::mt19937 rng(31);
  std::normal_distribution<double> g;
  for (int n = 1; n <= 7; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      ComplexVector a(n), b(n);
      for (int i = 0; i < n; ++i) {
        a(i) = cplx(g(rng), g(rng));
        b(i) = cplx(g(rng), g(rng));
      }
      const Assignment m = match_eigenvalues(a, b);
      CHECK(m.best_cost == doctest::Approx(brute_force_cost(a, b)).epsilon(1e-12));
      CHECK(m.second_cost >= m.best_cost);
    }
  }
}

TEST_CASE("curve through an exceptional point is refused") {
  try {
    track(example_family(Example::H1), circle(1.0, 1.0), 64);
    FAIL("expected NearEP");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NearEP);
    REQUIRE(e.curve_parameter().has_value());
    CHECK(*e.curve_parameter() == doctest::Approx(0.5));
  }
}

TEST_CASE("path diagnostics") {
  const SpectralPath path = track(example_family(Example::H1), circle(0.0, 1.0), 64);
  CHECK(path.min_gap() == doctest::Approx(2.0));
  CHECK(path.refinement_depth() == 0);
  CHECK(path.closed());
  CHECK_THROWS_AS(monodromy_of(track(example_family(Example::H1),
                                     Curve([](double t) { return complex_point(1.0 + t); }, false), 16)),
                  Error);
}
