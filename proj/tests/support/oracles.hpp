#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include <holonomy/types.hpp>

namespace holonomy::testing {

/// Monic characteristic polynomial coefficients c_0..c_N of det(lambda I - H)
/// (c_N = 1) by Faddeev-LeVerrier.
inline std::vector<cplx> characteristic_polynomial(const ComplexMatrix& h) {
  const int n = static_cast<int>(h.rows());
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(n)] = 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = h * m + c[static_cast<std::size_t>(n - k + 1)] * ComplexMatrix::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(h * m).trace() / static_cast<double>(k);
  }
  return c;
}

/// Roots of a monic polynomial by Durand-Kerner iteration.
inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  auto eval = [&](cplx x) {
    cplx v = 0.0;
    for (int k = n; k >= 0; --k) v = v * x + c[static_cast<std::size_t>(k)];
    return v;
  };
  double bound = 1.0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, 1.0 + std::abs(c[static_cast<std::size_t>(k)]));
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = 0.5 * bound * std::pow(cplx(0.4, 0.9), k);
  for (int iter = 0; iter < 2000; ++iter) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx denom = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      }
      const cplx step = eval(z[static_cast<std::size_t>(i)]) / denom;
      z[static_cast<std::size_t>(i)] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-15 * bound) break;
  }
  return z;
}

/// exp(A) by scaling and squaring with a 20-term Taylor series.
inline ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  const ComplexMatrix s = a / std::pow(2.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k <= 20; ++k) {
    term = term * s / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Greedy set distance between two spectra of equal size.
inline double spectrum_distance(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0.0;
  for (cplx x : a) {
    auto best = b.begin();
    for (auto it = b.begin(); it != b.end(); ++it) {
      if (std::abs(*it - x) < std::abs(*best - x)) best = it;
    }
    worst = std::max(worst, std::abs(*best - x));
    b.erase(best);
  }
  return worst;
}

inline std::vector<cplx> to_vector(const ComplexVector& v) { return {v.data(), v.data() + v.size()}; }

inline ComplexMatrix random_matrix(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  }
  return m;
}

inline ComplexMatrix random_unitary(int n, std::mt19937& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

}  // namespace holonomy::testing
