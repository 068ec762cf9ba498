#include "polynomial.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace holonomy::cli {

namespace {

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

cplx monomials(const std::vector<Monomial>& terms, const Point& x) {
  cplx v = 0.0;
  for (const auto& t : terms) {
    double m = 1.0;
    for (std::size_t i = 0; i < t.powers.size(); ++i) {
      if (t.powers[i] > 0) m *= std::pow(x(static_cast<Eigen::Index>(i)), t.powers[i]);
    }
    v += t.coeff * m;
  }
  return v;
}

}  // namespace

MatrixFamily polynomial_family(const PolynomialSpec& spec) {
  const int n = spec.dim;
  if (n < 1) throw std::invalid_argument("polynomial family needs dim >= 1");
  const std::size_t entries = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (spec.complex_variable) {
    if (spec.complex_entries.size() != entries) {
      throw std::invalid_argument("expected " + std::to_string(n) + "x" + std::to_string(n) + " polynomial entries");
    }
    for (const auto& e : spec.complex_entries) {
      if (static_cast<int>(e.size()) > kMaxDegree + 1) {
        throw std::invalid_argument("polynomial degree exceeds " + std::to_string(kMaxDegree));
      }
    }
    return MatrixFamily("polynomial", n, 2, [spec, n](const Point& p) {
      const cplx z(p(0), p(1));
      ComplexMatrix m(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = horner(spec.complex_entries[static_cast<std::size_t>(i * n + j)], z);
      }
      return m;
    });
  }

  if (spec.param_dim < 1) throw std::invalid_argument("real polynomial family needs params >= 1");
  if (spec.real_entries.size() != entries) {
    throw std::invalid_argument("expected " + std::to_string(n) + "x" + std::to_string(n) + " polynomial entries");
  }
  for (const auto& e : spec.real_entries) {
    for (const auto& t : e) {
      if (static_cast<int>(t.powers.size()) != spec.param_dim) {
        throw std::invalid_argument("monomial powers must list one exponent per parameter");
      }
      for (int p : t.powers) {
        if (p < 0) throw std::invalid_argument("negative exponent in monomial");
      }
      if (std::accumulate(t.powers.begin(), t.powers.end(), 0) > kMaxDegree) {
        throw std::invalid_argument("polynomial degree exceeds " + std::to_string(kMaxDegree));
      }
    }
  }
  return MatrixFamily("polynomial", n, spec.param_dim, [spec, n](const Point& p) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = monomials(spec.real_entries[static_cast<std::size_t>(i * n + j)], p);
    }
    return m;
  });
}

}  // namespace holonomy::cli
