#pragma once

#include <vector>

#include <holonomy/family.hpp>

namespace holonomy::cli {

inline constexpr int kMaxDegree = 16;

/// One monomial c * prod_i x_i^powers[i] in the real parameters.
struct Monomial {
  cplx coeff{};
  std::vector<int> powers;
};

/// Matrix entries as polynomials. In complex mode each entry is a list of
/// coefficients of z^k with z = x_0 + i x_1; in real mode a list of
/// monomials in param_dim real coordinates.
struct PolynomialSpec {
  int dim = 0;
  bool complex_variable = true;
  int param_dim = 2;
  std::vector<std::vector<cplx>> complex_entries;  // row-major, dim * dim
  std::vector<std::vector<Monomial>> real_entries;  // row-major, dim * dim
};

/// Throws std::invalid_argument on a malformed spec or a degree above 16.
MatrixFamily polynomial_family(const PolynomialSpec& spec);

}  // namespace holonomy::cli
