#pragma once

#include <utility>

#include "holonomy/types.hpp"

namespace holonomy {

/// Eigenvalues plus a biorthonormal pair of right/left eigenvector sets at
/// one parameter point. Column j of `right` is psi_j, column j of `left` is
/// phi_j, with H psi_j = E_j psi_j, H^dagger phi_j = conj(E_j) phi_j and
/// <phi_j|psi_k> = delta_jk.
///
/// Gauge: psi_j has unit norm and its largest-magnitude component is real
/// positive; phi_j carries the biorthonormalization factor.
///
/// Labels are ordered by the index of psi_j's dominant component, ties broken
/// by (Re E, Im E). At a diagonal matrix this is the diagonal order.
struct Eigenframe {
  ComplexVector eigenvalues;
  ComplexMatrix right;
  ComplexMatrix left;
  double residual = 0.0;
  double gap = 0.0;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  cplx energy(int j) const { return eigenvalues(j); }
  auto psi(int j) const { return right.col(j); }
  auto phi(int j) const { return left.col(j); }
};

enum class DegeneracyKind { Nondegenerate, Diabolic, Exceptional };

struct DegeneracyClass {
  DegeneracyKind kind = DegeneracyKind::Nondegenerate;
  double gap = 0.0;
  double eigenvector_defect = 0.0;
};

struct LinalgTolerances {
  double degeneracy_rel = 1e-8;     // eigenvalues closer than this times ||H|| coincide
  double self_orthogonal = 1e-12;   // |<phi|psi>| / (|phi||psi|) floor
  double defect = 1e-6;
};

/// Frobenius norm, used as the scale for every relative tolerance here.
double matrix_scale(const ComplexMatrix& h);

/// Closed-form eigensystem of a 2x2 matrix via its traceless part
/// a = (h00 - h11)/2, b = h01, c = h10, f = sqrt(a^2 + bc); E = tr/2 +- f.
Eigenframe eig_2x2(const ComplexMatrix& h, const LinalgTolerances& tol = {});

Eigenframe eig_general(const ComplexMatrix& h, const LinalgTolerances& tol = {});

/// Rescales right vectors to unit norm and left vectors so <phi_j|psi_j> = 1.
/// Columns are paired by index.
std::pair<ComplexMatrix, ComplexMatrix> biorthonormalize(const ComplexMatrix& right,
                                                         const ComplexMatrix& left,
                                                         double self_orthogonal_tol = 1e-12);

DegeneracyClass classify_degeneracy(const ComplexMatrix& h, double tol, double defect_tol = 1e-6);

/// classify_degeneracy with tol = 1e-8 * ||H||.
DegeneracyClass classify_degeneracy(const ComplexMatrix& h);

/// Smallest pairwise eigenvalue distance (infinity for a 1x1 spectrum).
double spectral_gap(const ComplexVector& eigenvalues);

}  // namespace holonomy
