#include "holonomy/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "holonomy/error.hpp"

namespace holonomy {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// First component whose magnitude is within a relative 1e-9 of the maximum.
// The slack makes the choice stable against roundoff when two components tie.
Eigen::Index dominant_component(const ComplexVector& v) {
  const double top = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= top * (1.0 - 1e-9)) return i;
  }
  return 0;
}

void require_square(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() < 1) {
    throw Error(ErrorKind::InvalidParams, "matrix must be square with dim >= 1");
  }
}

// Puts (eigenvalues, right, left) in canonical label order, fixes the right
// gauge, biorthonormalizes, and fills residual and gap.
Eigenframe finish_frame(const ComplexMatrix& h, const ComplexVector& values, ComplexMatrix right,
                        ComplexMatrix left, const LinalgTolerances& tol) {
  const Eigen::Index n = values.size();
  for (Eigen::Index j = 0; j < n; ++j) right.col(j).normalize();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<Eigen::Index> dom(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) dom[static_cast<std::size_t>(j)] = dominant_component(right.col(j));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    const auto dx = dom[static_cast<std::size_t>(x)];
    const auto dy = dom[static_cast<std::size_t>(y)];
    if (dx != dy) return dx < dy;
    if (values(x).real() != values(y).real()) return values(x).real() < values(y).real();
    return values(x).imag() < values(y).imag();
  });

  Eigenframe frame;
  frame.eigenvalues.resize(n);
  ComplexMatrix r(n, n);
  ComplexMatrix l(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    frame.eigenvalues(j) = values(src);
    ComplexVector v = right.col(src);
    const cplx lead = v(dominant_component(v));
    v *= std::conj(lead) / std::abs(lead);
    r.col(j) = v;
    l.col(j) = left.col(src);
  }
  std::tie(frame.right, frame.left) = biorthonormalize(r, l, tol.self_orthogonal);

  const ComplexMatrix hd = h.adjoint();
  double residual = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx e = frame.eigenvalues(j);
    residual = std::max(residual, (h * frame.right.col(j) - e * frame.right.col(j)).norm());
    residual = std::max(residual, (hd * frame.left.col(j) - std::conj(e) * frame.left.col(j)).norm());
  }
  frame.residual = residual;
  frame.gap = spectral_gap(frame.eigenvalues);
  return frame;
}

Eigenframe scalar_frame(const ComplexMatrix& h) {
  Eigenframe frame;
  frame.eigenvalues = ComplexVector::Constant(1, h(0, 0));
  frame.right = ComplexMatrix::Identity(1, 1);
  frame.left = ComplexMatrix::Identity(1, 1);
  frame.gap = std::numeric_limits<double>::infinity();
  return frame;
}

}  // namespace

double matrix_scale(const ComplexMatrix& h) { return h.norm(); }

double spectral_gap(const ComplexVector& eigenvalues) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
    for (Eigen::Index k = j + 1; k < eigenvalues.size(); ++k) {
      gap = std::min(gap, std::abs(eigenvalues(j) - eigenvalues(k)));
    }
  }
  return gap;
}

std::pair<ComplexMatrix, ComplexMatrix> biorthonormalize(const ComplexMatrix& right,
                                                         const ComplexMatrix& left,
                                                         double self_orthogonal_tol) {
  if (right.rows() != left.rows() || right.cols() != left.cols()) {
    throw Error(ErrorKind::InvalidParams, "right and left vector sets differ in shape");
  }
  ComplexMatrix r = right;
  ComplexMatrix l = left;
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    const double rn = r.col(j).norm();
    const double ln = l.col(j).norm();
    if (rn == 0.0 || ln == 0.0) {
      throw Error(ErrorKind::SelfOrthogonal, "zero eigenvector");
    }
    r.col(j) /= rn;
    const cplx pairing = l.col(j).dot(r.col(j));  // <phi|psi>, conjugate-linear in phi
    if (std::abs(pairing) < self_orthogonal_tol * ln) {
      throw Error(ErrorKind::SelfOrthogonal,
                  "left/right pair is self-orthogonal (|<phi|psi>| = " +
                      std::to_string(std::abs(pairing) / ln) + ")");
    }
    l.col(j) /= std::conj(pairing);
  }
  return {r, l};
}

Eigenframe eig_2x2(const ComplexMatrix& h, const LinalgTolerances& tol) {
  require_square(h);
  if (h.rows() != 2) throw Error(ErrorKind::InvalidParams, "eig_2x2 needs a 2x2 matrix");
  const double scale = matrix_scale(h);
  const cplx shift = 0.5 * (h(0, 0) + h(1, 1));
  const cplx a = 0.5 * (h(0, 0) - h(1, 1));
  const cplx b = h(0, 1);
  const cplx c = h(1, 0);
  const cplx f = std::sqrt(a * a + b * c);
  if (2.0 * std::abs(f) <= tol.degeneracy_rel * scale) {
    throw Error(ErrorKind::DegenerateInput, "2x2 discriminant vanishes (EP or diabolic point)");
  }

  ComplexMatrix right(2, 2);
  ComplexMatrix left(2, 2);
  const cplx fc = std::conj(f);
  const cplx ac = std::conj(a);
  if (std::abs(f + a) >= std::abs(a - f)) {
    right << f + a, -b, c, f + a;
    left << fc + ac, -std::conj(c), std::conj(b), fc + ac;
  } else {
    right << -b, a - f, a - f, c;
    left << -std::conj(c), ac - fc, ac - fc, std::conj(b);
  }
  ComplexVector values(2);
  values << shift + f, shift - f;
  return finish_frame(h, values, right, left, tol);
}

Eigenframe eig_general(const ComplexMatrix& h, const LinalgTolerances& tol) {
  require_square(h);
  if (h.rows() == 1) return scalar_frame(h);
  const double scale = matrix_scale(h);

  Eigen::ComplexEigenSolver<ComplexMatrix> right_solver(h, true);
  if (right_solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "eigensolver failed on H");
  }
  const ComplexVector values = right_solver.eigenvalues();
  if (spectral_gap(values) <= tol.degeneracy_rel * scale) {
    throw Error(ErrorKind::DegenerateInput, "eigenvalues coincide within tolerance");
  }

  Eigen::ComplexEigenSolver<ComplexMatrix> left_solver(h.adjoint(), true);
  if (left_solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "eigensolver failed on H^dagger");
  }
  const ComplexVector conj_values = left_solver.eigenvalues();
  const Eigen::Index n = values.size();
  ComplexMatrix left(n, n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k) {
      const double d = std::abs(conj_values(k) - std::conj(values(j)));
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    if (used[static_cast<std::size_t>(best)]) {
      throw Error(ErrorKind::NoConvergence, "could not pair left and right eigenvectors");
    }
    used[static_cast<std::size_t>(best)] = true;
    left.col(j) = left_solver.eigenvectors().col(best);
  }
  return finish_frame(h, values, right_solver.eigenvectors(), left, tol);
}

DegeneracyClass classify_degeneracy(const ComplexMatrix& h) {
  return classify_degeneracy(h, 1e-8 * matrix_scale(h));
}

DegeneracyClass classify_degeneracy(const ComplexMatrix& h, double tol, double defect_tol) {
  require_square(h);
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParams, "classification tolerance must be > 0");
  DegeneracyClass out;
  const Eigen::Index n = h.rows();
  if (n == 1) {
    out.gap = std::numeric_limits<double>::infinity();
    return out;
  }
  const double scale = matrix_scale(h);

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(h, true);
  const ComplexVector values = solver.eigenvalues();
  ComplexMatrix vectors = solver.eigenvectors();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double nrm = vectors.col(j).norm();
    if (nrm > 0.0) vectors.col(j) /= nrm;
  }
  out.gap = spectral_gap(values);

  // Eigenvalue condition numbers. A rounding-split Jordan block shows up as a
  // pair whose separation is within its own conditioning noise.
  std::vector<double> kappa(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  Eigen::FullPivLU<ComplexMatrix> lu(vectors);
  if (lu.isInvertible()) {
    const ComplexMatrix inv = lu.inverse();
    for (Eigen::Index j = 0; j < n; ++j) kappa[static_cast<std::size_t>(j)] = inv.row(j).norm();
  }

  std::vector<Eigen::Index> root(static_cast<std::size_t>(n));
  std::iota(root.begin(), root.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (root[static_cast<std::size_t>(x)] != x) x = root[static_cast<std::size_t>(x)];
    return x;
  };
  bool degenerate = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double d = std::abs(values(j) - values(k));
      const double noise =
          64.0 * kEps * scale * (kappa[static_cast<std::size_t>(j)] + kappa[static_cast<std::size_t>(k)]);
      if (d <= tol || d <= noise) {
        degenerate = true;
        root[static_cast<std::size_t>(find(k))] = find(j);
      }
    }
  }

  if (!degenerate) {
    Eigen::JacobiSVD<ComplexMatrix> svd(vectors);
    out.eigenvector_defect = 1.0 - svd.singularValues().minCoeff();
    out.kind = DegeneracyKind::Nondegenerate;
    return out;
  }

  // Per cluster: geometric multiplicity from the numerical null space of
  // (H - mean * I). A deficient cluster contributes parallel eigenvector
  // columns, so its normalized eigenvector matrix is singular.
  double defect = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    if (find(r) != r) continue;
    std::vector<Eigen::Index> members;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (find(j) == r) members.push_back(j);
    }
    if (members.size() < 2) continue;
    cplx mean = 0.0;
    double spread = 0.0;
    for (auto j : members) mean += values(j);
    mean /= static_cast<double>(members.size());
    for (auto j : members) spread = std::max(spread, std::abs(values(j) - mean));

    const ComplexMatrix shifted = h - mean * ComplexMatrix::Identity(n, n);
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
    const double rank_tol = std::max(tol, 10.0 * spread) + 1e3 * kEps * scale;
    const auto& sv = svd.singularValues();
    std::size_t geometric = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) <= rank_tol) ++geometric;
    }
    geometric = std::min(geometric, members.size());
    if (geometric < members.size()) {
      defect = 1.0;
    } else {
      const ComplexMatrix basis = svd.matrixV().rightCols(static_cast<Eigen::Index>(geometric));
      Eigen::JacobiSVD<ComplexMatrix> check(basis);
      defect = std::max(defect, 1.0 - check.singularValues().minCoeff());
    }
  }
  out.eigenvector_defect = defect;
  out.kind = defect > defect_tol ? DegeneracyKind::Exceptional : DegeneracyKind::Diabolic;
  return out;
}

}  // namespace holonomy
