#include "holonomy/family.hpp"

#include "holonomy/error.hpp"

namespace holonomy {

MatrixFamily::MatrixFamily(std::string name, int matrix_dim, int param_dim, Fn fn, DegeneracyLocus locus,
                           bool hermitian)
    : name_(std::move(name)),
      matrix_dim_(matrix_dim),
      param_dim_(param_dim),
      fn_(std::move(fn)),
      locus_(std::move(locus)),
      hermitian_(hermitian) {
  if (matrix_dim_ < 1 || param_dim_ < 1 || !fn_) {
    throw Error(ErrorKind::InvalidParams, "family '" + name_ + "' is malformed");
  }
}

ComplexMatrix MatrixFamily::operator()(const Point& p) const {
  if (p.size() != param_dim_) {
    throw Error(ErrorKind::InvalidParams, "family '" + name_ + "' expects " + std::to_string(param_dim_) +
                                              " coordinates, got " + std::to_string(p.size()));
  }
  ComplexMatrix h = fn_(p);
  if (h.rows() != matrix_dim_ || h.cols() != matrix_dim_) {
    throw Error(ErrorKind::InvalidParams, "family '" + name_ + "' produced a matrix of the wrong size");
  }
  return h;
}

double MatrixFamily::distance_to_degeneracy(const Point& p) const {
  if (locus_.distance) return locus_.distance(p);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : locus_.points) {
    if (q.size() == p.size()) best = std::min(best, (q - p).norm());
  }
  return best;
}

}  // namespace holonomy
