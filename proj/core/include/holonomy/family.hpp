#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "holonomy/types.hpp"

namespace holonomy {

/// Known degeneracy locus of a family, when there is one to report.
struct DegeneracyLocus {
  std::string description;
  std::vector<Point> points;
  /// Distance from a parameter point to the locus; overrides `points` when set.
  std::function<double(const Point&)> distance;
};

/// A map from parameter points to N x N complex matrices, H[R].
class MatrixFamily {
 public:
  using Fn = std::function<ComplexMatrix(const Point&)>;

  MatrixFamily(std::string name, int matrix_dim, int param_dim, Fn fn, DegeneracyLocus locus = {},
               bool hermitian = false);

  ComplexMatrix operator()(const Point& p) const;

  const std::string& name() const { return name_; }
  int matrix_dim() const { return matrix_dim_; }
  int param_dim() const { return param_dim_; }
  bool hermitian() const { return hermitian_; }
  const DegeneracyLocus& locus() const { return locus_; }

  /// Distance to the known degeneracy locus; infinity when none is recorded.
  double distance_to_degeneracy(const Point& p) const;

 private:
  std::string name_;
  int matrix_dim_;
  int param_dim_;
  Fn fn_;
  DegeneracyLocus locus_;
  bool hermitian_;
};

}  // namespace holonomy
