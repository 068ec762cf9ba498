#pragma once

#include <functional>
#include <vector>

#include "holonomy/types.hpp"

namespace holonomy {

enum class Orientation { Positive, Negative };

/// A parameterized curve t in [0,1] -> parameter space. Closed curves return
/// the exact start point at t = 1 (and at any integer multiple of a repeat).
class Curve {
 public:
  using Map = std::function<Point(double)>;

  /// Throws InvalidCurve if `closed` but map(0) and map(1) differ beyond
  /// roundoff, or if base_period <= 0.
  Curve(Map map, bool closed, double base_period = 1.0, Orientation orientation = Orientation::Positive);

  Point at(double t) const;
  Point start() const { return start_; }

  int dim() const { return static_cast<int>(start_.size()); }
  bool closed() const { return closed_; }
  Orientation orientation() const { return orientation_; }
  /// Physical duration of one pass over t in [0,1].
  double base_period() const { return base_period_; }
  /// How many times the underlying base loop is traversed.
  int traversals() const { return traversals_; }

  Curve reversed() const;
  Curve repeated(int k) const;
  Curve rebased(double t0) const;
  /// This curve followed by `next`; both closed and sharing a base point.
  Curve then(const Curve& next) const;
  Curve with_period(double period) const;

  /// center + radius (cos 2pi t e1 + sin 2pi t e2)
  static Curve planar_circle(const Point& center, const Point& e1, const Point& e2, double radius);
  /// Circle in the (axis0, axis1) coordinate plane.
  static Curve circle(const Point& center, double radius, int axis0 = 0, int axis1 = 1);
  static Curve ellipse(const Point& center, double semi_a, double semi_b, double rotation, int axis0 = 0,
                       int axis1 = 1);
  /// Piecewise-linear through `vertices`, arc-length parameterized. A closed
  /// polyline returns to vertices.front().
  static Curve polyline(std::vector<Point> vertices, bool closed);
  /// z(t) = sum_k coeffs[k] exp(2 pi i k t) written into coordinates (0, 1) of
  /// `base` (which fixes the dimension and any remaining coordinates).
  static Curve trigonometric(std::vector<cplx> coeffs, Point base = Point::Zero(2));

 private:
  Point raw(double u) const;

  Map map_;
  bool closed_;
  double base_period_;
  Orientation orientation_;
  int traversals_ = 1;
  Point start_;
};

struct CurveSample {
  double t;
  Point point;
};

/// n + 1 uniform samples t_k = k/n. Throws InvalidSampling if n < 8.
std::vector<CurveSample> discretize(const Curve& curve, int n_samples);

/// Embeds a complex number as a 2-coordinate parameter point.
inline Point complex_point(cplx z) {
  Point p(2);
  p << z.real(), z.imag();
  return p;
}

inline cplx as_complex(const Point& p, int offset = 0) { return {p(offset), p(offset + 1)}; }

}  // namespace holonomy
