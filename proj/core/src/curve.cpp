#include "holonomy/curve.hpp"

#include <algorithm>
#include <cmath>

#include "holonomy/error.hpp"

namespace holonomy {

namespace {

double frac(double x) { return x - std::floor(x); }

void require_same_base(const Point& a, const Point& b) {
  if (a.size() != b.size() || (a - b).norm() > 1e-9 * (1.0 + a.norm())) {
    throw Error(ErrorKind::InvalidCurve, "closed curves must share a base point");
  }
}

}  // namespace

Curve::Curve(Map map, bool closed, double base_period, Orientation orientation)
    : map_(std::move(map)), closed_(closed), base_period_(base_period), orientation_(orientation) {
  if (!(base_period_ > 0.0)) throw Error(ErrorKind::InvalidCurve, "base period must be positive");
  start_ = map_(0.0);
  if (start_.size() < 1) throw Error(ErrorKind::InvalidCurve, "curve has no coordinates");
  if (closed_) {
    const Point end = map_(1.0);
    if (end.size() != start_.size() || (end - start_).norm() > 1e-9 * (1.0 + start_.norm())) {
      throw Error(ErrorKind::InvalidCurve, "closed curve does not return to its start point");
    }
  }
  if (orientation_ == Orientation::Negative) start_ = raw(1.0);
}

Point Curve::raw(double u) const {
  if (closed_ && (u <= 0.0 || u >= 1.0)) return map_(0.0);
  return map_(u);
}

Point Curve::at(double t) const {
  if (closed_ && (t <= 0.0 || t >= 1.0)) return start_;
  return raw(orientation_ == Orientation::Positive ? t : 1.0 - t);
}

Curve Curve::reversed() const {
  Curve out = *this;
  out.orientation_ = orientation_ == Orientation::Positive ? Orientation::Negative : Orientation::Positive;
  out.start_ = closed_ ? start_ : out.at(0.0);
  return out;
}

Curve Curve::repeated(int k) const {
  if (!closed_) throw Error(ErrorKind::OpenCurve, "only closed curves can be repeated");
  if (k < 1) throw Error(ErrorKind::InvalidParams, "repeat count must be >= 1");
  if (k == 1) return *this;
  Curve base = *this;
  Curve out([base, k](double u) { return base.at(frac(k * u)); }, true, base_period_ * k);
  out.traversals_ = traversals_ * k;
  return out;
}

Curve Curve::rebased(double t0) const {
  if (!closed_) throw Error(ErrorKind::OpenCurve, "only closed curves can be rebased");
  Curve base = *this;
  const double shift = frac(t0);
  Curve out([base, shift](double u) { return base.at(frac(u + shift)); }, true, base_period_);
  out.traversals_ = traversals_;
  return out;
}

Curve Curve::then(const Curve& next) const {
  if (!closed_ || !next.closed_) throw Error(ErrorKind::OpenCurve, "concatenation needs closed curves");
  require_same_base(start_, next.start_);
  Curve first = *this;
  Curve second = next;
  return Curve(
      [first, second](double u) { return u < 0.5 ? first.at(2.0 * u) : second.at(2.0 * u - 1.0); }, true,
      base_period_ + next.base_period_);
}

Curve Curve::with_period(double period) const {
  if (!(period > 0.0)) throw Error(ErrorKind::InvalidCurve, "base period must be positive");
  Curve out = *this;
  out.base_period_ = period;
  return out;
}

Curve Curve::planar_circle(const Point& center, const Point& e1, const Point& e2, double radius) {
  if (center.size() != e1.size() || center.size() != e2.size()) {
    throw Error(ErrorKind::InvalidCurve, "circle axes must match the center's dimension");
  }
  if (!(radius >= 0.0)) throw Error(ErrorKind::InvalidCurve, "radius must be nonnegative");
  return Curve(
      [center, e1, e2, radius](double t) -> Point {
        const double th = kTwoPi * t;
        return center + radius * (std::cos(th) * e1 + std::sin(th) * e2);
      },
      true);
}

Curve Curve::circle(const Point& center, double radius, int axis0, int axis1) {
  return ellipse(center, radius, radius, 0.0, axis0, axis1);
}

Curve Curve::ellipse(const Point& center, double semi_a, double semi_b, double rotation, int axis0,
                     int axis1) {
  const auto d = center.size();
  if (axis0 < 0 || axis1 < 0 || axis0 >= d || axis1 >= d || axis0 == axis1) {
    throw Error(ErrorKind::InvalidCurve, "ellipse axes out of range");
  }
  Point e1 = Point::Zero(d);
  Point e2 = Point::Zero(d);
  e1(axis0) = std::cos(rotation);
  e1(axis1) = std::sin(rotation);
  e2(axis0) = -std::sin(rotation);
  e2(axis1) = std::cos(rotation);
  return Curve(
      [center, e1, e2, semi_a, semi_b](double t) -> Point {
        const double th = kTwoPi * t;
        return center + semi_a * std::cos(th) * e1 + semi_b * std::sin(th) * e2;
      },
      true);
}

Curve Curve::polyline(std::vector<Point> vertices, bool closed) {
  if (vertices.size() < 2) throw Error(ErrorKind::InvalidCurve, "polyline needs at least two vertices");
  if (closed) vertices.push_back(vertices.front());
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i].size() != vertices[0].size()) {
      throw Error(ErrorKind::InvalidCurve, "polyline vertices differ in dimension");
    }
    cumulative.push_back(cumulative.back() + (vertices[i] - vertices[i - 1]).norm());
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidCurve, "polyline has zero length");
  return Curve(
      [vertices, cumulative, total](double t) -> Point {
        const double s = std::clamp(t, 0.0, 1.0) * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
        std::size_t i = static_cast<std::size_t>(std::distance(cumulative.begin(), it));
        if (i >= cumulative.size()) return vertices.back();
        if (i == 0) i = 1;
        const double len = cumulative[i] - cumulative[i - 1];
        const double w = len > 0.0 ? (s - cumulative[i - 1]) / len : 0.0;
        return (1.0 - w) * vertices[i - 1] + w * vertices[i];
      },
      closed);
}

Curve Curve::trigonometric(std::vector<cplx> coeffs, Point base) {
  if (coeffs.empty()) throw Error(ErrorKind::InvalidCurve, "trigonometric curve needs coefficients");
  if (base.size() < 2) throw Error(ErrorKind::InvalidCurve, "trigonometric curve needs >= 2 coordinates");
  return Curve(
      [coeffs, base](double t) -> Point {
        cplx z = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
          z += coeffs[k] * std::polar(1.0, kTwoPi * static_cast<double>(k) * t);
        }
        Point p = base;
        p(0) = z.real();
        p(1) = z.imag();
        return p;
      },
      true);
}

std::vector<CurveSample> discretize(const Curve& curve, int n_samples) {
  if (n_samples < 8) {
    throw Error(ErrorKind::InvalidSampling, "need at least 8 samples, got " + std::to_string(n_samples));
  }
  std::vector<CurveSample> out;
  out.reserve(static_cast<std::size_t>(n_samples) + 1);
  for (int k = 0; k <= n_samples; ++k) {
    const double t = k == n_samples ? 1.0 : static_cast<double>(k) / n_samples;
    out.push_back({t, curve.at(t)});
  }
  return out;
}

}  // namespace holonomy
