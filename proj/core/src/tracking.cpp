#include "holonomy/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "holonomy/error.hpp"
#include "holonomy/parallel.hpp"

namespace holonomy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using CostMatrix = Eigen::MatrixXd;

double assignment_cost(const CostMatrix& c, const std::vector<int>& image) {
  double s = 0.0;
  for (std::size_t i = 0; i < image.size(); ++i) s += c(static_cast<Eigen::Index>(i), image[i]);
  return s;
}

Assignment exhaustive(const CostMatrix& c) {
  const int n = static_cast<int>(c.rows());
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  std::vector<int> best_image = image;
  double best = kInf;
  double second = kInf;
  do {
    const double cost = assignment_cost(c, image);
    if (cost < best) {
      second = best;
      best = cost;
      best_image = image;
    } else if (cost < second) {
      second = cost;
    }
  } while (std::next_permutation(image.begin(), image.end()));
  return {Permutation(best_image), best, second};
}

// O(n^3) shortest augmenting path Hungarian method on a square cost matrix.
std::vector<int> hungarian(const CostMatrix& c) {
  const int n = static_cast<int>(c.rows());
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = c(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> image(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) image[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return image;
}

Assignment hungarian_with_second(const CostMatrix& c) {
  const std::vector<int> best = hungarian(c);
  const double best_cost = assignment_cost(c, best);
  // Any other assignment avoids at least one edge of the best one.
  const double forbidden = (c.sum() + 1.0) * 1e3;
  double second = kInf;
  for (std::size_t i = 0; i < best.size(); ++i) {
    CostMatrix d = c;
    d(static_cast<Eigen::Index>(i), best[i]) = forbidden;
    const double cost = assignment_cost(d, hungarian(d));
    if (cost < forbidden) second = std::min(second, cost);
  }
  return {Permutation(best), best_cost, second};
}

bool ambiguous_step(const Eigenframe& a, const Eigenframe& b, const Assignment& m, double ratio) {
  if (m.second_cost < ratio * m.best_cost) return true;
  for (int j = 0; j < a.dim(); ++j) {
    if (std::abs(a.energy(j) - b.energy(m.best(j))) >= 0.5 * a.gap) return true;
  }
  return false;
}

}  // namespace

SpectralPath::SpectralPath(std::vector<PathSample> samples, std::vector<Permutation> step_matchings,
                           bool closed, double base_period, int traversals, int refinement_depth)
    : samples_(std::move(samples)),
      steps_(std::move(step_matchings)),
      closed_(closed),
      base_period_(base_period),
      traversals_(traversals),
      refinement_depth_(refinement_depth) {
  if (samples_.empty() || steps_.size() + 1 != samples_.size()) {
    throw Error(ErrorKind::InvalidParams, "a path needs one matching per step");
  }
  const int n = samples_.front().frame.dim();
  cumulative_.reserve(samples_.size());
  cumulative_.push_back(Permutation::identity(n));
  for (const auto& s : steps_) cumulative_.push_back(cumulative_.back().then(s));
  monodromy_ = closed_ ? cumulative_.back() : Permutation::identity(n);

  min_gap_ = kInf;
  min_gap_rel_ = kInf;
  for (const auto& s : samples_) {
    min_gap_ = std::min(min_gap_, s.frame.gap);
    const double scale = s.frame.eigenvalues.norm();
    if (scale > 0.0) min_gap_rel_ = std::min(min_gap_rel_, s.frame.gap / scale);
  }
}

cplx SpectralPath::energy(int k, int label) const {
  return samples_[static_cast<std::size_t>(k)].frame.energy(branch_index(k, label));
}

ComplexVector SpectralPath::psi(int k, int label) const {
  return samples_[static_cast<std::size_t>(k)].frame.psi(branch_index(k, label));
}

ComplexVector SpectralPath::phi(int k, int label) const {
  return samples_[static_cast<std::size_t>(k)].frame.phi(branch_index(k, label));
}

SpectralPath SpectralPath::with_frames(std::vector<Eigenframe> frames) const {
  if (frames.size() != samples_.size()) throw Error(ErrorKind::InvalidParams, "one frame per sample required");
  SpectralPath out = *this;
  for (std::size_t k = 0; k < frames.size(); ++k) out.samples_[k].frame = std::move(frames[k]);
  return out;
}

Assignment match_eigenvalues(const ComplexVector& from, const ComplexVector& to) {
  if (from.size() != to.size() || from.size() == 0) {
    throw Error(ErrorKind::InvalidParams, "spectra to match differ in size");
  }
  const auto n = from.size();
  CostMatrix c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = std::abs(from(i) - to(j));
  }
  if (n == 1) return {Permutation::identity(1), c(0, 0), kInf};
  return n <= 5 ? exhaustive(c) : hungarian_with_second(c);
}

Eigenframe frame_at(const MatrixFamily& family, const Point& p, double t, const TrackOptions& opts) {
  const ComplexMatrix h = family(p);
  Eigenframe frame;
  try {
    frame = eig_general(h, opts.linalg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegenerateInput || e.kind() == ErrorKind::SelfOrthogonal) {
      throw Error(ErrorKind::NearEP, std::string("degenerate spectrum: ") + e.what(), t);
    }
    throw Error(e.kind(), e.what(), t);
  }
  const double guard = opts.ep_guard_rel * matrix_scale(h);
  if (frame.gap < guard) {
    std::ostringstream msg;
    msg << "spectral gap " << frame.gap << " below guard " << guard;
    throw Error(ErrorKind::NearEP, msg.str(), t);
  }
  return frame;
}

SpectralPath track(const MatrixFamily& family, const Curve& curve, int n_samples, const TrackOptions& opts) {
  const auto grid = discretize(curve, n_samples);
  auto frames = parallel_map(
      grid.size(), [&](std::size_t k) { return frame_at(family, grid[k].point, grid[k].t, opts); },
      opts.workers);
  if (curve.closed()) frames.back() = frames.front();

  std::vector<PathSample> samples;
  std::vector<Permutation> steps;
  samples.push_back({grid[0].t, grid[0].point, frames[0]});
  int depth_used = 0;

  // Appends the matching a -> b (and b itself), bisecting while ambiguous.
  auto refine = [&](auto&& self, const PathSample& a, const PathSample& b, int depth) -> void {
    const Assignment m = match_eigenvalues(a.frame.eigenvalues, b.frame.eigenvalues);
    if (!ambiguous_step(a.frame, b.frame, m, opts.ambiguity_ratio)) {
      steps.push_back(m.best);
      samples.push_back(b);
      return;
    }
    if (depth >= opts.max_depth) {
      throw Error(ErrorKind::AmbiguousMatching, "branch matching stayed ambiguous after bisection", a.t);
    }
    depth_used = std::max(depth_used, depth + 1);
    const double tm = 0.5 * (a.t + b.t);
    const Point pm = curve.at(tm);
    const PathSample mid{tm, pm, frame_at(family, pm, tm, opts)};
    self(self, a, mid, depth + 1);
    self(self, mid, b, depth + 1);
  };

  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const PathSample a{grid[k].t, grid[k].point, frames[k]};
    const PathSample b{grid[k + 1].t, grid[k + 1].point, frames[k + 1]};
    refine(refine, a, b, 0);
  }
  return SpectralPath(std::move(samples), std::move(steps), curve.closed(), curve.base_period(),
                      curve.traversals(), depth_used);
}

Monodromy monodromy_of(const Permutation& sigma) {
  return {sigma, sigma.cycles(), sigma.periods(), sigma.order()};
}

Monodromy monodromy_of(const SpectralPath& path) {
  if (!path.closed()) throw Error(ErrorKind::OpenCurve, "monodromy needs a closed curve");
  return monodromy_of(path.monodromy());
}

Curve lift_closed(const Curve& curve, int label, const Monodromy& monodromy) {
  if (label < 0 || label >= static_cast<int>(monodromy.periods.size())) {
    throw Error(ErrorKind::InvalidParams, "label out of range");
  }
  return curve.repeated(monodromy.periods[static_cast<std::size_t>(label)]);
}

MonodromyGroup monodromy_group(const MatrixFamily& family, const std::vector<Curve>& loops, int n_samples,
                               const TrackOptions& opts) {
  MonodromyGroup out;
  for (const auto& loop : loops) {
    if (!loop.closed()) throw Error(ErrorKind::OpenCurve, "monodromy group needs closed loops");
    const Point base = loops.front().start();
    if (loop.start().size() != base.size() || (loop.start() - base).norm() > 1e-9 * (1.0 + base.norm())) {
      throw Error(ErrorKind::InvalidCurve, "loops must share a base point");
    }
  }
  for (const auto& loop : loops) out.generators.push_back(track(family, loop, n_samples, opts).monodromy());
  out.elements = generated_group(out.generators, family.matrix_dim());
  return out;
}

}  // namespace holonomy
