#pragma once

#include <vector>

#include "holonomy/curve.hpp"
#include "holonomy/family.hpp"
#include "holonomy/linalg.hpp"
#include "holonomy/permutation.hpp"

namespace holonomy {

struct TrackOptions {
  int max_depth = 20;
  /// Samples with spectral gap below ep_guard_rel * ||H|| abort with NearEP.
  double ep_guard_rel = 1e-6;
  /// Bisect a step when second-best assignment cost < ambiguity_ratio * best.
  double ambiguity_ratio = 2.0;
  LinalgTolerances linalg{};
  unsigned workers = 0;
};

struct PathSample {
  double t = 0.0;
  Point point;
  Eigenframe frame;
};

/// Eigenframes along a discretized curve with the label matchings between
/// neighbouring samples. step_matchings[k] maps labels of sample k to labels
/// of sample k + 1.
class SpectralPath {
 public:
  SpectralPath() = default;
  SpectralPath(std::vector<PathSample> samples, std::vector<Permutation> step_matchings, bool closed,
               double base_period, int traversals, int refinement_depth);

  const std::vector<PathSample>& samples() const { return samples_; }
  const std::vector<Permutation>& step_matchings() const { return steps_; }
  /// Composition of all step matchings; identity for open curves.
  const Permutation& monodromy() const { return monodromy_; }

  int size() const { return static_cast<int>(samples_.size()); }
  int dim() const { return samples_.empty() ? 0 : samples_.front().frame.dim(); }
  bool closed() const { return closed_; }
  double base_period() const { return base_period_; }
  int traversals() const { return traversals_; }
  int refinement_depth() const { return refinement_depth_; }
  /// Smallest spectral gap along the path, absolute and relative to the norm
  /// of the local spectrum.
  double min_gap() const { return min_gap_; }
  double min_gap_rel() const { return min_gap_rel_; }

  /// Frame column that carries start label `label` at sample k.
  int branch_index(int k, int label) const { return cumulative_[static_cast<std::size_t>(k)](label); }
  cplx energy(int k, int label) const;
  ComplexVector psi(int k, int label) const;
  ComplexVector phi(int k, int label) const;

  /// Replaces sample k's frame; used for gauge changes that keep the labels.
  SpectralPath with_frames(std::vector<Eigenframe> frames) const;

 private:
  std::vector<PathSample> samples_;
  std::vector<Permutation> steps_;
  std::vector<Permutation> cumulative_;
  Permutation monodromy_;
  bool closed_ = false;
  double base_period_ = 1.0;
  int traversals_ = 1;
  int refinement_depth_ = 0;
  double min_gap_ = 0.0;
  double min_gap_rel_ = 0.0;
};

struct Assignment {
  Permutation best;
  double best_cost = 0.0;
  /// Cost of the cheapest assignment different from `best`; infinity for N = 1.
  double second_cost = 0.0;
};

/// Minimal total |from_i - to_sigma(i)| assignment. Exhaustive for N <= 5,
/// Hungarian with a forbidden-edge second best above that.
Assignment match_eigenvalues(const ComplexVector& from, const ComplexVector& to);

/// Eigenframe of H at one point with the EP guard applied.
Eigenframe frame_at(const MatrixFamily& family, const Point& p, double t, const TrackOptions& opts = {});

SpectralPath track(const MatrixFamily& family, const Curve& curve, int n_samples, const TrackOptions& opts = {});

struct Monodromy {
  Permutation sigma;
  std::vector<std::vector<int>> cycles;
  std::vector<int> periods;
  int order = 1;
};

Monodromy monodromy_of(const Permutation& sigma);
/// Throws OpenCurve for a path along an open curve.
Monodromy monodromy_of(const SpectralPath& path);

/// The curve repeated periods[label] times.
Curve lift_closed(const Curve& curve, int label, const Monodromy& monodromy);

struct MonodromyGroup {
  std::vector<Permutation> generators;
  std::vector<Permutation> elements;
  int order() const { return static_cast<int>(elements.size()); }
};

/// Subgroup of S_N generated by the loops' monodromies. All loops must be
/// closed and share a base point.
MonodromyGroup monodromy_group(const MatrixFamily& family, const std::vector<Curve>& loops, int n_samples,
                               const TrackOptions& opts = {});

}  // namespace holonomy
