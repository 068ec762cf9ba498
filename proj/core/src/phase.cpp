#include "holonomy/phase.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "holonomy/error.hpp"
#include "holonomy/parallel.hpp"

namespace holonomy {

namespace {

struct StepLog {
  cplx value;  // ln<phi_a|psi_b> - (1/2) ln q
  cplx q;
};

StepLog step_log(const ComplexVector& phi_a, const ComplexVector& psi_a, const ComplexVector& phi_b,
                 const ComplexVector& psi_b, bool metric_correction) {
  const cplx o = phi_a.dot(psi_b);
  const cplx back = phi_b.dot(psi_a);
  const cplx q = o * back;
  cplx v = std::log(o);
  if (metric_correction) v -= 0.5 * std::log(q);
  return {v, q};
}

void check_precision(const StepLog& s, double limit, double t, int n_steps) {
  if (!(std::abs(s.q - 1.0) <= limit)) {
    std::ostringstream msg;
    msg << "step overlap deviates from 1 by " << std::abs(s.q - 1.0) << "; try at least " << 4 * n_steps
        << " samples";
    throw Error(ErrorKind::PrecisionLoss, msg.str(), t);
  }
}

// Sum of step logs from sample 0 to the last sample in strides of `stride`;
// with `close`, the last step lands on sample 0 instead. Returns nullopt on a
// coarse stride whose overlaps are too far from 1, and throws on stride 1.
std::optional<cplx> log_sum(const SpectralPath& path, int label, bool close, const PhaseOptions& opts,
                            int stride = 1) {
  const int k_last = path.size() - 1;
  cplx total = 0.0;
  for (int k = 0; k < k_last; k += stride) {
    const int next = k + stride;
    const bool wraps = close && next == k_last;
    const int kb = wraps ? 0 : next;
    const int jb = wraps ? label : path.branch_index(next, label);
    const auto& fa = path.samples()[static_cast<std::size_t>(k)].frame;
    const auto& fb = path.samples()[static_cast<std::size_t>(kb)].frame;
    const int ja = path.branch_index(k, label);
    const StepLog s = step_log(fa.phi(ja), fa.psi(ja), fb.phi(jb), fb.psi(jb), opts.metric_correction);
    if (stride > 1 && !(std::abs(s.q - 1.0) <= opts.precision_loss)) return std::nullopt;
    check_precision(s, opts.precision_loss, path.samples()[static_cast<std::size_t>(k)].t, k_last);
    total += s.value;
  }
  return total;
}

bool can_extrapolate(const SpectralPath& path, const PhaseOptions& opts) {
  return opts.extrapolate && opts.metric_correction && path.refinement_depth() == 0 && (path.size() - 1) % 2 == 0 &&
         path.size() - 1 >= 16;
}

// Richardson step on the fine and half-resolution sums; the difference is
// taken on the principal branch so the fine sum keeps its raw winding.
cplx extrapolated(cplx fine, cplx coarse) {
  cplx d = fine - coarse;
  d.imag(wrap_angle(d.imag()));
  return fine + d / 3.0;
}

void fill_geometric(PhaseResult& r, cplx gamma, cplx factor) {
  r.geometric = gamma;
  r.geometric_mod = wrap_angle(gamma.real());
  r.winding = static_cast<int>(std::lround((gamma.real() - r.geometric_mod) / kTwoPi));
  r.holonomy_factor = factor;
}

int matched_label(const Eigenframe& from, int label, const Eigenframe& to) {
  return match_eigenvalues(from.eigenvalues, to.eigenvalues).best(label);
}

Point derivative(const Surface& s, double u, double v, bool along_u) {
  constexpr double d = 1e-6;
  if (along_u) return (s(u + d, v) - s(u - d, v)) / (2.0 * d);
  return (s(u, v + d) - s(u, v - d)) / (2.0 * d);
}

// Winding number of the polygon `pts` (2D) around q.
int winding_number(const std::vector<Eigen::Vector2d>& pts, const Eigen::Vector2d& q) {
  double total = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector2d a = pts[i] - q;
    const Eigen::Vector2d b = pts[(i + 1) % pts.size()] - q;
    total += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace

cplx dynamical_phase(const SpectralPath& path, int label) {
  cplx total = 0.0;
  const auto& s = path.samples();
  for (int k = 0; k + 1 < path.size(); ++k) {
    const double dt = (s[static_cast<std::size_t>(k) + 1].t - s[static_cast<std::size_t>(k)].t) * path.base_period();
    total -= 0.5 * (path.energy(k, label) + path.energy(k + 1, label)) * dt;
  }
  return total;
}

PhaseResult geometric_phase(const SpectralPath& path, int label, const PhaseOptions& opts) {
  if (label < 0 || label >= path.dim()) throw Error(ErrorKind::InvalidParams, "label out of range");
  if (!path.closed()) throw Error(ErrorKind::OpenCurve, "geometric phase needs a closed path");
  if (path.monodromy()(label) != label) {
    throw Error(ErrorKind::NonCyclicBranch,
                "monodromy " + path.monodromy().cycle_notation() + " moves label " + std::to_string(label + 1) +
                    "; lift the curve first");
  }
  cplx l = *log_sum(path, label, true, opts);
  if (can_extrapolate(path, opts)) {
    if (const auto coarse = log_sum(path, label, true, opts, 2)) l = extrapolated(l, *coarse);
  }
  PhaseResult r;
  r.label = label;
  r.dynamical = dynamical_phase(path, label);
  fill_geometric(r, kI * l, std::exp(-l));
  r.traversals = path.traversals();
  r.n_samples_used = path.size() - 1;
  return r;
}

std::vector<RunningPhase> running_phase(const SpectralPath& path, int label, const PhaseOptions& opts) {
  std::vector<RunningPhase> out{{path.samples().front().t, 0.0, 0.0}};
  const auto& s = path.samples();
  for (int k = 0; k + 1 < path.size(); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const int ja = path.branch_index(k, label);
    const int jb = path.branch_index(k + 1, label);
    const StepLog st = step_log(s[ku].frame.phi(ja), s[ku].frame.psi(ja), s[ku + 1].frame.phi(jb),
                                s[ku + 1].frame.psi(jb), opts.metric_correction);
    const double dt = (s[ku + 1].t - s[ku].t) * path.base_period();
    RunningPhase next = out.back();
    next.t = s[ku + 1].t;
    next.dynamical -= 0.5 * (path.energy(k, label) + path.energy(k + 1, label)) * dt;
    next.geometric += kI * st.value;
    out.push_back(next);
  }
  return out;
}

SpectralPath gauge_perturb(const SpectralPath& path, const std::vector<std::vector<cplx>>& rescalings) {
  if (static_cast<int>(rescalings.size()) != path.size()) {
    throw Error(ErrorKind::InvalidParams, "one rescaling row per sample required");
  }
  std::vector<Eigenframe> frames;
  frames.reserve(rescalings.size());
  for (std::size_t k = 0; k < rescalings.size(); ++k) {
    Eigenframe f = path.samples()[k].frame;
    if (static_cast<int>(rescalings[k].size()) != f.dim()) {
      throw Error(ErrorKind::InvalidParams, "one rescaling per label required");
    }
    for (int j = 0; j < f.dim(); ++j) {
      const cplx c = rescalings[k][static_cast<std::size_t>(j)];
      if (c == 0.0) throw Error(ErrorKind::ZeroGauge, "gauge factor is zero", path.samples()[k].t);
      f.right.col(j) *= c;
      f.left.col(j) /= std::conj(c);
    }
    frames.push_back(std::move(f));
  }
  return path.with_frames(std::move(frames));
}

std::vector<BranchSegment> split_path(const SpectralPath& path, int label, const std::vector<int>& cuts) {
  std::vector<int> bounds{0};
  for (int c : cuts) {
    if (c <= bounds.back() || c >= path.size() - 1) throw Error(ErrorKind::InvalidParams, "cuts must increase inside the path");
    bounds.push_back(c);
  }
  bounds.push_back(path.size() - 1);

  std::vector<BranchSegment> out;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const auto a = static_cast<std::size_t>(bounds[i]);
    const auto b = static_cast<std::size_t>(bounds[i + 1]);
    std::vector<PathSample> samples(path.samples().begin() + static_cast<std::ptrdiff_t>(a),
                                    path.samples().begin() + static_cast<std::ptrdiff_t>(b) + 1);
    std::vector<Permutation> steps(path.step_matchings().begin() + static_cast<std::ptrdiff_t>(a),
                                   path.step_matchings().begin() + static_cast<std::ptrdiff_t>(b));
    out.push_back({SpectralPath(std::move(samples), std::move(steps), false, path.base_period(), path.traversals(),
                                path.refinement_depth()),
                   path.branch_index(bounds[i], label)});
  }
  return out;
}

cplx junction_transition(const BranchSegment& prev, const BranchSegment& next) {
  const int last = prev.path.size() - 1;
  return next.path.phi(0, next.label).dot(prev.path.psi(last, prev.label));
}

PhaseResult multipatch_phase(const std::vector<BranchSegment>& segments, const std::vector<cplx>& transitions,
                             double tol, const PhaseOptions& opts) {
  const std::size_t r = segments.size();
  if (r == 0 || transitions.size() != r) {
    throw Error(ErrorKind::InvalidParams, "need one transition per segment");
  }
  bool extrapolate = true;
  for (const auto& seg : segments) extrapolate = extrapolate && can_extrapolate(seg.path, opts);
  cplx l = 0.0;
  cplx log_g = 0.0;
  cplx factor = 1.0;
  PhaseResult out;
  for (std::size_t i = 0; i < r; ++i) {
    const auto& seg = segments[i];
    const auto& prev = segments[(i + r - 1) % r];
    const cplx g = transitions[i];
    const cplx measured = junction_transition(prev, seg);
    if (g == 0.0 || std::abs(measured - g) > tol * std::abs(g)) {
      std::ostringstream msg;
      msg << "transition " << g.real() << (g.imag() < 0 ? "" : "+") << g.imag() << "i disagrees with frames ("
          << measured.real() << (measured.imag() < 0 ? "" : "+") << measured.imag() << "i) at junction " << i;
      throw Error(ErrorKind::MismatchedJunction, msg.str(), seg.path.samples().front().t);
    }
    cplx li = *log_sum(seg.path, seg.label, false, opts);
    if (extrapolate) {
      if (const auto coarse = log_sum(seg.path, seg.label, false, opts, 2)) li = extrapolated(li, *coarse);
    }
    l += li;
    log_g += std::log(g);
    factor *= std::exp(-li) * g;
    out.dynamical += dynamical_phase(seg.path, seg.label);
    out.n_samples_used += seg.path.size() - 1;
  }
  out.label = segments.front().label;
  out.traversals = segments.front().path.traversals();
  fill_geometric(out, kI * l - kI * log_g, factor);
  return out;
}

double default_curvature_step(const MatrixFamily& family, const Point& p) {
  const double d = family.distance_to_degeneracy(p);
  return std::isfinite(d) && d > 0.0 ? 1e-4 * d : 1e-4;
}

CurvatureSample curvature(const MatrixFamily& family, const Point& p, int label, double h, CurvatureMethod method,
                          const TrackOptions& opts) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidParams, "curvature step must be positive");
  const auto d = p.size();
  const Eigenframe center = frame_at(family, p, 0.0, opts);
  if (label < 0 || label >= center.dim()) throw Error(ErrorKind::InvalidParams, "label out of range");

  ComplexMatrix f = ComplexMatrix::Zero(d, d);
  if (method == CurvatureMethod::ExteriorDerivative) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i + 1; j < d; ++j) {
        const Point ei = Point::Unit(d, i) * (0.5 * h);
        const Point ej = Point::Unit(d, j) * (0.5 * h);
        const Point corners[4] = {p - ei - ej, p + ei - ej, p + ei + ej, p - ei + ej};
        Eigenframe frames[4];
        int labels[4];
        for (int c = 0; c < 4; ++c) {
          frames[c] = frame_at(family, corners[c], 0.0, opts);
          labels[c] = matched_label(center, label, frames[c]);
        }
        cplx l = 0.0;
        for (int c = 0; c < 4; ++c) {
          const int n = (c + 1) % 4;
          l += step_log(frames[c].phi(labels[c]), frames[c].psi(labels[c]), frames[n].phi(labels[n]),
                        frames[n].psi(labels[n]), true)
                   .value;
        }
        f(i, j) = kI * l / (h * h);
      }
    }
  } else {
    std::vector<ComplexMatrix> x;
    x.reserve(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
      const Point step = Point::Unit(d, i) * h;
      const ComplexMatrix dh = (family(p + step) - family(p - step)) / (2.0 * h);
      x.push_back(center.left.adjoint() * dh * center.right);
    }
    const int n = label;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i + 1; j < d; ++j) {
        cplx s = 0.0;
        for (int m = 0; m < center.dim(); ++m) {
          if (m == n) continue;
          const cplx de = center.energy(m) - center.energy(n);
          s += (x[static_cast<std::size_t>(i)](n, m) * x[static_cast<std::size_t>(j)](m, n) -
                x[static_cast<std::size_t>(j)](n, m) * x[static_cast<std::size_t>(i)](m, n)) /
               (de * de);
        }
        f(i, j) = kI * s;
      }
    }
  }
  return {p, label, f - f.transpose(), method};
}

cplx surface_flux(const MatrixFamily& family, const Surface& surface, int label, const FluxOptions& opts) {
  if (opts.nu < 1 || opts.nv < 1) throw Error(ErrorKind::InvalidSampling, "flux grid must be nonempty");
  const double du = 1.0 / opts.nu;
  const double dv = 1.0 / opts.nv;

  // Labels along the u = 0 edge, continued from surface(0, 0).
  std::vector<Eigenframe> edge;
  std::vector<int> edge_labels;
  Eigenframe prev = frame_at(family, surface(0.0, 0.0), 0.0, opts.track);
  int prev_label = label;
  for (int j = 0; j < opts.nv; ++j) {
    const double v = (j + 0.5) * dv;
    Eigenframe fr = frame_at(family, surface(0.0, v), v, opts.track);
    prev_label = matched_label(prev, prev_label, fr);
    edge_labels.push_back(prev_label);
    edge.push_back(fr);
    prev = std::move(fr);
  }

  const auto rows = parallel_map(
      static_cast<std::size_t>(opts.nv),
      [&](std::size_t j) {
        const double v = (static_cast<double>(j) + 0.5) * dv;
        Eigenframe last = edge[j];
        int lbl = edge_labels[j];
        cplx row = 0.0;
        for (int i = 0; i < opts.nu; ++i) {
          const double u = (i + 0.5) * du;
          const Point p = surface(u, v);
          Eigenframe fr = frame_at(family, p, v, opts.track);
          lbl = matched_label(last, lbl, fr);
          const double h = opts.h > 0.0 ? opts.h : default_curvature_step(family, p);
          const ComplexMatrix f = curvature(family, p, lbl, h, opts.method, opts.track).components;
          const Point su = derivative(surface, u, v, true);
          const Point sv = derivative(surface, u, v, false);
          row += (su.cast<cplx>().transpose() * f * sv.cast<cplx>())(0, 0);
          last = std::move(fr);
        }
        return row;
      },
      opts.track.workers);
  cplx total = 0.0;
  for (const auto& r : rows) total += r;
  return total * du * dv;
}

double stokes_check(const MatrixFamily& family, const Curve& loop, int label, int n_samples, const FluxOptions& opts) {
  if (!loop.closed()) throw Error(ErrorKind::OpenCurve, "Stokes check needs a closed loop");
  const SpectralPath path = track(family, loop, n_samples, opts.track);
  if (!path.monodromy().is_identity()) {
    throw Error(ErrorKind::NotContractible, "loop monodromy is " + path.monodromy().cycle_notation());
  }
  const PhaseResult gamma = geometric_phase(path, label);

  constexpr int kOutline = 256;
  const auto d = loop.dim();
  Eigen::MatrixXd offsets(d, kOutline);
  Point centroid = Point::Zero(d);
  for (int k = 0; k < kOutline; ++k) {
    offsets.col(k) = loop.at(static_cast<double>(k) / kOutline);
    centroid += offsets.col(k);
  }
  centroid /= kOutline;
  offsets.colwise() -= centroid;

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(offsets, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const bool planar = d == 2 || (sv.size() > 2 && sv(2) <= 1e-9 * sv(0));
  if (planar && sv(0) > 0.0) {
    const Eigen::MatrixXd basis = svd.matrixU().leftCols(2);
    std::vector<Eigen::Vector2d> outline;
    for (int k = 0; k < kOutline; ++k) outline.emplace_back(basis.transpose() * offsets.col(k));
    for (const auto& q : family.locus().points) {
      if (q.size() != d) continue;
      const Point rel = q - centroid;
      const Point in_plane = basis * (basis.transpose() * rel);
      if ((rel - in_plane).norm() > 1e-9 * (1.0 + q.norm())) continue;
      if (winding_number(outline, basis.transpose() * rel) != 0) {
        throw Error(ErrorKind::NotContractible, "a known degeneracy lies inside the loop");
      }
    }
  }

  try {
    int center_label = label;
    if ((loop.start() - centroid).norm() > 1e-12 * (1.0 + centroid.norm())) {
      const SpectralPath inward = track(family, Curve::polyline({loop.start(), centroid}, false), 64, opts.track);
      center_label = inward.branch_index(inward.size() - 1, label);
    }
    const Surface cone = [&loop, centroid](double u, double v) -> Point {
      return centroid + u * (loop.at(v) - centroid);
    };
    const cplx flux = surface_flux(family, cone, center_label, opts);
    const cplx diff = gamma.geometric - flux;
    return std::abs(cplx(wrap_angle(diff.real()), diff.imag()));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NearEP) {
      throw Error(ErrorKind::NotContractible, std::string("enclosed region meets a degeneracy: ") + e.what());
    }
    throw;
  }
}

}  // namespace holonomy
