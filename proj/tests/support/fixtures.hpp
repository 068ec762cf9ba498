#pragma once

#include <random>
#include <vector>

#include <holonomy/holonomy.hpp>

namespace holonomy::testing {

/// gamma - expected with the real part wrapped into (-pi, pi].
inline double phase_distance(cplx gamma, cplx expected) {
  const cplx d = gamma - expected;
  return std::abs(cplx(wrap_angle(d.real()), d.imag()));
}

inline cplx random_gauge(std::mt19937& rng) {
  std::uniform_real_distribution<double> mag(-0.7, 0.7);
  std::uniform_real_distribution<double> arg(-kPi, kPi);
  return std::polar(std::exp(mag(rng)), arg(rng));
}

/// Independent nonzero rescalings for every sample and frame column.
inline std::vector<std::vector<cplx>> random_gauges(const SpectralPath& path, std::mt19937& rng) {
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(path.size()));
  for (auto& row : out) {
    row.resize(static_cast<std::size_t>(path.dim()));
    for (auto& g : row) g = random_gauge(rng);
  }
  // a closed path repeats its base frame at the end
  if (path.closed()) out.back() = out.front();
  return out;
}

/// Rescalings that turn the numeric psi of `label` into a given section,
/// leaving the other columns alone.
template <class Section>
std::vector<std::vector<cplx>> rescale_to(const SpectralPath& path, int label, Section section) {
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(path.size()),
                                     std::vector<cplx>(static_cast<std::size_t>(path.dim()), 1.0));
  for (int k = 0; k < path.size(); ++k) {
    const int j = path.branch_index(k, label);
    const ComplexVector target = section(k);
    const ComplexVector psi = path.samples()[static_cast<std::size_t>(k)].frame.psi(j);
    out[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = psi.dot(target) / psi.squaredNorm();
  }
  return out;
}

/// Frame label at sample 0 whose energy is closest to e.
inline int label_near(const SpectralPath& path, cplx e) {
  const auto& ev = path.samples().front().frame.eigenvalues;
  int best = 0;
  for (int j = 1; j < ev.size(); ++j) {
    if (std::abs(ev(j) - e) < std::abs(ev(best) - e)) best = j;
  }
  return best;
}

/// Root f of the traceless part of a 2x2 matrix with E = tr/2 + f.
inline cplx half_splitting(const ComplexMatrix& h, cplx energy) { return energy - 0.5 * h.trace(); }

/// z(t) = center + r e^{2 pi i t} + small random harmonics that keep the
/// loop within [0.7 r, 1.3 r] of the centre.
inline Curve wobbly_circle(cplx center, double r, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> coeffs(5, 0.0);
  coeffs[0] = center;
  coeffs[1] = r;
  for (int k = 2; k < 5; ++k) coeffs[static_cast<std::size_t>(k)] = 0.1 * r * cplx(u(rng), u(rng)) / std::sqrt(2.0);
  return Curve::trigonometric(coeffs);
}

}  // namespace holonomy::testing
