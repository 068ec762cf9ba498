#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace holonomy {

/// Permutation of spectral labels {0..n-1}. image()[j] is where label j goes.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image);

  static Permutation identity(int n);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int j) const { return image_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& image() const { return image_; }

  /// Apply *this first, then `next`.
  Permutation then(const Permutation& next) const;
  Permutation inverse() const;
  Permutation power(int k) const;

  bool is_identity() const;
  /// Disjoint cycles, fixed points included, each starting at its smallest label.
  std::vector<std::vector<int>> cycles() const;
  /// Per-label minimal k >= 1 with sigma^k(j) = j.
  std::vector<int> periods() const;
  int order() const;

  /// One-based cycle notation: "id", "(1 2)", "(1)(2 3)".
  std::string cycle_notation() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

/// All elements of the group generated by `generators` acting on n labels,
/// sorted. Always contains the identity.
std::vector<Permutation> generated_group(std::span<const Permutation> generators, int n);

}  // namespace holonomy
