#include "holonomy/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "holonomy/error.hpp"

namespace holonomy {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)]) {
      throw Error(ErrorKind::InvalidParams, "not a permutation");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  return Permutation(std::move(image));
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.size() != size()) throw Error(ErrorKind::InvalidParams, "permutation size mismatch");
  std::vector<int> image(image_.size());
  for (std::size_t j = 0; j < image_.size(); ++j) image[j] = next(image_[j]);
  return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
  std::vector<int> image(image_.size());
  for (std::size_t j = 0; j < image_.size(); ++j) image[static_cast<std::size_t>(image_[j])] = static_cast<int>(j);
  return Permutation(std::move(image));
}

Permutation Permutation::power(int k) const {
  if (k < 0) return inverse().power(-k);
  Permutation out = identity(size());
  for (int i = 0; i < k; ++i) out = out.then(*this);
  return out;
}

bool Permutation::is_identity() const {
  for (std::size_t j = 0; j < image_.size(); ++j) {
    if (image_[j] != static_cast<int>(j)) return false;
  }
  return true;
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(image_.size(), false);
  for (int start = 0; start < size(); ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> cycle;
    for (int j = start; !seen[static_cast<std::size_t>(j)]; j = (*this)(j)) {
      seen[static_cast<std::size_t>(j)] = true;
      cycle.push_back(j);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

std::vector<int> Permutation::periods() const {
  std::vector<int> out(image_.size(), 1);
  for (const auto& cycle : cycles()) {
    for (int j : cycle) out[static_cast<std::size_t>(j)] = static_cast<int>(cycle.size());
  }
  return out;
}

int Permutation::order() const {
  int out = 1;
  for (const auto& cycle : cycles()) out = std::lcm(out, static_cast<int>(cycle.size()));
  return out;
}

std::string Permutation::cycle_notation() const {
  if (is_identity()) return "id";
  std::string out;
  for (const auto& cycle : cycles()) {
    out += '(';
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(cycle[i] + 1);
    }
    out += ')';
  }
  return out;
}

std::vector<Permutation> generated_group(std::span<const Permutation> generators, int n) {
  std::set<Permutation> group{Permutation::identity(n)};
  std::vector<Permutation> frontier{Permutation::identity(n)};
  // Closure terminates: the group is a subset of S_n.
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& g : frontier) {
      for (const auto& s : generators) {
        if (s.size() != n) throw Error(ErrorKind::InvalidParams, "generator size mismatch");
        Permutation p = g.then(s);
        if (group.insert(p).second) next.push_back(std::move(p));
      }
    }
    frontier = std::move(next);
  }
  return {group.begin(), group.end()};
}

}  // namespace holonomy
