#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maryland/errors.hpp"

namespace maryland {

using Site = std::vector<int>;

/// Number of sites of the cube {|m|_inf <= radius} in Z^dimension.
inline std::size_t box_size(int dimension, int radius) {
  std::size_t n = 1;
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  for (int i = 0; i < dimension; ++i) n *= side;
  return n;
}

/// Calls f(site) for every site of the cube {|m|_inf <= radius}, in lexicographic
/// order (last coordinate fastest). The index of a site in this order is
/// box_index(site, radius).
template <typename F>
void for_each_in_box(int dimension, int radius, F&& f) {
  if (radius < 0) throw DomainError("box radius must be non-negative");
  Site m(static_cast<std::size_t>(dimension), -radius);
  if (dimension == 0) {
    f(std::span<const int>(m));
    return;
  }
  while (true) {
    f(std::span<const int>(m));
    int axis = dimension - 1;
    while (axis >= 0 && m[static_cast<std::size_t>(axis)] == radius) {
      m[static_cast<std::size_t>(axis)] = -radius;
      --axis;
    }
    if (axis < 0) return;
    ++m[static_cast<std::size_t>(axis)];
  }
}

inline std::size_t box_index(std::span<const int> site, int radius) {
  std::size_t idx = 0;
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  for (int c : site) idx = idx * side + static_cast<std::size_t>(c + radius);
  return idx;
}

inline bool in_box(std::span<const int> site, int radius) {
  for (int c : site)
    if (c < -radius || c > radius) return false;
  return true;
}

}  // namespace maryland
