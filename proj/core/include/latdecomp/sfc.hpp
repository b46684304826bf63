// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "latdecomp/geometry.hpp"

namespace latdecomp {

/// 96-bit Morton (Z-order) key: bit i of x lands at bit 3i, y at 3i+1 and
/// z at 3i+2. Comparing keys compares positions along the Z curve.
struct MortonKey {
  std::uint32_t hi = 0;  ///< bits 64..95
  std::uint64_t lo = 0;  ///< bits 0..63

  friend constexpr auto operator<=>(const MortonKey&, const MortonKey&) = default;
};

MortonKey morton_encode(std::uint32_t x, std::uint32_t y, std::uint32_t z) noexcept;
inline MortonKey morton_encode(const Coord& c) noexcept { return morton_encode(c.x, c.y, c.z); }
Coord morton_decode(const MortonKey& key) noexcept;

struct MortonSorted {
  Geometry geometry;
  /// permutation[old_index] == new_index
  std::vector<std::size_t> permutation;
};

/// Reorders sites by ascending Morton key. Site data is carried unchanged.
MortonSorted sort_by_morton(const Geometry& g);

}  // namespace latdecomp
