// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace latdecomp::d3q19 {

inline constexpr std::size_t kQ = 19;
/// Number of moving directions; per-link arrays are indexed by `direction - 1`.
inline constexpr std::size_t kLinks = 18;

/// Discrete velocities. Index 0 is rest, 1..6 the axis pairs
/// (+x,-x,+y,-y,+z,-z), 7..18 the face diagonals as (c,-c) pairs where c runs
/// over the diagonals with a positive leading non-zero component, sorted
/// lexicographically. Every odd direction i >= 1 is opposite to i + 1.
inline constexpr std::array<std::array<int, 3>, kQ> kVelocity{{
    {0, 0, 0},
    {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
    {0, 1, -1}, {0, -1, 1},
    {0, 1, 1}, {0, -1, -1},
    {1, -1, 0}, {-1, 1, 0},
    {1, 0, -1}, {-1, 0, 1},
    {1, 0, 1}, {-1, 0, -1},
    {1, 1, 0}, {-1, -1, 0},
}};

inline constexpr std::array<double, kQ> kWeight{
    1.0 / 3.0,
    1.0 / 18.0, 1.0 / 18.0, 1.0 / 18.0, 1.0 / 18.0, 1.0 / 18.0, 1.0 / 18.0,
    1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0,
    1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0,
};

inline constexpr double kCs2 = 1.0 / 3.0;

constexpr std::size_t opposite(std::size_t i) noexcept {
  if (i == 0) return 0;
  return (i % 2 == 1) ? i + 1 : i - 1;
}

/// Full opposite table, handy in inner loops.
extern const std::array<std::uint8_t, kQ> kOpposite;

}  // namespace latdecomp::d3q19
