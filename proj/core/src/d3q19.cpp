// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "latdecomp/d3q19.hpp"

namespace latdecomp::d3q19 {

namespace {

constexpr std::array<std::uint8_t, kQ> make_opposite() {
  std::array<std::uint8_t, kQ> out{};
  for (std::size_t i = 0; i < kQ; ++i) out[i] = static_cast<std::uint8_t>(opposite(i));
  return out;
}

// Compile-time sanity on the velocity table.
constexpr bool table_consistent() {
  for (std::size_t i = 0; i < kQ; ++i) {
    const auto j = opposite(i);
    for (int d = 0; d < 3; ++d) {
      if (kVelocity[i][d] != -kVelocity[j][d]) return false;
    }
  }
  return true;
}
static_assert(table_consistent(), "D3Q19 opposite pairs broken");

}  // namespace

const std::array<std::uint8_t, kQ> kOpposite = make_opposite();

}  // namespace latdecomp::d3q19
