// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "latdecomp/sfc.hpp"

#include <algorithm>
#include <numeric>

namespace latdecomp {

namespace {

// Spreads the low 21 bits of v so that bit i moves to bit 3i.
constexpr std::uint64_t spread21(std::uint64_t v) noexcept {
  v &= 0x1fffffULL;
  v = (v | v << 32) & 0x1f00000000ffffULL;
  v = (v | v << 16) & 0x1f0000ff0000ffULL;
  v = (v | v << 8) & 0x100f00f00f00f00fULL;
  v = (v | v << 4) & 0x10c30c30c30c30c3ULL;
  v = (v | v << 2) & 0x1249249249249249ULL;
  return v;
}

constexpr std::uint64_t compact21(std::uint64_t v) noexcept {
  v &= 0x1249249249249249ULL;
  v = (v ^ (v >> 2)) & 0x10c30c30c30c30c3ULL;
  v = (v ^ (v >> 4)) & 0x100f00f00f00f00fULL;
  v = (v ^ (v >> 8)) & 0x1f0000ff0000ffULL;
  v = (v ^ (v >> 16)) & 0x1f00000000ffffULL;
  v = (v ^ (v >> 32)) & 0x1fffffULL;
  return v;
}

__extension__ typedef unsigned __int128 u128;

}  // namespace

MortonKey morton_encode(std::uint32_t x, std::uint32_t y, std::uint32_t z) noexcept {
  // Low 21 bits of each coordinate fill key bits 0..62; the remaining 11
  // bits fill 63..95.
  const std::uint64_t low = spread21(x) | spread21(y) << 1 | spread21(z) << 2;
  const std::uint64_t high = spread21(x >> 21) | spread21(y >> 21) << 1 | spread21(z >> 21) << 2;
  const u128 key = static_cast<u128>(low) | static_cast<u128>(high) << 63;
  return MortonKey{static_cast<std::uint32_t>(key >> 64), static_cast<std::uint64_t>(key)};
}

Coord morton_decode(const MortonKey& key) noexcept {
  const u128 k = static_cast<u128>(key.hi) << 64 | key.lo;
  const auto low = static_cast<std::uint64_t>(k & ((u128{1} << 63) - 1));
  const auto high = static_cast<std::uint64_t>(k >> 63);
  auto axis = [&](int shift) {
    return static_cast<std::uint32_t>(compact21(low >> shift) | compact21(high >> shift) << 21);
  };
  return Coord{axis(0), axis(1), axis(2)};
}

MortonSorted sort_by_morton(const Geometry& g) {
  const auto& sites = g.sites();
  std::vector<MortonKey> keys(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) keys[i] = morton_encode(sites[i].coord);

  std::vector<std::size_t> order(sites.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Keys are unique because coordinates are, so the order is total.
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  std::vector<std::size_t> permutation(sites.size());
  std::vector<Site> sorted;
  sorted.reserve(sites.size());
  for (std::size_t new_index = 0; new_index < order.size(); ++new_index) {
    permutation[order[new_index]] = new_index;
    sorted.push_back(sites[order[new_index]]);
  }
  return MortonSorted{
      Geometry(g.dims(), g.block_size(), g.planes(), std::move(sorted), g.periodic()),
      std::move(permutation)};
}

}  // namespace latdecomp
