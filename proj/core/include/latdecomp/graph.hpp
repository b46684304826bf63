// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latdecomp/geometry.hpp"

namespace latdecomp {

/// Site adjacency over D3Q19 links between fluid sites, in CSR form.
/// Neighbour lists are sorted ascending; the adjacency is symmetric and has
/// no self-loops.
struct LatticeGraph {
  std::vector<std::int64_t> offsets{0};
  std::vector<std::int32_t> neighbours;
  std::vector<std::int64_t> vertex_weights;
  std::vector<Coord> coords;

  std::size_t vertex_count() const noexcept { return vertex_weights.size(); }
  std::size_t edge_count() const noexcept { return neighbours.size() / 2; }
  std::size_t degree(std::size_t v) const noexcept {
    return static_cast<std::size_t>(offsets[v + 1] - offsets[v]);
  }
  std::span<const std::int32_t> neighbours_of(std::size_t v) const noexcept {
    return {neighbours.data() + offsets[v], degree(v)};
  }
  std::int64_t total_weight() const noexcept;
};

/// Builds the lattice graph; `weights` must hold one positive entry per site.
LatticeGraph build_graph(const Geometry& g, std::span<const int> weights);

}  // namespace latdecomp
