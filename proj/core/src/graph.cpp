// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "latdecomp/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "latdecomp/errors.hpp"

namespace latdecomp {

std::int64_t LatticeGraph::total_weight() const noexcept {
  return std::accumulate(vertex_weights.begin(), vertex_weights.end(), std::int64_t{0});
}

LatticeGraph build_graph(const Geometry& g, std::span<const int> weights) {
  if (weights.size() != g.size()) {
    throw PartitionError("weight vector has " + std::to_string(weights.size()) +
                         " entries for " + std::to_string(g.size()) + " sites");
  }
  LatticeGraph out;
  const std::size_t n = g.size();
  out.offsets.assign(1, 0);
  out.offsets.reserve(n + 1);
  out.neighbours.reserve(n * 12);
  out.vertex_weights.reserve(n);
  out.coords.reserve(n);

  std::vector<std::int32_t> row;
  row.reserve(d3q19::kLinks);
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] <= 0) throw PartitionError("vertex weights must be positive");
    row.clear();
    for (std::size_t dir = 1; dir < d3q19::kQ; ++dir) {
      if (auto nb = g.neighbour(i, dir); nb && *nb != i) {
        row.push_back(static_cast<std::int32_t>(*nb));
      }
    }
    // Tiny periodic boxes can reach the same neighbour twice.
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    out.neighbours.insert(out.neighbours.end(), row.begin(), row.end());
    out.offsets.push_back(static_cast<std::int64_t>(out.neighbours.size()));
    out.vertex_weights.push_back(weights[i]);
    out.coords.push_back(g.site(i).coord);
  }
  return out;
}

}  // namespace latdecomp
