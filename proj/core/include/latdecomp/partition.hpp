// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "latdecomp/geometry.hpp"
#include "latdecomp/graph.hpp"

namespace latdecomp {

enum class PartitionVariant {
  BlockSeed,  ///< contiguous runs of lattice blocks in raster order
  KWay,       ///< multilevel k-way
  GeomKWay,   ///< multilevel k-way seeded by Morton-ordered segments
};

std::string_view variant_name(PartitionVariant v) noexcept;

struct PartitionConfig {
  int nparts = 1;
  /// Allowed ratio of the heaviest part to the mean part weight.
  double tolerance = 1.001;
  std::uint64_t seed = 0;
  PartitionVariant variant = PartitionVariant::KWay;
  /// Coarsening stops at or below this many vertices; 0 means 30 * nparts.
  int coarsen_target = 0;

  int effective_coarsen_target() const noexcept {
    return coarsen_target > 0 ? coarsen_target : 30 * nparts;
  }
};

struct Partition {
  std::vector<int> assignment;
  int nparts = 0;
  PartitionConfig config;
  /// Set when a single vertex outweighs tolerance * mean, so the balance
  /// constraint had to be raised to that vertex weight.
  bool balance_relaxed = false;
};

/// Balance cap used by the k-way partitioners for a given total weight:
/// max(floor(tolerance * total / nparts), ceil(total / nparts)).
std::int64_t balance_cap(std::int64_t total_weight, int nparts, double tolerance);

/// Blocks of block_size^3 sites visited in raster order (x fastest) and
/// handed out as contiguous runs of roughly total / nparts weight. Every
/// part receives at least one block; all sites of a block share a part.
/// `weights` defaults to one per site. Throws InfeasibleSeedError when there
/// are fewer non-empty blocks than parts.
Partition block_seed_partition(const Geometry& g, int nparts, std::span<const int> weights = {});

/// Multilevel k-way: heavy-edge coarsening to the coarsen target,
/// recursive greedy-growing bisection on the coarsest graph, then
/// rebalancing and boundary FM refinement on every level on the way back.
Partition partition_kway(const LatticeGraph& graph, const PartitionConfig& cfg);

/// Vertices sorted by Morton key are cut into contiguous weight-balanced
/// segments; coarsening only merges vertices of the same segment, the
/// segments form the coarsest partition, and refinement proceeds as in
/// partition_kway.
Partition partition_geom_kway(const LatticeGraph& graph, const PartitionConfig& cfg);

/// Dispatches on cfg.variant. BlockSeed ignores the graph's edges.
Partition partition(const Geometry& g, const LatticeGraph& graph, const PartitionConfig& cfg);

/// Segment assignment of items with the given weights in the given order:
/// item i goes to floor(nparts * (prefix_before_i + w_i / 2) / total).
std::vector<int> weighted_segments(std::span<const std::int64_t> ordered_weights, int nparts);

/// CSV dump "site_index,part".
void write_partition_csv(std::ostream& out, std::span<const int> assignment);

}  // namespace latdecomp
