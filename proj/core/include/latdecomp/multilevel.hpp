// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

// Building blocks of the multilevel partitioner. Exposed so the refinement
// and coarsening invariants can be tested directly; most callers want
// partition.hpp instead.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "latdecomp/graph.hpp"

namespace latdecomp::multilevel {

/// CSR graph with vertex and edge weights.
struct WeightedGraph {
  std::vector<std::int64_t> xadj{0};
  std::vector<std::int32_t> adjncy;
  std::vector<std::int64_t> adjwgt;
  std::vector<std::int64_t> vwgt;

  std::int32_t size() const noexcept { return static_cast<std::int32_t>(vwgt.size()); }
  std::int64_t total_weight() const noexcept;
  std::int64_t max_vertex_weight() const noexcept;
};

WeightedGraph from_lattice(const LatticeGraph& g);

/// Sub-graph induced by `vertices` (ascending); vertex i of the result is
/// vertices[i].
WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const std::int32_t> vertices);

struct CoarseLevel {
  WeightedGraph graph;
  /// Maps each vertex of the finer graph to its coarse vertex.
  std::vector<std::int32_t> fine_to_coarse;
  /// Labels carried to the coarse graph (empty when unconstrained).
  std::vector<int> labels;
};

/// One round of heavy-edge matching. Vertices are visited in a random order
/// drawn from `rng`; each unmatched vertex pairs with the unmatched
/// neighbour of heaviest connecting edge (lower index on ties) provided the
/// merged weight stays <= max_vertex_weight. When `labels` is non-empty only
/// equally labelled vertices are matched.
CoarseLevel coarsen_once(const WeightedGraph& g, std::int64_t max_vertex_weight,
                         std::mt19937_64& rng, std::span<const int> labels = {});

std::int64_t edge_cut(const WeightedGraph& g, std::span<const int> part);
std::vector<std::int64_t> part_weights(const WeightedGraph& g, std::span<const int> part,
                                       int nparts);

struct RefineResult {
  std::int64_t cut_before = 0;
  std::int64_t cut_after = 0;
  std::size_t moves = 0;  ///< moves kept after rollback, summed over passes
};

/// k-way boundary Fiduccia-Mattheyses. Each pass moves unlocked boundary
/// vertices in order of best gain (lower vertex index on ties) into parts
/// that stay within `caps`, then rolls back to the best prefix. A prefix
/// only replaces the current best if it lowers the cut, or keeps it and
/// lowers the heaviest part, so the cut never increases.
RefineResult fm_refine(const WeightedGraph& g, std::span<int> part, int nparts,
                       std::span<const std::int64_t> caps, int max_passes = 8);

/// Moves vertices out of parts heavier than their cap, cheapest cut increase
/// first. When caps cannot be met it falls back to
/// max(cap, ceil(target) + max_vertex_weight - 1), which is always reachable.
/// Returns true when every part ends within `caps`.
bool rebalance(const WeightedGraph& g, std::span<int> part, int nparts,
               std::span<const std::int64_t> caps, std::span<const double> targets);

/// Recursive bisection by greedy graph growing, each cut polished with
/// two-way FM. Part weights aim at total / nparts.
std::vector<int> initial_partition(const WeightedGraph& g, int nparts, double tolerance,
                                   std::mt19937_64& rng);

}  // namespace latdecomp::multilevel
