// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "latdecomp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "latdecomp/errors.hpp"
#include "latdecomp/multilevel.hpp"
#include "latdecomp/sfc.hpp"

namespace latdecomp {

namespace {

using multilevel::WeightedGraph;

void validate(const PartitionConfig& cfg, std::size_t n) {
  if (cfg.nparts < 1) throw PartitionError("nparts must be >= 1");
  if (static_cast<std::size_t>(cfg.nparts) > n) {
    throw PartitionError("nparts (" + std::to_string(cfg.nparts) + ") exceeds vertex count (" +
                         std::to_string(n) + ")");
  }
  if (!(cfg.tolerance > 1.0 && cfg.tolerance <= 2.0)) {
    throw PartitionError("tolerance must lie in (1, 2]");
  }
  if (cfg.coarsen_target < 0) throw PartitionError("coarsen target must be non-negative");
}

// Gives every empty part one vertex from the part holding the most vertices,
// choosing the vertex least connected to its own part.
void fill_empty_parts(const WeightedGraph& g, std::vector<int>& part, int nparts) {
  for (int p = 0; p < nparts; ++p) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(nparts), 0);
    for (int a : part) ++counts[static_cast<std::size_t>(a)];
    if (counts[static_cast<std::size_t>(p)] > 0) continue;
    const int donor = static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                                       counts.begin());
    std::int32_t pick = -1;
    std::int64_t pick_conn = 0;
    for (std::int32_t v = 0; v < g.size(); ++v) {
      if (part[v] != donor) continue;
      std::int64_t own = 0;
      for (auto e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
        if (part[g.adjncy[e]] == donor) own += g.adjwgt[e];
      }
      if (pick < 0 || own < pick_conn) {
        pick = v;
        pick_conn = own;
      }
    }
    part[pick] = p;
  }
}

struct MultilevelOutcome {
  std::vector<int> part;
  bool relaxed = false;
};

MultilevelOutcome run_multilevel(const WeightedGraph& fine, const PartitionConfig& cfg,
                                 std::vector<int> labels) {
  const int k = cfg.nparts;
  std::mt19937_64 rng(cfg.seed);
  const std::int64_t total = fine.total_weight();
  const double avg = static_cast<double>(total) / k;
  const int target = cfg.effective_coarsen_target();

  std::vector<multilevel::CoarseLevel> levels;
  auto current = [&]() -> const WeightedGraph& { return levels.empty() ? fine : levels.back().graph; };
  const std::int64_t coarse_max_vw =
      std::max<std::int64_t>(fine.max_vertex_weight(),
                             static_cast<std::int64_t>(1.5 * static_cast<double>(total) / target));
  while (current().size() > target) {
    const auto& cur_labels = levels.empty() ? labels : levels.back().labels;
    auto next = multilevel::coarsen_once(current(), coarse_max_vw, rng, cur_labels);
    if (next.graph.size() >= static_cast<std::int32_t>(0.95 * current().size())) break;
    levels.push_back(std::move(next));
  }

  std::vector<int> part;
  if (labels.empty()) {
    part = multilevel::initial_partition(current(), k, cfg.tolerance, rng);
  } else {
    part = levels.empty() ? labels : levels.back().labels;
  }

  MultilevelOutcome out;
  std::int64_t base_cap = balance_cap(total, k, cfg.tolerance);
  if (fine.max_vertex_weight() > base_cap) {
    base_cap = fine.max_vertex_weight();
    out.relaxed = true;
  }
  const std::vector<double> targets(static_cast<std::size_t>(k), avg);
  const auto avg_ceil = static_cast<std::int64_t>(std::ceil(avg));

  for (std::size_t level = levels.size() + 1; level-- > 0;) {
    const WeightedGraph& g = level == 0 ? fine : levels[level - 1].graph;
    const std::int64_t cap =
        level == 0 ? base_cap : std::max(base_cap, avg_ceil + g.max_vertex_weight() - 1);
    const std::vector<std::int64_t> caps(static_cast<std::size_t>(k), cap);
    multilevel::rebalance(g, part, k, caps, targets);
    multilevel::fm_refine(g, part, k, caps);
    if (level > 0) {
      const auto& map = levels[level - 1].fine_to_coarse;
      std::vector<int> finer(map.size());
      for (std::size_t u = 0; u < map.size(); ++u) finer[u] = part[static_cast<std::size_t>(map[u])];
      part = std::move(finer);
    }
  }
  fill_empty_parts(fine, part, k);
  out.part = std::move(part);
  return out;
}

Partition trivial(std::size_t n, const PartitionConfig& cfg) {
  Partition p;
  p.assignment.assign(n, 0);
  p.nparts = 1;
  p.config = cfg;
  return p;
}

}  // namespace

std::string_view variant_name(PartitionVariant v) noexcept {
  switch (v) {
    case PartitionVariant::BlockSeed: return "blockseed";
    case PartitionVariant::KWay: return "kway";
    case PartitionVariant::GeomKWay: return "geomkway";
  }
  return "?";
}

std::int64_t balance_cap(std::int64_t total_weight, int nparts, double tolerance) {
  const double avg = static_cast<double>(total_weight) / nparts;
  return std::max(static_cast<std::int64_t>(std::floor(tolerance * avg + 1e-9)),
                  static_cast<std::int64_t>(std::ceil(avg)));
}

std::vector<int> weighted_segments(std::span<const std::int64_t> ordered_weights, int nparts) {
  const std::size_t m = ordered_weights.size();
  if (nparts < 1 || static_cast<std::size_t>(nparts) > m) {
    throw PartitionError("cannot cut " + std::to_string(m) + " items into " +
                         std::to_string(nparts) + " segments");
  }
  const double total = static_cast<double>(
      std::accumulate(ordered_weights.begin(), ordered_weights.end(), std::int64_t{0}));
  std::vector<int> out(m, 0);
  double prefix = 0.0;
  int prev = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = static_cast<double>(ordered_weights[i]);
    int p = static_cast<int>(std::floor(nparts * (prefix + 0.5 * w) / total));
    p = std::clamp(p, prev, std::min(prev + 1, nparts - 1));
    if (i == 0) p = 0;
    // Leave at least one item for every part still to come.
    const auto must_reach = static_cast<std::int64_t>(nparts) - static_cast<std::int64_t>(m - i);
    p = std::max<int>(p, static_cast<int>(must_reach));
    out[i] = p;
    prev = p;
    prefix += w;
  }
  return out;
}

Partition block_seed_partition(const Geometry& g, int nparts, std::span<const int> weights) {
  if (nparts < 1) throw PartitionError("nparts must be >= 1");
  if (!weights.empty() && weights.size() != g.size()) {
    throw PartitionError("weight vector length does not match site count");
  }
  const std::uint32_t bs = g.block_size();
  const auto& dims = g.dims();
  const std::array<std::uint64_t, 3> nb{(dims[0] + bs - 1) / bs, (dims[1] + bs - 1) / bs,
                                        (dims[2] + bs - 1) / bs};
  auto block_of = [&](const Coord& c) {
    return (static_cast<std::uint64_t>(c.z / bs) * nb[1] + c.y / bs) * nb[0] + c.x / bs;
  };

  // Non-empty blocks in raster order with their weights.
  std::vector<std::uint64_t> block_ids;
  block_ids.reserve(g.size());
  for (const auto& s : g.sites()) block_ids.push_back(block_of(s.coord));
  std::vector<std::uint64_t> blocks = block_ids;
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  if (static_cast<std::size_t>(nparts) > blocks.size()) {
    throw InfeasibleSeedError(std::to_string(nparts) + " parts requested but only " +
                              std::to_string(blocks.size()) + " non-empty blocks");
  }
  std::vector<std::int64_t> block_weight(blocks.size(), 0);
  std::vector<std::size_t> site_block(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto it = std::lower_bound(blocks.begin(), blocks.end(), block_ids[i]);
    site_block[i] = static_cast<std::size_t>(it - blocks.begin());
    block_weight[site_block[i]] += weights.empty() ? 1 : weights[i];
  }
  const auto block_part = weighted_segments(block_weight, nparts);

  Partition p;
  p.nparts = nparts;
  p.config.nparts = nparts;
  p.config.variant = PartitionVariant::BlockSeed;
  p.assignment.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) p.assignment[i] = block_part[site_block[i]];
  return p;
}

Partition partition_kway(const LatticeGraph& graph, const PartitionConfig& cfg) {
  validate(cfg, graph.vertex_count());
  if (cfg.nparts == 1) return trivial(graph.vertex_count(), cfg);
  const auto outcome = run_multilevel(multilevel::from_lattice(graph), cfg, {});
  Partition p;
  p.assignment = outcome.part;
  p.nparts = cfg.nparts;
  p.config = cfg;
  p.balance_relaxed = outcome.relaxed;
  return p;
}

Partition partition_geom_kway(const LatticeGraph& graph, const PartitionConfig& cfg) {
  validate(cfg, graph.vertex_count());
  if (cfg.nparts == 1) return trivial(graph.vertex_count(), cfg);
  const std::size_t n = graph.vertex_count();
  if (graph.coords.size() != n) throw PartitionError("geometric partitioning needs coordinates");

  std::vector<MortonKey> keys(n);
  for (std::size_t v = 0; v < n; ++v) keys[v] = morton_encode(graph.coords[v]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
  });
  std::vector<std::int64_t> ordered(n);
  for (std::size_t i = 0; i < n; ++i) ordered[i] = graph.vertex_weights[order[i]];
  const auto segment = weighted_segments(ordered, cfg.nparts);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[order[i]] = segment[i];

  const auto outcome = run_multilevel(multilevel::from_lattice(graph), cfg, std::move(labels));
  Partition p;
  p.assignment = outcome.part;
  p.nparts = cfg.nparts;
  p.config = cfg;
  p.balance_relaxed = outcome.relaxed;
  return p;
}

Partition partition(const Geometry& g, const LatticeGraph& graph, const PartitionConfig& cfg) {
  switch (cfg.variant) {
    case PartitionVariant::BlockSeed: {
      if (graph.vertex_count() != g.size()) throw PartitionError("graph and geometry differ in size");
      std::vector<int> w(graph.vertex_weights.begin(), graph.vertex_weights.end());
      auto p = block_seed_partition(g, cfg.nparts, w);
      p.config = cfg;
      return p;
    }
    case PartitionVariant::KWay: return partition_kway(graph, cfg);
    case PartitionVariant::GeomKWay: return partition_geom_kway(graph, cfg);
  }
  throw PartitionError("unknown partition variant");
}

void write_partition_csv(std::ostream& out, std::span<const int> assignment) {
  out << "site_index,part\n";
  for (std::size_t i = 0; i < assignment.size(); ++i) out << i << ',' << assignment[i] << '\n';
}

}  // namespace latdecomp
