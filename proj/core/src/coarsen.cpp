// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>

#include "latdecomp/multilevel.hpp"

namespace latdecomp::multilevel {

std::int64_t WeightedGraph::total_weight() const noexcept {
  return std::accumulate(vwgt.begin(), vwgt.end(), std::int64_t{0});
}

std::int64_t WeightedGraph::max_vertex_weight() const noexcept {
  return vwgt.empty() ? 0 : *std::max_element(vwgt.begin(), vwgt.end());
}

WeightedGraph from_lattice(const LatticeGraph& g) {
  WeightedGraph out;
  out.xadj = g.offsets;
  out.adjncy = g.neighbours;
  out.adjwgt.assign(g.neighbours.size(), 1);
  out.vwgt = g.vertex_weights;
  return out;
}

WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const std::int32_t> vertices) {
  std::vector<std::int32_t> local(static_cast<std::size_t>(g.size()), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    local[static_cast<std::size_t>(vertices[i])] = static_cast<std::int32_t>(i);
  }
  WeightedGraph out;
  out.vwgt.reserve(vertices.size());
  for (auto v : vertices) {
    for (auto e = g.xadj[v]; e < g.xadj[v + 1]; ++e) {
      const auto u = local[static_cast<std::size_t>(g.adjncy[e])];
      if (u < 0) continue;
      out.adjncy.push_back(u);
      out.adjwgt.push_back(g.adjwgt[e]);
    }
    out.xadj.push_back(static_cast<std::int64_t>(out.adjncy.size()));
    out.vwgt.push_back(g.vwgt[v]);
  }
  return out;
}

CoarseLevel coarsen_once(const WeightedGraph& g, std::int64_t max_vertex_weight,
                         std::mt19937_64& rng, std::span<const int> labels) {
  const auto n = static_cast<std::size_t>(g.size());
  std::vector<std::int32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates on the raw engine output keeps the order portable.
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }

  std::vector<std::int32_t> match(n, -1);
  for (auto u : order) {
    if (match[u] >= 0) continue;
    std::int32_t best = -1;
    std::int64_t best_w = -1;
    for (auto e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
      const auto v = g.adjncy[e];
      if (v == u || match[v] >= 0) continue;
      if (!labels.empty() && labels[u] != labels[v]) continue;
      if (g.vwgt[u] + g.vwgt[v] > max_vertex_weight) continue;
      if (g.adjwgt[e] > best_w || (g.adjwgt[e] == best_w && v < best)) {
        best = v;
        best_w = g.adjwgt[e];
      }
    }
    if (best < 0) {
      match[u] = u;
    } else {
      match[u] = best;
      match[best] = u;
    }
  }

  CoarseLevel level;
  level.fine_to_coarse.assign(n, -1);
  std::int32_t nc = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (level.fine_to_coarse[u] >= 0) continue;
    level.fine_to_coarse[u] = nc;
    level.fine_to_coarse[static_cast<std::size_t>(match[u])] = nc;
    ++nc;
  }

  // Members of each coarse vertex in ascending fine order.
  std::vector<std::int32_t> first(static_cast<std::size_t>(nc), -1);
  std::vector<std::int32_t> second(static_cast<std::size_t>(nc), -1);
  for (std::size_t u = 0; u < n; ++u) {
    const auto c = static_cast<std::size_t>(level.fine_to_coarse[u]);
    if (first[c] < 0) {
      first[c] = static_cast<std::int32_t>(u);
    } else {
      second[c] = static_cast<std::int32_t>(u);
    }
  }

  WeightedGraph& cg = level.graph;
  cg.vwgt.assign(static_cast<std::size_t>(nc), 0);
  cg.xadj.reserve(static_cast<std::size_t>(nc) + 1);
  cg.adjncy.reserve(g.adjncy.size() / 2);
  cg.adjwgt.reserve(g.adjncy.size() / 2);
  if (!labels.empty()) level.labels.assign(static_cast<std::size_t>(nc), 0);

  // slot[c] = position of coarse neighbour c in the row being assembled
  std::vector<std::int64_t> slot(static_cast<std::size_t>(nc), -1);
  for (std::int32_t c = 0; c < nc; ++c) {
    const auto row_start = static_cast<std::int64_t>(cg.adjncy.size());
    for (auto u : {first[c], second[c]}) {
      if (u < 0) continue;
      cg.vwgt[c] += g.vwgt[u];
      if (!labels.empty()) level.labels[c] = labels[u];
      for (auto e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
        const auto cv = level.fine_to_coarse[static_cast<std::size_t>(g.adjncy[e])];
        if (cv == c) continue;
        auto& s = slot[static_cast<std::size_t>(cv)];
        if (s < row_start) {
          s = static_cast<std::int64_t>(cg.adjncy.size());
          cg.adjncy.push_back(cv);
          cg.adjwgt.push_back(g.adjwgt[e]);
        } else {
          cg.adjwgt[static_cast<std::size_t>(s)] += g.adjwgt[e];
        }
      }
    }
    cg.xadj.push_back(static_cast<std::int64_t>(cg.adjncy.size()));
  }
  return level;
}

std::int64_t edge_cut(const WeightedGraph& g, std::span<const int> part) {
  std::int64_t cut = 0;
  for (std::int32_t u = 0; u < g.size(); ++u) {
    for (auto e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
      if (part[u] != part[g.adjncy[e]]) cut += g.adjwgt[e];
    }
  }
  return cut / 2;
}

std::vector<std::int64_t> part_weights(const WeightedGraph& g, std::span<const int> part,
                                       int nparts) {
  std::vector<std::int64_t> w(static_cast<std::size_t>(nparts), 0);
  for (std::int32_t u = 0; u < g.size(); ++u) w[static_cast<std::size_t>(part[u])] += g.vwgt[u];
  return w;
}

}  // namespace latdecomp::multilevel
