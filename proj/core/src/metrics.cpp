// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "latdecomp/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "latdecomp/errors.hpp"

namespace latdecomp {

namespace {

void check_assignment(std::span<const int> assignment, std::size_t n, int nparts) {
  if (nparts < 1) throw PartitionError("nparts must be >= 1");
  if (assignment.size() != n) {
    throw PartitionError("assignment has " + std::to_string(assignment.size()) +
                         " entries for " + std::to_string(n) + " vertices");
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (assignment[v] < 0 || assignment[v] >= nparts) {
      throw PartitionError("vertex " + std::to_string(v) + " has part id " +
                           std::to_string(assignment[v]) + " outside [0, " +
                           std::to_string(nparts) + ")");
    }
  }
}

}  // namespace

std::int64_t DecompositionMetrics::max_comm_volume() const noexcept {
  return comm_volume.empty() ? 0 : *std::max_element(comm_volume.begin(), comm_volume.end());
}

int DecompositionMetrics::max_partners() const noexcept {
  return comm_partners.empty() ? 0
                               : *std::max_element(comm_partners.begin(), comm_partners.end());
}

std::int64_t edge_cut(const LatticeGraph& graph, std::span<const int> assignment, int nparts) {
  check_assignment(assignment, graph.vertex_count(), nparts);
  std::int64_t cut = 0;
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    for (auto u : graph.neighbours_of(v)) {
      if (static_cast<std::size_t>(u) > v && assignment[v] != assignment[u]) ++cut;
    }
  }
  return cut;
}

LoadReport load_imbalance(std::span<const int> assignment, std::span<const double> site_loads,
                          int nparts) {
  check_assignment(assignment, site_loads.size(), nparts);
  LoadReport r;
  r.part_loads.assign(static_cast<std::size_t>(nparts), 0.0);
  std::vector<std::size_t> members(static_cast<std::size_t>(nparts), 0);
  for (std::size_t i = 0; i < site_loads.size(); ++i) {
    r.part_loads[static_cast<std::size_t>(assignment[i])] += site_loads[i];
    ++members[static_cast<std::size_t>(assignment[i])];
  }
  r.has_empty_part = std::find(members.begin(), members.end(), 0) != members.end();
  const double total = std::accumulate(r.part_loads.begin(), r.part_loads.end(), 0.0);
  const double mx = *std::max_element(r.part_loads.begin(), r.part_loads.end());
  r.imbalance = total > 0.0 ? mx * nparts / total : 1.0;
  return r;
}

CommProfile comm_profile(const LatticeGraph& graph, std::span<const int> assignment, int nparts) {
  check_assignment(assignment, graph.vertex_count(), nparts);
  const auto k = static_cast<std::size_t>(nparts);
  CommProfile p;
  p.volume.assign(k, 0);
  p.partners.assign(k, 0);
  std::vector<std::vector<int>> adjacent(k);
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    const int a = assignment[v];
    for (auto u : graph.neighbours_of(v)) {
      const int b = assignment[u];
      if (a == b) continue;
      ++p.volume[static_cast<std::size_t>(a)];
      adjacent[static_cast<std::size_t>(a)].push_back(b);
    }
  }
  for (std::size_t q = 0; q < k; ++q) {
    auto& list = adjacent[q];
    std::sort(list.begin(), list.end());
    p.partners[q] = static_cast<int>(std::unique(list.begin(), list.end()) - list.begin());
  }
  return p;
}

double simulate_timeline(std::span<const double> part_costs, const CommProfile& comm,
                         const CommModel& model, double site_time) {
  double worst = 0.0;
  for (std::size_t q = 0; q < part_costs.size(); ++q) {
    const double compute = site_time * (part_costs[q] / 10.0);
    double exchange = 0.0;
    if (q < comm.partners.size()) exchange += comm.partners[q] * model.alpha;
    if (q < comm.volume.size()) {
      exchange += static_cast<double>(comm.volume[q]) * model.bytes_per_link * model.beta;
    }
    worst = std::max(worst, compute + exchange);
  }
  return worst;
}

double imbalance_reduction(double baseline, double improved) noexcept {
  if (baseline == 1.0) return 0.0;
  return 100.0 * ((baseline - 1.0) - (improved - 1.0)) / (baseline - 1.0);
}

DecompositionMetrics compute_metrics(const Geometry& g, const LatticeGraph& graph,
                                     std::span<const int> assignment, int nparts,
                                     const FittedCosts& costs, const CommModel& model,
                                     double site_time) {
  if (g.size() != graph.vertex_count()) {
    throw PartitionError("geometry and graph differ in size");
  }
  const auto site_costs = assign_costs(g, costs);
  DecompositionMetrics m;
  m.edge_cut = edge_cut(graph, assignment, nparts);
  auto loads = load_imbalance(assignment, site_costs, nparts);
  m.part_loads = std::move(loads.part_loads);
  m.load_imbalance = loads.imbalance;
  m.has_empty_part = loads.has_empty_part;
  auto comm = comm_profile(graph, assignment, nparts);
  m.predicted_step_time = simulate_timeline(m.part_loads, comm, model, site_time);
  m.comm_volume = std::move(comm.volume);
  m.comm_partners = std::move(comm.partners);
  return m;
}

std::string metrics_csv_row(std::string_view variant, int nparts, std::uint64_t seed,
                            const DecompositionMetrics& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, ",%d,%llu,%lld,%.6f,%lld,%d,%.6e", nparts,
                static_cast<unsigned long long>(seed), static_cast<long long>(m.edge_cut),
                m.load_imbalance, static_cast<long long>(m.max_comm_volume()),
                m.max_partners(), m.predicted_step_time);
  return std::string(variant) + buf;
}

}  // namespace latdecomp
