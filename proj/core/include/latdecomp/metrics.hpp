// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latdecomp/graph.hpp"
#include "latdecomp/weights.hpp"

namespace latdecomp {

/// Latency/bandwidth cost of one halo exchange.
struct CommModel {
  double alpha = 0.0;  ///< seconds per message
  double beta = 0.0;   ///< seconds per byte
  int bytes_per_link = 8;
};

struct LoadReport {
  std::vector<double> part_loads;
  double imbalance = 1.0;  ///< max / mean
  bool has_empty_part = false;
};

struct CommProfile {
  std::vector<std::int64_t> volume;  ///< cut links incident to each part
  std::vector<int> partners;         ///< distinct neighbouring parts
};

struct DecompositionMetrics {
  std::int64_t edge_cut = 0;
  std::vector<double> part_loads;
  double load_imbalance = 1.0;
  bool has_empty_part = false;
  std::vector<std::int64_t> comm_volume;
  std::vector<int> comm_partners;
  double predicted_step_time = 0.0;

  std::int64_t max_comm_volume() const noexcept;
  int max_partners() const noexcept;
};

/// Undirected edges whose endpoints lie in different parts. Throws
/// PartitionError on size mismatch or a part id outside [0, nparts).
std::int64_t edge_cut(const LatticeGraph& graph, std::span<const int> assignment, int nparts);

/// Sums `site_loads` per part. Throws PartitionError when nparts < 1 or the
/// assignment is malformed.
LoadReport load_imbalance(std::span<const int> assignment, std::span<const double> site_loads,
                          int nparts);

CommProfile comm_profile(const LatticeGraph& graph, std::span<const int> assignment, int nparts);

/// Bulk-synchronous step time: the slowest part's
/// site_time * part_cost / 10 + partners * alpha + volume * bytes_per_link * beta.
/// `part_costs` are sums of per-site costs on the Bulk == 10 scale.
double simulate_timeline(std::span<const double> part_costs, const CommProfile& comm,
                         const CommModel& model, double site_time);

/// Percentage of the baseline excess (imbalance - 1) removed; 0 when the
/// baseline is already balanced.
double imbalance_reduction(double baseline, double improved) noexcept;

/// Every metric for one partition. Loads are measured with `costs`, so
/// partitions built from different weights are compared on equal terms.
DecompositionMetrics compute_metrics(const Geometry& g, const LatticeGraph& graph,
                                     std::span<const int> assignment, int nparts,
                                     const FittedCosts& costs, const CommModel& model,
                                     double site_time);

inline constexpr std::string_view kMetricsCsvHeader =
    "variant,nparts,seed,edge_cut,load_imbalance,max_comm_volume,max_partners,"
    "predicted_step_time_s";

std::string metrics_csv_row(std::string_view variant, int nparts, std::uint64_t seed,
                            const DecompositionMetrics& m);

}  // namespace latdecomp
