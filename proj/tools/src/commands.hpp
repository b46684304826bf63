// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latdecomp/geometry.hpp"
#include "latdecomp/metrics.hpp"
#include "latdecomp/partition.hpp"
#include "latdecomp/site_costs.hpp"
#include "latdecomp/weights.hpp"

namespace latdecomp::cli {

/// Synthetic bifurcation used by the experiment defaults: about 4.7e4 sites,
/// fluid fraction near 0.1 and roughly 40% non-bulk sites.
BifurcationSpec reference_bifurcation();

struct GenConfig {
  std::string kind = "bifurcation";  ///< bifurcation, cylinder, channel, box
  BifurcationSpec bifurcation = reference_bifurcation();
  double radius = 8.0;
  int length = 64;
  int width = 32;
  double wall_q = 0.5;
  std::filesystem::path out;
};

Geometry generate(const GenConfig& cfg);

struct CalibrationConfig {
  /// When set, fit these observations instead of timing the kernel.
  std::optional<std::filesystem::path> observations;
  int sites_per_cylinder = 25000;
  SiteCostOptions timing;
  int base = 4;
  std::filesystem::path out_dir = ".";
};

struct CalibrationResult {
  std::vector<BenchmarkObservation> observations;
  FittedCosts costs;
  WeightTable weights;
};

/// Fits and writes costs.txt, weights.txt and, when timing was run,
/// observations.csv into out_dir. A summary goes to `log`.
CalibrationResult run_calibration(const CalibrationConfig& cfg, std::ostream& log);

enum class Variant { Baseline, Weights, Sfc, WeightsSfc };

std::string_view variant_label(Variant v) noexcept;
/// Parses "baseline", "weights", "sfc" or "weights+sfc"; throws Error otherwise.
Variant parse_variant(std::string_view s);

struct ExperimentConfig {
  std::filesystem::path geometry;
  std::vector<int> nparts;
  std::vector<Variant> variants{Variant::Baseline, Variant::Weights, Variant::Sfc,
                                Variant::WeightsSfc};
  /// Weights for the weighted variants; (4, 8, 16, 16) when unset.
  std::optional<WeightTable> weights;
  /// Cost model the loads are measured with. Derived from the weights
  /// (scaled so Bulk == 10) when unset.
  std::optional<FittedCosts> costs;
  double tolerance = 1.001;
  std::uint64_t seed = 0;
  CommModel comm;
  double site_time = 1e-7;
  int threads = 1;
  std::optional<std::filesystem::path> out_dir;
  bool dump_partitions = false;
};

struct ExperimentRow {
  Variant variant = Variant::Baseline;
  int nparts = 0;
  std::uint64_t seed = 0;
  std::optional<DecompositionMetrics> metrics;
  std::string error;
  std::vector<int> assignment;
};

/// Every (nparts, variant) pair in configuration order. Rows may run on up
/// to cfg.threads workers; a failing row records its error and the rest go on.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, const Geometry& g);

void write_metrics_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
/// Per nparts: imbalance reduction and edge-cut change of each variant
/// relative to the baseline row.
void write_summary(std::ostream& out, const std::vector<ExperimentRow>& rows);

/// Table of one or more metrics CSVs with a reduction column. Throws
/// SchemaError when a file lacks a required column.
void report(const std::vector<std::filesystem::path>& csvs, std::ostream& out);
void report(const std::vector<std::string>& csv_texts, std::ostream& out);

/// Worker count: min(requested, LATTICE_DECOMP_THREADS) when the variable
/// holds a positive integer, otherwise `requested`.
int worker_count(int requested);

}  // namespace latdecomp::cli
