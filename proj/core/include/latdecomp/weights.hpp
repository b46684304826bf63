// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "latdecomp/geometry.hpp"

namespace latdecomp {

/// Relative update cost per site type, normalized so that Bulk == 10.
struct FittedCosts {
  std::array<double, kSiteTypeCount> cost{10.0, 10.0, 10.0, 10.0};
  /// Types whose least-squares coefficient came out non-positive and were
  /// pinned to a small floor before re-solving.
  std::vector<SiteType> clamped;
  /// Types absent from every observation; their cost is borrowed (see fit_costs).
  std::vector<SiteType> unobserved;
  /// Root-mean-square relative residual of the fit, 0 for exact systems.
  double relative_rms_residual = 0.0;

  double operator[](SiteType t) const noexcept { return cost[index_of(t)]; }
  bool degenerate() const noexcept { return !clamped.empty(); }

  static FittedCosts from_values(double bulk, double wall, double inout, double wallinout);
};

/// Integer vertex weights handed to the partitioner.
struct WeightTable {
  std::array<int, kSiteTypeCount> weight{1, 1, 1, 1};

  int operator[](SiteType t) const noexcept { return weight[index_of(t)]; }
  static WeightTable unit() noexcept { return WeightTable{}; }

  friend bool operator==(const WeightTable&, const WeightTable&) = default;
};

struct BenchmarkObservation {
  SiteTypeCounts counts{};
  double runtime_s = 0.0;
};

/// Least-squares fit of runtime ~ sum_type count * cost, rescaled so that
/// Bulk == 10. Coefficients that come out non-positive are pinned to
/// 1e-3 of the bulk cost, dropped from the system and the rest re-solved;
/// they are listed in `clamped`. A type never observed borrows a cost
/// (WallInOutlet from InOutlet, anything else from Bulk) and is listed in
/// `unobserved`. Throws UnderdeterminedFitError when the observed types are
/// not identifiable (too few observations or rank-deficient counts).
FittedCosts fit_costs(std::span<const BenchmarkObservation> observations);

/// Scales costs so Bulk == base and rounds each to the nearest power of two
/// (ties upward, minimum 1). WallInOutlet always takes the InOutlet weight.
/// `base` must be a power of two.
WeightTable round_costs(const FittedCosts& costs, int base = 4);

std::vector<int> assign_weights(const Geometry& g, const WeightTable& w);
/// Per-site real costs in site order.
std::vector<double> assign_costs(const Geometry& g, const FittedCosts& c);

// Text formats: weight/cost files hold four "type=value" lines; observation
// CSVs have the header bulk,wall,inout,wallinout,runtime_s.
void write_weight_table(std::ostream& out, const WeightTable& w);
WeightTable read_weight_table(std::istream& in);
void write_costs(std::ostream& out, const FittedCosts& c);
FittedCosts read_costs(std::istream& in);
void write_observations(std::ostream& out, std::span<const BenchmarkObservation> obs);
std::vector<BenchmarkObservation> read_observations(std::istream& in);

WeightTable load_weight_table(const std::filesystem::path& path);
FittedCosts load_costs(const std::filesystem::path& path);
std::vector<BenchmarkObservation> load_observations(const std::filesystem::path& path);

}  // namespace latdecomp
