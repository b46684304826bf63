// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "latdecomp/geometry.hpp"
#include "latdecomp/weights.hpp"

namespace latdecomp {

struct SiteCostOptions {
  int warmup_steps = 5;
  /// Steps per timed window.
  int measure_steps = 4;
  /// Timed sweeps over all geometries.
  int repeats = 25;
  double tau = 0.8;
};

/// Six cylinders with diameter:length ratios spaced geometrically from 1:8
/// to 8:1, each holding roughly `sites_per_cylinder` fluid sites.
std::vector<Geometry> calibration_cylinders(int sites_per_cylinder = 25000);

/// Times the single-threaded kernel on each geometry and pairs the site-type
/// counts with the wall-clock time of one measured window. Windows are taken
/// in sweeps over all geometries; the reported time is the median share of
/// a sweep times the median sweep duration. Throws
/// UnreliableMeasurementError when the window has no steps or lasts less
/// than 100 ticks of the steady clock.
std::vector<BenchmarkObservation> measure_site_costs(const std::vector<Geometry>& geometries,
                                                     const SiteCostOptions& opts = {});

/// Smallest observable increment of std::chrono::steady_clock, in seconds.
double clock_granularity();

}  // namespace latdecomp
