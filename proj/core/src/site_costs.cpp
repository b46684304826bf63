// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "latdecomp/site_costs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>

#include "latdecomp/errors.hpp"
#include "latdecomp/lbkernel.hpp"

namespace latdecomp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

}  // namespace

std::vector<Geometry> calibration_cylinders(int sites_per_cylinder) {
  if (sites_per_cylinder < 100) throw Error("calibration cylinders need at least 100 sites");
  std::vector<Geometry> out;
  out.reserve(6);
  for (int i = 0; i < 6; ++i) {
    const double ratio = std::pow(8.0, (i - 2.5) / 2.5);  // diameter / length
    const double radius =
        std::cbrt(sites_per_cylinder * ratio / (2.0 * std::numbers::pi));
    const int length = std::max(2, static_cast<int>(std::lround(2.0 * radius / ratio)));
    out.push_back(generate_cylinder(radius, length));
  }
  return out;
}

double clock_granularity() {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 16; ++k) {
    const auto t0 = Clock::now();
    auto t1 = Clock::now();
    while (t1 == t0) t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

std::vector<BenchmarkObservation> measure_site_costs(const std::vector<Geometry>& geometries,
                                                     const SiteCostOptions& opts) {
  if (opts.measure_steps <= 0) {
    throw UnreliableMeasurementError("the measured window must contain at least one step");
  }
  if (opts.warmup_steps < 0 || opts.repeats < 1) {
    throw Error("warmup steps must be >= 0 and repeats >= 1");
  }
  const double floor_s = 100.0 * clock_granularity();
  std::vector<std::unique_ptr<LbSolver>> solvers;
  solvers.reserve(geometries.size());
  for (const auto& g : geometries) {
    BoundaryParams bc;
    for (const auto& plane : g.planes()) bc.iolets[plane.id] = {plane.id == 0 ? 1.0005 : 0.9995};
    solvers.push_back(std::make_unique<LbSolver>(g, bc, opts.tau));
    solvers.back()->run(opts.warmup_steps);
  }
  // Round-robin over the geometries. Each window is divided by the total of
  // its sweep so slow changes in machine speed cancel; the median share per
  // geometry is then scaled back by the median sweep time.
  const std::size_t m = solvers.size();
  std::vector<std::vector<double>> share(m);
  std::vector<double> sweep_totals;
  std::vector<double> fastest(m, std::numeric_limits<double>::infinity());
  for (int r = 0; r < opts.repeats; ++r) {
    std::vector<double> t(m);
    for (std::size_t k = 0; k < m; ++k) {
      const auto t0 = Clock::now();
      solvers[k]->run(opts.measure_steps);
      t[k] = seconds_since(t0);
      fastest[k] = std::min(fastest[k], t[k]);
    }
    const double total = std::accumulate(t.begin(), t.end(), 0.0);
    sweep_totals.push_back(total);
    for (std::size_t k = 0; k < m; ++k) share[k].push_back(t[k] / total);
  }
  const double sweep = median(sweep_totals);
  std::vector<double> best(m);
  for (std::size_t k = 0; k < m; ++k) best[k] = median(share[k]) * sweep;

  std::vector<BenchmarkObservation> out;
  out.reserve(geometries.size());
  for (std::size_t k = 0; k < geometries.size(); ++k) {
    if (fastest[k] < floor_s) {
      throw UnreliableMeasurementError(
          "timed window of " + std::to_string(fastest[k]) + " s is below 100 clock ticks (" +
          std::to_string(floor_s) + " s); increase the step count");
    }
    out.push_back({geometries[k].type_counts(), best[k]});
  }
  return out;
}

}  // namespace latdecomp
