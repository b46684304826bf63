// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "latdecomp/errors.hpp"
#include "latdecomp/site_costs.hpp"
#include "latdecomp/weights.hpp"
#include "oracles.hpp"

namespace latdecomp {
namespace {

constexpr std::array<double, 4> kTruth{10.0, 20.0, 40.0, 23.0};

std::vector<SiteTypeCounts> cylinder_counts() {
  std::vector<SiteTypeCounts> counts;
  for (const auto& g : calibration_cylinders(6000)) counts.push_back(g.type_counts());
  return counts;
}

BenchmarkObservation obs(std::size_t b, std::size_t w, std::size_t io, std::size_t wio,
                         const std::array<double, 4>& costs = kTruth) {
  BenchmarkObservation o;
  o.counts = {b, w, io, wio};
  o.runtime_s = 1e-9 * (b * costs[0] + w * costs[1] + io * costs[2] + wio * costs[3]);
  return o;
}

TEST(FitCosts, ExactRecoveryFromIndependentCounts) {
  const std::vector<BenchmarkObservation> o{obs(100, 10, 5, 1), obs(50, 40, 3, 2),
                                            obs(10, 5, 60, 7), obs(30, 30, 30, 40)};
  const auto c = fit_costs(o);
  for (std::size_t t = 0; t < 4; ++t) EXPECT_NEAR(c.cost[t], kTruth[t], 1e-9);
  EXPECT_FALSE(c.degenerate());
  EXPECT_TRUE(c.unobserved.empty());
  EXPECT_LT(c.relative_rms_residual, 1e-12);
}

TEST(FitCosts, NoisyCylindersMatchNormalEquations) {
  const auto counts = cylinder_counts();
  std::mt19937_64 rng(3);
  const auto o = oracle::synthetic_observations(counts, kTruth, 0.02, rng);
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (const auto& x : o) {
    a.push_back({double(x.counts[0]), double(x.counts[1]), double(x.counts[2]),
                 double(x.counts[3])});
    b.push_back(x.runtime_s);
  }
  const auto ref = oracle::normal_equations(a, b);
  const auto c = fit_costs(o);
  ASSERT_FALSE(c.degenerate());
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_NEAR(c.cost[t], ref[t] * 10.0 / ref[0], 1e-6 * c.cost[t]) << t;
  }
  for (std::size_t t = 0; t < 4; ++t) EXPECT_NEAR(c.cost[t], kTruth[t], 0.1 * kTruth[t]) << t;
}

TEST(FitCosts, CylinderCountsHaveFullRank) {
  const auto counts = cylinder_counts();
  ASSERT_EQ(counts.size(), 6u);
  std::vector<std::vector<double>> a;
  for (const auto& c : counts) a.push_back({double(c[0]), double(c[1]), double(c[2]), double(c[3])});
  // The oracle's elimination throws on a singular Gram matrix.
  EXPECT_NO_THROW(oracle::normal_equations(a, std::vector<double>(6, 1.0)));
}

TEST(FitCosts, ScaleEquivariant) {
  const auto counts = cylinder_counts();
  std::mt19937_64 rng(4);
  auto o = oracle::synthetic_observations(counts, kTruth, 0.01, rng);
  const auto base = fit_costs(o);
  for (auto& x : o) x.runtime_s *= 37.5;
  const auto scaled = fit_costs(o);
  for (std::size_t t = 0; t < 4; ++t) EXPECT_NEAR(scaled.cost[t], base.cost[t], 1e-9);
}

TEST(FitCosts, TooFewObservationsIsUnderdetermined) {
  const std::vector<BenchmarkObservation> o{obs(100, 10, 5, 1), obs(50, 40, 3, 2)};
  EXPECT_THROW(fit_costs(o), UnderdeterminedFitError);
}

TEST(FitCosts, DependentColumnsAreUnderdetermined) {
  // Wall count always twice the bulk count.
  const std::vector<BenchmarkObservation> o{obs(10, 20, 5, 1), obs(20, 40, 3, 2),
                                            obs(30, 60, 9, 4), obs(40, 80, 1, 8)};
  EXPECT_THROW(fit_costs(o), UnderdeterminedFitError);
}

TEST(FitCosts, NegativeCoefficientIsClampedAndReported) {
  std::vector<BenchmarkObservation> o{obs(100, 10, 5, 1), obs(50, 40, 3, 2), obs(10, 5, 60, 7),
                                      obs(30, 30, 30, 40)};
  // Runtimes consistent with a negative wall-in/outlet cost.
  const std::array<double, 4> odd{10.0, 20.0, 40.0, -30.0};
  for (auto& x : o) {
    x = obs(x.counts[0], x.counts[1], x.counts[2], x.counts[3], odd);
  }
  const auto c = fit_costs(o);
  ASSERT_TRUE(c.degenerate());
  EXPECT_EQ(c.clamped, std::vector<SiteType>{SiteType::WallInOutlet});
  EXPECT_GT(c[SiteType::WallInOutlet], 0.0);
  EXPECT_DOUBLE_EQ(c[SiteType::Bulk], 10.0);
}

TEST(FitCosts, UnobservedTypesBorrow) {
  const std::vector<BenchmarkObservation> o{obs(100, 10, 5, 0), obs(50, 40, 3, 0),
                                            obs(10, 5, 60, 0)};
  const auto c = fit_costs(o);
  EXPECT_EQ(c.unobserved, std::vector<SiteType>{SiteType::WallInOutlet});
  EXPECT_NEAR(c[SiteType::WallInOutlet], c[SiteType::InOutlet], 1e-12);
}

TEST(FitCosts, RejectsNonPositiveRuntime) {
  auto o = std::vector<BenchmarkObservation>{obs(1, 0, 0, 0)};
  o[0].runtime_s = 0.0;
  EXPECT_THROW(fit_costs(o), Error);
}

TEST(RoundCosts, TableOneColumns) {
  const WeightTable expected{{4, 8, 16, 16}};
  EXPECT_EQ(round_costs(FittedCosts::from_values(10.0, 18.708, 40.037, 22.700)), expected);
  EXPECT_EQ(round_costs(FittedCosts::from_values(10.0, 20.226, 37.398, 34.577)), expected);
  EXPECT_EQ(round_costs(FittedCosts::from_values(10, 10, 10, 10)), (WeightTable{{4, 4, 4, 4}}));
}

TEST(RoundCosts, NearestPowerOfTwoAfterScaling) {
  // Scaled values 4, 5.9 -> 4, 6.1 -> 8, 0.3 -> 1.
  const auto w = round_costs(FittedCosts::from_values(10.0, 14.75, 15.25, 0.75));
  EXPECT_EQ(w[SiteType::Bulk], 4);
  EXPECT_EQ(w[SiteType::Wall], 4);
  EXPECT_EQ(w[SiteType::InOutlet], 8);
  EXPECT_EQ(w[SiteType::WallInOutlet], 8);  // inherits the in/outlet weight
  EXPECT_EQ(round_costs(FittedCosts::from_values(10, 20, 40, 40), 1), (WeightTable{{1, 2, 4, 4}}));
  EXPECT_THROW(round_costs(FittedCosts{}, 3), Error);
}

TEST(RoundCosts, InvariantUnderScaling) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> cost(5.0, 80.0), scale(0.01, 100.0);
  for (int i = 0; i < 200; ++i) {
    const double b = cost(rng), w = cost(rng), io = cost(rng), wio = cost(rng);
    const double s = scale(rng);
    EXPECT_EQ(round_costs(FittedCosts::from_values(b, w, io, wio)),
              round_costs(FittedCosts::from_values(b * s, w * s, io * s, wio * s)));
  }
}

TEST(AssignWeights, LookupMatchesRecount) {
  const auto g = generate_cylinder(3.5, 9);
  const WeightTable w{{4, 8, 16, 32}};
  const auto weights = assign_weights(g, w);
  ASSERT_EQ(weights.size(), g.size());
  const std::map<SiteType, int> table{{SiteType::Bulk, 4},
                                      {SiteType::Wall, 8},
                                      {SiteType::InOutlet, 16},
                                      {SiteType::WallInOutlet, 32}};
  long long sum = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(weights[i], table.at(g.site(i).type));
    sum += weights[i];
  }
  const auto counts = g.type_counts();
  long long expected = 0;
  for (auto t : kAllSiteTypes) expected += static_cast<long long>(counts[index_of(t)]) * w[t];
  EXPECT_EQ(sum, expected);
}

TEST(AssignWeights, UniformTables) {
  const auto all_bulk = generate_periodic_box({3, 3, 3});
  for (int v : assign_weights(all_bulk, round_costs(FittedCosts::from_values(10, 18.7, 40, 22.7)))) {
    EXPECT_EQ(v, 4);
  }
  const auto g = generate_cylinder(2.0, 4);
  for (int v : assign_weights(g, WeightTable::unit())) EXPECT_EQ(v, 1);
}

TEST(WeightIo, Roundtrips) {
  const WeightTable w{{4, 8, 16, 16}};
  std::stringstream wt;
  write_weight_table(wt, w);
  EXPECT_EQ(read_weight_table(wt), w);

  const auto c = FittedCosts::from_values(10.0, 18.708, 40.037, 22.7);
  std::stringstream cs;
  write_costs(cs, c);
  EXPECT_EQ(read_costs(cs).cost, c.cost);

  const std::vector<BenchmarkObservation> o{obs(1, 2, 3, 4), obs(5, 6, 7, 8)};
  std::stringstream os;
  write_observations(os, o);
  const auto back = read_observations(os);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].counts, o[i].counts);
    EXPECT_EQ(back[i].runtime_s, o[i].runtime_s);
  }
}

TEST(WeightIo, MalformedInputIsSchemaError) {
  std::istringstream missing("bulk=4\nwall=8\n");
  EXPECT_THROW(read_weight_table(missing), SchemaError);
  std::istringstream fractional("bulk=4\nwall=8.5\ninout=16\nwallinout=16\n");
  EXPECT_THROW(read_weight_table(fractional), SchemaError);
  std::istringstream header("a,b\n1,2\n");
  EXPECT_THROW(read_observations(header), SchemaError);
}

}  // namespace
}  // namespace latdecomp
