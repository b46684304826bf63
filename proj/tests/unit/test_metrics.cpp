// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "latdecomp/errors.hpp"
#include "latdecomp/metrics.hpp"
#include "latdecomp/partition.hpp"
#include "oracles.hpp"

namespace latdecomp {
namespace {

TEST(EdgeCut, Examples) {
  const auto g = oracle::graph_from_edges(2, {{0, 1}});
  EXPECT_EQ(edge_cut(g, std::vector<int>{0, 0}, 1), 0);
  EXPECT_EQ(edge_cut(g, std::vector<int>{0, 1}, 2), 1);
  EXPECT_THROW(edge_cut(g, std::vector<int>{0, 2}, 2), PartitionError);
  EXPECT_THROW(edge_cut(g, std::vector<int>{0}, 2), PartitionError);
}

TEST(EdgeCut, MatchesPairwiseScan) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto edges = oracle::random_edges(50, 0.1, rng);
    const auto g = oracle::graph_from_edges(50, edges);
    std::uniform_int_distribution<int> part(0, 4);
    std::vector<int> a(50);
    for (auto& x : a) x = part(rng);
    EXPECT_EQ(edge_cut(g, a, 5), oracle::pairwise_edge_cut(50, edges, a));
  }
}

TEST(EdgeCut, InvariantUnderRelabelling) {
  std::mt19937_64 rng(22);
  const auto edges = oracle::random_edges(60, 0.08, rng);
  const auto g = oracle::graph_from_edges(60, edges);
  std::vector<int> a(60);
  std::uniform_int_distribution<int> part(0, 5);
  for (auto& x : a) x = part(rng);
  std::vector<int> perm(6);
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) b[i] = perm[static_cast<std::size_t>(a[i])];
    EXPECT_EQ(edge_cut(g, b, 6), edge_cut(g, a, 6));
  }
}

TEST(LoadImbalance, Examples) {
  EXPECT_DOUBLE_EQ(load_imbalance(std::vector<int>{0, 1}, std::vector<double>{5, 5}, 2).imbalance,
                   1.0);
  const auto r = load_imbalance(std::vector<int>{0, 1, 2}, std::vector<double>{40, 40, 48}, 3);
  EXPECT_DOUBLE_EQ(r.imbalance, 48.0 / (128.0 / 3.0));
  EXPECT_DOUBLE_EQ(r.imbalance, 1.125);
  const auto empty = load_imbalance(std::vector<int>{0, 0}, std::vector<double>{4, 6}, 2);
  EXPECT_DOUBLE_EQ(empty.imbalance, 2.0);
  EXPECT_TRUE(empty.has_empty_part);
  EXPECT_EQ(empty.part_loads, (std::vector<double>{10, 0}));
  EXPECT_THROW(load_imbalance(std::vector<int>{0}, std::vector<double>{1}, 0), PartitionError);
}

TEST(LoadImbalance, ScaleInvariantAndAtLeastOne) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> w(0.5, 20.0);
  std::uniform_int_distribution<int> part(0, 6);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> loads(40);
    std::vector<int> a(40);
    for (auto& x : loads) x = w(rng);
    for (auto& x : a) x = part(rng);
    const auto base = load_imbalance(a, loads, 7).imbalance;
    EXPECT_GE(base, 1.0);
    for (auto& x : loads) x *= 3.7;
    EXPECT_NEAR(load_imbalance(a, loads, 7).imbalance, base, 1e-12);
  }
}

TEST(CommProfile, Examples) {
  // Two parts joined by three links.
  const auto two = oracle::graph_from_edges(6, {{0, 3}, {1, 4}, {2, 5}, {0, 1}});
  const auto p = comm_profile(two, std::vector<int>{0, 0, 0, 1, 1, 1}, 2);
  EXPECT_EQ(p.volume, (std::vector<std::int64_t>{3, 3}));
  EXPECT_EQ(p.partners, (std::vector<int>{1, 1}));

  const auto ring = oracle::graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  EXPECT_EQ(comm_profile(ring, std::vector<int>{0, 1, 2, 3}, 4).partners,
            (std::vector<int>{2, 2, 2, 2}));

  const auto none = comm_profile(two, std::vector<int>(6, 0), 2);
  EXPECT_EQ(none.volume, (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(none.partners, (std::vector<int>{0, 0}));
}

TEST(CommProfile, VolumeSumsToTwiceCut) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 20; ++t) {
    const auto edges = oracle::random_edges(40, 0.15, rng);
    const auto g = oracle::graph_from_edges(40, edges);
    std::vector<int> a(40);
    std::uniform_int_distribution<int> part(0, 3);
    for (auto& x : a) x = part(rng);
    const auto p = comm_profile(g, a, 4);
    EXPECT_EQ(std::accumulate(p.volume.begin(), p.volume.end(), std::int64_t{0}),
              2 * edge_cut(g, a, 4));
  }
}

TEST(Timeline, OnePartIsComputeOnly) {
  const CommProfile comm{{0}, {0}};
  const CommModel m{1e-3, 1e-6, 8};
  EXPECT_DOUBLE_EQ(simulate_timeline(std::vector<double>{50.0}, comm, m, 2e-7), 2e-7 * 5.0);
}

TEST(Timeline, TwoEqualPartsAddOneMessage) {
  const CommProfile comm{{3, 3}, {1, 1}};
  const CommModel m{2e-6, 1e-9, 8};
  const double compute = 1e-7 * (400.0 / 10.0);
  EXPECT_DOUBLE_EQ(simulate_timeline(std::vector<double>{400, 400}, comm, m, 1e-7),
                   compute + 1 * 2e-6 + 3 * 8 * 1e-9);
}

TEST(Timeline, FreeCommunicationIsComputeMax) {
  const CommProfile comm{{5, 9, 2}, {2, 2, 2}};
  EXPECT_DOUBLE_EQ(simulate_timeline(std::vector<double>{30, 70, 50}, comm, CommModel{}, 1.0),
                   7.0);
}

TEST(Timeline, MonotoneInInputs) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> loads{u(rng) * 100, u(rng) * 100, u(rng) * 100};
    CommProfile comm{{std::int64_t(u(rng) * 20), std::int64_t(u(rng) * 20), std::int64_t(u(rng) * 20)},
                     {1, 2, 1}};
    CommModel m{u(rng) * 1e-5, u(rng) * 1e-8, 8};
    const double base = simulate_timeline(loads, comm, m, 1e-6);
    auto more_load = loads;
    more_load[t % 3] += u(rng) * 10;
    EXPECT_GE(simulate_timeline(more_load, comm, m, 1e-6), base);
    auto more_alpha = m;
    more_alpha.alpha += u(rng) * 1e-5;
    EXPECT_GE(simulate_timeline(loads, comm, more_alpha, 1e-6), base);
    auto more_beta = m;
    more_beta.beta += u(rng) * 1e-8;
    EXPECT_GE(simulate_timeline(loads, comm, more_beta, 1e-6), base);
  }
}

TEST(ImbalanceReduction, Examples) {
  EXPECT_NEAR(imbalance_reduction(1.40, 1.06), 85.0, 1e-9);
  EXPECT_DOUBLE_EQ(imbalance_reduction(1.3, 1.3), 0.0);
  EXPECT_NEAR(imbalance_reduction(1.20, 1.10), 50.0, 1e-9);
  EXPECT_DOUBLE_EQ(imbalance_reduction(1.0, 1.0), 0.0);
}

TEST(ComputeMetrics, ConsistentWithParts) {
  const auto g = generate_cylinder(4.0, 30);
  const auto graph = build_graph(g, std::vector<int>(g.size(), 1));
  PartitionConfig cfg;
  cfg.nparts = 4;
  const auto p = partition_kway(graph, cfg);
  const auto costs = FittedCosts::from_values(10, 20, 40, 40);
  const auto m = compute_metrics(g, graph, p.assignment, 4, costs, CommModel{1e-6, 1e-9, 8}, 1e-7);
  EXPECT_EQ(m.edge_cut, edge_cut(graph, p.assignment, 4));
  EXPECT_GE(m.load_imbalance, 1.0);
  EXPECT_EQ(std::accumulate(m.comm_volume.begin(), m.comm_volume.end(), std::int64_t{0}),
            2 * m.edge_cut);
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) total += costs[g.site(i).type];
  EXPECT_NEAR(std::accumulate(m.part_loads.begin(), m.part_loads.end(), 0.0), total, 1e-9);
  EXPECT_LE(static_cast<std::size_t>(m.edge_cut), graph.edge_count());
}

TEST(MetricsCsv, RowMatchesHeader) {
  DecompositionMetrics m;
  m.edge_cut = 12;
  m.load_imbalance = 1.0625;
  m.comm_volume = {4, 9};
  m.comm_partners = {1, 3};
  m.predicted_step_time = 2.5e-4;
  EXPECT_EQ(metrics_csv_row("weights", 16, 3, m), "weights,16,3,12,1.062500,9,3,2.500000e-04");
  EXPECT_EQ(std::count(kMetricsCsvHeader.begin(), kMetricsCsvHeader.end(), ','), 7);
}

}  // namespace
}  // namespace latdecomp
