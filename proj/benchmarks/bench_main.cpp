// Copyright 2026 The lattice-decomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "latdecomp/graph.hpp"
#include "latdecomp/lbkernel.hpp"
#include "latdecomp/partition.hpp"
#include "latdecomp/sfc.hpp"

namespace latdecomp {
namespace {

const Geometry& bench_geometry() {
  static const Geometry g = generate_bifurcation(BifurcationSpec{});
  return g;
}

void BM_MortonEncode(benchmark::State& state) {
  std::uint32_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(morton_encode(i, i * 7u, i * 13u));
    ++i;
  }
}
BENCHMARK(BM_MortonEncode);

void BM_SortByMorton(benchmark::State& state) {
  const auto& g = bench_geometry();
  for (auto _ : state) benchmark::DoNotOptimize(sort_by_morton(g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_SortByMorton)->Unit(benchmark::kMillisecond);

void BM_BuildGraph(benchmark::State& state) {
  const auto& g = bench_geometry();
  const std::vector<int> w(g.size(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(g, w));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_BuildGraph)->Unit(benchmark::kMillisecond);

void BM_PartitionKway(benchmark::State& state) {
  const auto& g = bench_geometry();
  const auto graph = build_graph(g, std::vector<int>(g.size(), 1));
  PartitionConfig cfg;
  cfg.nparts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(partition_kway(graph, cfg));
}
BENCHMARK(BM_PartitionKway)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PartitionGeomKway(benchmark::State& state) {
  const auto& g = bench_geometry();
  const auto graph = build_graph(g, std::vector<int>(g.size(), 1));
  PartitionConfig cfg;
  cfg.nparts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(partition_geom_kway(graph, cfg));
}
BENCHMARK(BM_PartitionGeomKway)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_KernelStep(benchmark::State& state) {
  const auto& g = bench_geometry();
  BoundaryParams bc;
  bc.iolets[0] = IoletDensity{1.001};
  bc.iolets[1] = IoletDensity{0.999};
  bc.iolets[2] = IoletDensity{0.999};
  LbSolver s(g, bc, 0.8);
  s.initialise(1.0);
  for (auto _ : state) s.step();
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_KernelStep)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace latdecomp

BENCHMARK_MAIN();
