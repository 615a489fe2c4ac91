#include <benchmark/benchmark.h>

#include "davnav/geodesic.hpp"
#include "davnav/gridmap.hpp"
#include "davnav/metrics.hpp"

namespace {

using namespace davnav;

GridMap bench_map(int side) {
  MapGenParams p;
  p.width = side;
  p.height = side;
  p.rooms = side / 6;
  return generate_map(11, p);
}

void BM_GeodesicField(benchmark::State& state) {
  const auto map = bench_map(static_cast<int>(state.range(0)));
  const Cell from = map.free_cells().front();
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_field(map, from));
}
BENCHMARK(BM_GeodesicField)->Arg(24)->Arg(48)->Arg(96);

void BM_ActionField(benchmark::State& state) {
  const auto map = bench_map(static_cast<int>(state.range(0)));
  const Pose from{map.free_cells().front(), Heading::North};
  for (auto _ : state) benchmark::DoNotOptimize(action_field(map, from));
}
BENCHMARK(BM_ActionField)->Arg(24)->Arg(48)->Arg(96);

void BM_InterceptOracle(benchmark::State& state) {
  const auto map = bench_map(24);
  const auto& cells = map.free_cells();
  // A trajectory that sweeps the free cells far from the start.
  std::vector<Cell> traj(500, cells.back());
  const Pose start{cells.front(), Heading::East};
  for (auto _ : state) benchmark::DoNotOptimize(intercept_oracle(map, start, traj));
}
BENCHMARK(BM_InterceptOracle);

}  // namespace
