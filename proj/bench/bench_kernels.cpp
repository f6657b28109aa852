// Serial vs OpenMP kernels on a rotation-search-sized workload.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tivreg/integral_volume.hpp"
#include "tivreg/kernels.hpp"
#include "tivreg/rotation_search.hpp"

namespace {

using namespace tivreg;

struct Workload {
  VolumeIndex index;
  std::vector<Point3> centers;
  std::vector<double> half_widths;
};

Workload make_workload(std::size_t n_scene, std::size_t n_moving, std::size_t groups) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vector3> scene(n_scene);
  for (auto& p : scene) p = Vector3(u(rng), u(rng), u(rng));
  Workload w{build_rotation_index(scene, 0.005), {}, {}};
  for (std::size_t i = 0; i < n_moving; ++i) w.half_widths.push_back(0.005 + 0.05 * (u(rng) + 1.0));
  for (std::size_t i = 0; i < n_moving * groups; ++i) w.centers.push_back(Point3(u(rng), u(rng), u(rng)));
  return w;
}

const Workload& workload() {
  static const Workload w = make_workload(200, 200, 8);
  return w;
}

template <Execution E>
void BM_CountOccupied(benchmark::State& state) {
  const auto& w = workload();
  const GroupedCubes cubes{w.centers, w.half_widths};
  for (auto _ : state) benchmark::DoNotOptimize(count_occupied(w.index, cubes, BoundEvaluation::Refined, E));
  state.SetItemsProcessed(static_cast<long>(state.iterations() * w.centers.size()));
}

template <Execution E>
void BM_CountConsensus(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(count_consensus(w.index.buckets, w.centers, 0.005, E));
  state.SetItemsProcessed(static_cast<long>(state.iterations() * w.centers.size()));
}

BENCHMARK(BM_CountOccupied<Execution::Serial>)->Name("count_occupied/serial");
BENCHMARK(BM_CountOccupied<Execution::Parallel>)->Name("count_occupied/parallel");
BENCHMARK(BM_CountConsensus<Execution::Serial>)->Name("count_consensus/serial");
BENCHMARK(BM_CountConsensus<Execution::Parallel>)->Name("count_consensus/parallel");

}  // namespace

BENCHMARK_MAIN();
