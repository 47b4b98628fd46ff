#include <benchmark/benchmark.h>

#include "mlmq/engine.hpp"
#include "mlmq/graph.hpp"
#include "mlmq/oracle.hpp"

using namespace mlmq;

namespace {

const CsrGraph& grid() {
  static const CsrGraph g = [] {
    GeneratorParams p;
    p.rows = p.cols = 200;
    p.max_weight = 100;
    return generate_graph(GeneratorKind::kGrid2d, p, 1);
  }();
  return g;
}

const CsrGraph& rmat() {
  static const CsrGraph g = [] {
    GeneratorParams p;
    p.scale = 15;
    p.edge_factor = 8;
    p.max_weight = 100;
    return generate_graph(GeneratorKind::kRmat, p, 1);
  }();
  return g;
}

void run_engine(benchmark::State& state, const CsrGraph& g) {
  MlmqConfig c;
  c.l1_type = static_cast<L1Type>(state.range(0));
  c.l2_type = static_cast<L2Type>(state.range(1));
  c.num_groups = static_cast<std::uint32_t>(state.range(2));
  std::uint64_t relax = 0;
  for (auto _ : state) {
    const SsspResult r = sssp_solve(g, 0, c);
    relax = r.metrics.relaxations;
    benchmark::DoNotOptimize(r.distances.data());
  }
  state.counters["relaxations"] = static_cast<double>(relax);
  state.SetLabel(c.label());
}

void BM_GridEngine(benchmark::State& s) { run_engine(s, grid()); }
void BM_RmatEngine(benchmark::State& s) { run_engine(s, rmat()); }

void BM_GridDijkstra(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dijkstra_oracle(grid(), 0).data());
}
void BM_RmatDijkstra(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dijkstra_oracle(rmat(), 0).data());
}

void engine_args(benchmark::internal::Benchmark* b) {
  for (int l1 = 0; l1 < 4; ++l1)
    for (int l2 = 0; l2 < 4; ++l2)
      for (int groups : {1, 4}) b->Args({l1, l2, groups});
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_GridEngine)->Apply(engine_args);
BENCHMARK(BM_RmatEngine)->Apply(engine_args);
BENCHMARK(BM_GridDijkstra)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RmatDijkstra)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
