#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <vector>

#include "mlmq/engine.hpp"
#include "mlmq/error.hpp"
#include "mlmq/oracle.hpp"

using namespace mlmq;

namespace {

constexpr Distance kInf = kInfinity;

CsrGraph edges(std::size_t n, std::vector<CsrGraph::Edge> e) { return CsrGraph::from_edges(n, e); }

std::vector<MlmqConfig> every_type_pair(std::uint32_t groups) {
  std::vector<MlmqConfig> out;
  for (auto l1 : {L1Type::kVector, L1Type::kNearFar, L1Type::kFilter, L1Type::kSlf})
    for (auto l2 : {L2Type::kFifo, L2Type::kBucket, L2Type::kPriority, L2Type::kMulti}) {
      MlmqConfig c;
      c.l1_type = l1;
      c.l2_type = l2;
      c.num_groups = groups;
      out.push_back(c);
    }
  return out;
}

// Keeps a handle and its queue alive for direct relax_batch calls.
struct Worker {
  Worker(const CsrGraph& g, MlmqConfig c)
      : cfg(resolve(c, 1.0, g.num_vertices())), counters(1), dist(g.num_vertices()) {
    l2 = make_l2_queue(cfg, counters, L2Options{1});
    h = std::make_unique<MlmqHandle>(0, cfg, *l2);
  }
  MlmqConfig cfg;
  TerminationCounters counters;
  DistanceTable dist;
  std::unique_ptr<L2Queue> l2;
  std::unique_ptr<MlmqHandle> h;
};

}  // namespace

TEST_CASE("oracles on small graphs") {
  const CsrGraph tri = edges(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}});
  CHECK(dijkstra_oracle(tri, 0) == std::vector<Distance>{0, 1, 2});
  CHECK(bellman_ford_oracle(tri, 0) == std::vector<Distance>{0, 1, 2});
  const CsrGraph lone = edges(3, {{0, 1, 4}});
  CHECK(dijkstra_oracle(lone, 0) == std::vector<Distance>{0, 4, kInf});
  CHECK(bellman_ford_oracle(lone, 0) == std::vector<Distance>{0, 4, kInf});
}

TEST_CASE("oracles agree on a random graph") {
  GeneratorParams p;
  p.num_vertices = 1000;
  p.num_edges = 5000;
  p.max_weight = 1000;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CsrGraph g = generate_graph(GeneratorKind::kRandomUniform, p, seed);
    CHECK(dijkstra_oracle(g, 0) == bellman_ford_oracle(g, 0));
  }
}

TEST_CASE("first mismatch reporting") {
  const std::vector<Distance> a = {0, 1, 2}, b = {0, 1, 3};
  CHECK_FALSE(find_first_mismatch(a, a).has_value());
  const auto m = find_first_mismatch(a, b);
  REQUIRE(m.has_value());
  CHECK(m->vertex == 2);
  CHECK(m->expected == 2);
  CHECK(m->actual == 3);
}

TEST_CASE("chain under every queue pairing") {
  const CsrGraph g = edges(3, {{0, 1, 2}, {1, 2, 3}});
  for (const auto& c : every_type_pair(2)) {
    CAPTURE(c.label());
    const SsspResult r = sssp_solve(g, 0, c);
    CHECK(r.distances == std::vector<Distance>{0, 2, 5});
    CHECK(r.audit.ok());
  }
}

TEST_CASE("redundant wavefront topology resolves to the shortest path") {
  // s=0 -> v=1 (10); s -> u1=2 (3), u1 -> v (5); s -> u2=3 (1), u2 -> u3=4 (1), u3 -> v (2)
  const CsrGraph g =
      edges(5, {{0, 1, 10}, {0, 2, 3}, {2, 1, 5}, {0, 3, 1}, {3, 4, 1}, {4, 1, 2}});
  for (std::uint32_t groups : {1u, 3u}) {
    for (const auto& c : every_type_pair(groups)) {
      CAPTURE(c.label());
      CHECK(sssp_solve(g, 0, c).distances[1] == 4);
    }
  }
}

TEST_CASE("single vertex terminates after the source is settled") {
  const CsrGraph g = CsrGraph::from_edges(1, {});
  MlmqConfig c;
  c.num_groups = 2;
  const SsspResult r = sssp_solve(g, 0, c);
  CHECK(r.distances == std::vector<Distance>{0});
  CHECK(r.audit.global_reserve == 1);
  CHECK(r.audit.global_done == 1);
  CHECK(r.metrics.settled_reads == 1);
  CHECK(r.metrics.relaxations == 0);
}

TEST_CASE("invalid source") {
  const CsrGraph g = edges(2, {{0, 1, 1}});
  try {
    sssp_solve(g, 2, MlmqConfig{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidSource);
  }
}

TEST_CASE("invalid config is rejected before the run") {
  const CsrGraph g = edges(2, {{0, 1, 1}});
  MlmqConfig c;
  c.l2_type = L2Type::kBucket;
  c.l2.bnum = 20;
  CHECK_THROWS_AS(sssp_solve(g, 0, c), Error);
  MlmqConfig m;
  m.l2_type = L2Type::kMulti;
  m.num_groups = 2;
  m.l2.pnum = 3;
  CHECK_THROWS_AS(sssp_solve(g, 0, m), Error);
}

TEST_CASE("relax_batch drops stale elements") {
  const CsrGraph g = edges(2, {{0, 1, 1}});
  Worker w(g, MlmqConfig{});
  w.dist.relax_min(0, 7);
  const std::vector<Element> batch = {{0, 9}};
  const RelaxStats s = relax_batch(g, w.dist, *w.h, batch, 32, 16, true);
  CHECK(s.dropped == 1);
  CHECK(w.h->metrics().relaxations == 0);
}

TEST_CASE("relax_batch on a degree-zero vertex") {
  const CsrGraph g = edges(2, {{1, 0, 1}});
  Worker w(g, MlmqConfig{});
  w.dist.reset_source(0);
  const std::vector<Element> batch = {{0, 0}};
  relax_batch(g, w.dist, *w.h, batch, 32, 16, true);
  CHECK(w.h->metrics().relaxations == 0);
  CHECK(w.h->locally_empty());
}

TEST_CASE("relax_batch expands a high-degree vertex cooperatively") {
  std::vector<CsrGraph::Edge> star;
  for (VertexId v = 1; v <= 40; ++v) star.push_back({0, v, v});
  star.push_back({41, 42, 1});
  const CsrGraph g = CsrGraph::from_edges(43, star);
  MlmqConfig c;
  c.l0_capacity = 64;
  Worker w(g, c);
  w.dist.reset_source(0);
  w.dist.relax_min(41, 3);
  const std::vector<Element> batch = {{0, 0}, {41, 3}};
  const RelaxStats s = relax_batch(g, w.dist, *w.h, batch, 32, 16, true);
  CHECK(s.cooperative_vertices == 1);
  CHECK(s.distributed_vertices == 1);
  CHECK(w.h->metrics().relaxations == 41);
  CHECK(w.h->metrics().distance_updates == 41);
  for (VertexId v = 1; v <= 40; ++v) CHECK(w.dist.load(v) == v);
  std::vector<Element> queued;
  while (w.h->read(64, queued) == ReadStatus::kSuccess) {
  }
  CHECK(queued.size() == 41);
}

TEST_CASE("relax without duplicate elimination still converges") {
  GeneratorParams p;
  p.rows = 20;
  p.cols = 20;
  p.max_weight = 50;
  const CsrGraph g = generate_graph(GeneratorKind::kGrid2d, p, 2);
  EngineConfig e;
  e.duplicate_elimination = false;
  MlmqConfig c;
  const SsspResult with = sssp_solve(g, 0, c);
  const SsspResult without = sssp_solve(g, 0, c, e);
  CHECK(without.distances == dijkstra_oracle(g, 0));
  CHECK(without.metrics.relaxations >= with.metrics.relaxations);
}

TEST_CASE("bfs gives hop counts") {
  GeneratorParams p;
  p.num_vertices = 4;
  p.min_weight = 3;
  p.max_weight = 9;
  const CsrGraph path = generate_graph(GeneratorKind::kPath, p, 1);
  CHECK(bfs_solve(path, 0, MlmqConfig{}).distances == std::vector<Distance>{0, 1, 2, 3});
  std::vector<CsrGraph::Edge> star;
  for (VertexId v = 1; v < 30; ++v) star.push_back({0, v, 100 + v});
  const auto r = bfs_solve(CsrGraph::from_edges(30, star), 0, MlmqConfig{});
  for (VertexId v = 1; v < 30; ++v) CHECK(r.distances[v] == 1);
}

TEST_CASE("engine matches the oracle on generated graphs") {
  GeneratorParams p;
  p.scale = 10;
  p.edge_factor = 6;
  p.rows = 30;
  p.cols = 30;
  p.num_vertices = 800;
  p.num_edges = 4000;
  p.max_weight = 200;
  for (auto kind : {GeneratorKind::kRmat, GeneratorKind::kGrid2d, GeneratorKind::kPath,
                    GeneratorKind::kRandomUniform}) {
    const CsrGraph g = generate_graph(kind, p, 9);
    const auto want = dijkstra_oracle(g, 0);
    const auto unit = dijkstra_oracle(g.with_unit_weights(), 0);
    std::size_t reachable = 0;
    for (Distance d : want) reachable += d != kInf;
    for (const auto& c : every_type_pair(3)) {
      CAPTURE(c.label());
      EngineConfig e;
      e.check_monotonic = true;
      const SsspResult r = sssp_solve(g, 0, c, e);
      CHECK(r.distances == want);
      CHECK(r.audit.ok());
      CHECK(r.monotonicity_violations == 0);
      CHECK(r.metrics.settled_reads >= reachable);
      CHECK(r.metrics.distance_updates >= reachable - 1);
      CHECK(r.metrics.distance_updates <= r.metrics.relaxations);
      CHECK(r.metrics.settled_reads <= r.metrics.total_dequeues());
      for (int lvl = 0; lvl < 3; ++lvl) CHECK(r.metrics.enqueues[lvl] == r.metrics.dequeues[lvl]);
      CHECK(bfs_solve(g, 0, c).distances == unit);
    }
  }
}

TEST_CASE("five-vertex path drains the counters") {
  GeneratorParams p;
  p.num_vertices = 5;
  p.max_weight = 4;
  const CsrGraph g = generate_graph(GeneratorKind::kPath, p, 3);
  MlmqConfig c;
  c.num_groups = 4;
  const SsspResult r = sssp_solve(g, 0, c);
  CHECK(r.audit.global_reserve == r.audit.global_done);
  CHECK(r.audit.ok());
}

TEST_CASE("metrics json round trip") {
  RunMetrics m;
  m.relaxations = 5;
  m.enqueues = {1, 2, 3};
  m.wall_time_us = 77;
  const RunMetrics back = metrics_from_json(to_json(m));
  CHECK(back.relaxations == 5);
  CHECK(back.enqueues == m.enqueues);
  CHECK(back.wall_time_us == 77);
  RunMetrics sum = m;
  sum += m;
  CHECK(sum.relaxations == 10);
  CHECK(sum.enqueues[2] == 6);
}

TEST_CASE("config json round trip and labels") {
  MlmqConfig c;
  c.l1_type = L1Type::kNearFar;
  c.l2_type = L2Type::kBucket;
  c.l2.delta_factor = 4;
  c.l2.bnum = 2;
  const MlmqConfig back = config_from_json(to_json(c));
  CHECK(back.label() == c.label());
  CHECK(back.l2.bnum == 2);
  const MlmqConfig r = resolve(c, 10.0, 100);
  CHECK(r.l2.delta == 40);
  CHECK(r.l1.delta_nf == 40);  // follows the bucket width
  CHECK(r.l1.filter_window == 40);
  CHECK(r.l2.pnum == 1);
}
