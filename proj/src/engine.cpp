#include "mlmq/engine.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "mlmq/backoff.hpp"
#include "mlmq/error.hpp"
#include "mlmq/features.hpp"

namespace mlmq {

namespace {

struct EdgeTask {
  VertexId src;
  EdgeIndex edge;
};

// Relaxes tasks[0..n) as one lane step and writes the improvements.
void lane_step(const CsrGraph& g, DistanceTable& dist, MlmqHandle& h,
               std::span<const EdgeTask> tasks, std::vector<Element>& improved) {
  improved.clear();
  const auto cols = g.col_indices();
  const auto w = g.weights();
  RunMetrics& m = h.metrics();
  for (const EdgeTask& t : tasks) {
    const Distance du = dist.load(t.src);
    const VertexId v = cols[t.edge];
    const Distance nd = du + w[t.edge];
    ++m.relaxations;
    if (dist.relax_min(v, nd)) {
      ++m.distance_updates;
      improved.push_back(Element{v, nd});
    }
  }
  if (!improved.empty()) h.write(improved);
}

}  // namespace

RelaxStats relax_batch(const CsrGraph& g, DistanceTable& dist, MlmqHandle& h,
                       std::span<const Element> batch, std::uint32_t lanes, std::uint32_t th_v,
                       bool duplicate_elimination) {
  RelaxStats stats;
  thread_local std::vector<EdgeTask> pooled;
  thread_local std::vector<EdgeTask> step;
  thread_local std::vector<Element> improved;
  pooled.clear();
  std::vector<VertexId> heavy;
  for (const Element& e : batch) {
    if (duplicate_elimination && e.dist > dist.load(e.id)) {
      ++stats.dropped;
      continue;
    }
    ++h.metrics().settled_reads;
    if (g.out_degree(e.id) > th_v) {
      heavy.push_back(e.id);
      ++stats.cooperative_vertices;
    } else {
      ++stats.distributed_vertices;
      for (EdgeIndex k = g.edge_begin(e.id); k < g.edge_end(e.id); ++k)
        pooled.push_back(EdgeTask{e.id, k});
    }
  }
  for (VertexId u : heavy) {
    for (EdgeIndex k = g.edge_begin(u); k < g.edge_end(u); k += lanes) {
      step.clear();
      const EdgeIndex end = std::min<EdgeIndex>(k + lanes, g.edge_end(u));
      for (EdgeIndex e = k; e < end; ++e) step.push_back(EdgeTask{u, e});
      lane_step(g, dist, h, step, improved);
    }
  }
  for (std::size_t k = 0; k < pooled.size(); k += lanes) {
    const std::size_t n = std::min<std::size_t>(lanes, pooled.size() - k);
    lane_step(g, dist, h, std::span<const EdgeTask>(pooled.data() + k, n), improved);
  }
  return stats;
}

SsspResult sssp_solve(const CsrGraph& g, VertexId source, const MlmqConfig& cfg_in,
                      const EngineConfig& engine) {
  if (source >= g.num_vertices())
    throw Error(ErrorKind::kInvalidSource, "source " + std::to_string(source) +
                                               " out of range for graph with " +
                                               std::to_string(g.num_vertices()) + " vertices");
  cfg_in.validate();
  const double avg_weight =
      g.num_edges() == 0 ? 1.0 : extract_features(g).avg_weight;
  const MlmqConfig cfg = resolve(cfg_in, avg_weight, g.num_vertices());
  cfg.validate();

  const std::uint32_t groups = cfg.num_groups;
  TerminationCounters counters(groups);
  L2Options opts;
  opts.num_groups = groups;
  auto l2 = make_l2_queue(cfg, counters, opts);
  std::vector<std::unique_ptr<MlmqHandle>> handles;
  handles.reserve(groups);
  for (GroupId gid = 0; gid < groups; ++gid)
    handles.push_back(std::make_unique<MlmqHandle>(gid, cfg, *l2));

  DistanceTable dist(g.num_vertices());
  dist.reset_source(source);
  mlmq_bootstrap(*handles[0], source);

  std::unique_ptr<std::atomic<bool>[]> run_flag(new std::atomic<bool>[groups]);
  for (std::uint32_t i = 0; i < groups; ++i) run_flag[i].store(true);
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  std::mutex failure_lock;

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::thread> workers;
  workers.reserve(groups);
  for (GroupId gid = 0; gid < groups; ++gid) {
    workers.emplace_back([&, gid] {
      MlmqHandle& h = *handles[gid];
      std::vector<Element> batch;
      batch.reserve(cfg.lanes_per_group);
      Backoff backoff;
      try {
        while (run_flag[gid].load(std::memory_order_acquire)) {
          batch.clear();
          if (mlmq_read(h, cfg.lanes_per_group, batch) == ReadStatus::kReadEmpty) {
            backoff.pause();
            continue;
          }
          backoff.reset();
          relax_batch(g, dist, h, batch, cfg.lanes_per_group, cfg.th_v,
                      engine.duplicate_elimination);
        }
      } catch (...) {
        std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure) failure = std::current_exception();
        failed.store(true, std::memory_order_release);
      }
    });
  }

  // Manager: termination watch, plus the optional monotonicity sampler.
  std::uint64_t violations = 0;
  std::vector<Distance> sample;
  std::vector<VertexId> sample_ids;
  if (engine.check_monotonic && g.num_vertices() > 0) {
    const std::size_t n = std::min<std::size_t>(g.num_vertices(), 256);
    for (std::size_t i = 0; i < n; ++i)
      sample_ids.push_back(static_cast<VertexId>(i * g.num_vertices() / n));
    for (VertexId v : sample_ids) sample.push_back(dist.load(v));
  }
  bool timed_out = false;
  std::uint32_t confirmations = 0;
  Backoff idle(engine.poll_interval);
  while (!failed.load(std::memory_order_acquire)) {
    if (l2_is_empty(counters)) {
      if (++confirmations >= engine.confirm_polls) break;
    } else {
      confirmations = 0;
    }
    if (engine.check_monotonic) {
      for (std::size_t i = 0; i < sample_ids.size(); ++i) {
        const Distance now = dist.load(sample_ids[i]);
        if (now > sample[i]) ++violations;
        sample[i] = now;
      }
    }
    if (std::chrono::steady_clock::now() - start > engine.watchdog) {
      timed_out = true;
      break;
    }
    idle.pause();
  }
  for (std::uint32_t i = 0; i < groups; ++i) run_flag[i].store(false, std::memory_order_release);
  for (auto& t : workers) t.join();
  const auto stop = std::chrono::steady_clock::now();

  if (failure) std::rethrow_exception(failure);
  if (timed_out)
    throw Error(ErrorKind::kWatchdog,
                "run exceeded " + std::to_string(engine.watchdog.count()) +
                    " ms watchdog (reserve=" + std::to_string(counters.reserve()) +
                    ", done=" + std::to_string(counters.done()) + ")");

  SsspResult result;
  result.config_used = cfg;
  for (const auto& h : handles) result.metrics += h->metrics();
  result.metrics.wall_time_us = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count());
  result.distances = dist.snapshot();
  result.monotonicity_violations = violations;

  RunAudit& audit = result.audit;
  audit.l2_empty = l2->empty();
  audit.local_queues_empty = true;
  audit.local_done_flushed = true;
  for (GroupId gid = 0; gid < groups; ++gid) {
    audit.local_queues_empty = audit.local_queues_empty && handles[gid]->locally_empty();
    audit.local_done_flushed = audit.local_done_flushed && counters.local_done(gid) == 0;
  }
  audit.global_reserve = counters.reserve();
  audit.global_done = counters.done();
  return result;
}

SsspResult bfs_solve(const CsrGraph& g, VertexId source, const MlmqConfig& cfg,
                     const EngineConfig& engine) {
  return sssp_solve(g.with_unit_weights(), source, cfg, engine);
}

}  // namespace mlmq
