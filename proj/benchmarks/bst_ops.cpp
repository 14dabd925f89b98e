#include <benchmark/benchmark.h>

#include "rootgraph/bench.hpp"
#include "rootgraph/bst.hpp"

using namespace rootgraph;

namespace {

// One op of the bundled program on a prepared tree; the graph copy is not timed.
void run_case(benchmark::State& state, Shape shape, BenchOp op, std::size_t n) {
  const BenchCase c = make_case(shape, n, op);
  const Program& p = program(BstVariant::sanitized);
  const Command& entry = resume_command(BstVariant::sanitized);
  MatchStats last;
  HostGraph g;
  for (auto _ : state) {
    // Copying in place also frees the previous rep's graph outside the timed region.
    state.PauseTiming();
    g = c.graph;
    state.ResumeTiming();
    RunResult r = run_command(p, entry, g);
    benchmark::DoNotOptimize(r.status);
    last = r.stats;
  }
  state.counters["rule_apps"] = static_cast<double>(last.applications);
  state.counters["anchors_tried"] = static_cast<double>(last.anchors_tried);
  state.counters["max_anchors_per_call"] = static_cast<double>(last.max_anchors_per_call);
}

void BM_DegenerateInsert(benchmark::State& s) {
  run_case(s, Shape::degenerate, BenchOp::insert, static_cast<std::size_t>(s.range(0)));
}
void BM_DegenerateSearch(benchmark::State& s) {
  run_case(s, Shape::degenerate, BenchOp::search, static_cast<std::size_t>(s.range(0)));
}
void BM_DegenerateDelete(benchmark::State& s) {
  run_case(s, Shape::degenerate, BenchOp::remove, static_cast<std::size_t>(s.range(0)));
}
void BM_BalancedSearch(benchmark::State& s) {
  run_case(s, Shape::balanced, BenchOp::search, (std::size_t{1} << s.range(0)) - 1);
}
void BM_BalancedTriple(benchmark::State& s) {
  run_case(s, Shape::balanced, BenchOp::triple, (std::size_t{1} << s.range(0)) - 1);
}

}  // namespace

BENCHMARK(BM_DegenerateInsert)->RangeMultiplier(2)->Range(1000, 8000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DegenerateSearch)->RangeMultiplier(2)->Range(1000, 8000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DegenerateDelete)->RangeMultiplier(2)->Range(1000, 8000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BalancedSearch)->DenseRange(10, 13)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BalancedTriple)->DenseRange(10, 13)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
