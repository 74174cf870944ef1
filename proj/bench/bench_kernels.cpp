// Serial reference vs OpenMP kernels on generated inputs.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "tempodag/acyclicity.hpp"
#include "tempodag/scm_oracle.hpp"

namespace {

using namespace tempodag;

// `processes` processes with `ticks` nodes each. With `shared` every process
// is observed at the same ticks, otherwise ticks are interleaved.
AtomicDag make_dag(int processes, int ticks, double p, std::uint64_t seed, bool shared = false) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  AtomicDag dag;
  for (int i = 0; i < processes; ++i)
    for (int t = 0; t < ticks; ++t) dag.add_node(node("P" + std::to_string(i), shared ? t : processes * t + i));
  const auto nodes = dag.nodes();
  for (const auto& u : nodes)
    for (const auto& v : nodes)
      if (u.time < v.time && coin(rng)) dag.add_edge(u, v);
  return dag;
}

// One mean aggregate per process over all of its ticks.
VariableSystem make_system(int processes, int ticks, double p) {
  AtomicDag dag = make_dag(processes, ticks, p, 17);
  std::vector<CompositeVariable> vars;
  for (int i = 0; i < processes; ++i) {
    TimeSet times;
    for (int t = 0; t < ticks; ++t) times.insert(TimePoint(processes * t + i));
    const std::string name = "P" + std::to_string(i);
    vars.push_back(make_aggregate("V" + std::to_string(i), ProcessId(name), times, AggregationSpec::mean()));
  }
  return build_system(std::move(dag), std::move(vars));
}

LinearScm make_scm(const AtomicDag& dag) {
  std::map<EdgeKey, double> coefficients;
  for (const auto& [u, v] : dag.edges()) coefficients[{dag.node_at(u), dag.node_at(v)}] = 0.3;
  return LinearScm::with_unit_noise(dag, coefficients);
}

void BM_ClosureSerial(benchmark::State& state) {
  const auto dag = make_dag(static_cast<int>(state.range(1)), static_cast<int>(state.range(0)), 0.05, 5, true);
  for (auto _ : state) benchmark::DoNotOptimize(serial::compute_reachability(dag));
}

void BM_ClosureParallel(benchmark::State& state) {
  const auto dag = make_dag(static_cast<int>(state.range(1)), static_cast<int>(state.range(0)), 0.05, 5, true);
  for (auto _ : state) benchmark::DoNotOptimize(compute_reachability(dag));
}

void BM_SampleSerial(benchmark::State& state) {
  const auto s = make_system(6, 10, 0.1);
  const auto scm = make_scm(s.atomic());
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(serial::sample(s, scm, 1, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SampleParallel(benchmark::State& state) {
  const auto s = make_system(6, 10, 0.1);
  const auto scm = make_scm(s.atomic());
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample(s, scm, 1, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ClassifySerial(benchmark::State& state) {
  const auto s = make_system(static_cast<int>(state.range(0)), 6, 0.08);
  for (auto _ : state) benchmark::DoNotOptimize(serial::classify_system(s));
}

void BM_ClassifyParallel(benchmark::State& state) {
  const auto s = make_system(static_cast<int>(state.range(0)), 6, 0.08);
  for (auto _ : state) benchmark::DoNotOptimize(classify_system(s));
}

// {ticks, processes}
BENCHMARK(BM_ClosureSerial)->Args({32, 8})->Args({64, 64});
BENCHMARK(BM_ClosureParallel)->Args({32, 8})->Args({64, 64});
BENCHMARK(BM_SampleSerial)->Arg(10000)->Arg(100000);
BENCHMARK(BM_SampleParallel)->Arg(10000)->Arg(100000);
BENCHMARK(BM_ClassifySerial)->Arg(8)->Arg(16);
BENCHMARK(BM_ClassifyParallel)->Arg(8)->Arg(16);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
