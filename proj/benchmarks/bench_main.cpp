#include <benchmark/benchmark.h>

#include <random>

#include "fairdiv/checks.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/reductions.hpp"
#include "fairdiv/solve.hpp"
#include "fairdiv/welfare.hpp"

using namespace fairdiv;

namespace {

Graph3Reg k33() {
  Graph3Reg g;
  g.num_vertices = 6;
  for (int u = 1; u <= 3; ++u)
    for (int v = 4; v <= 6; ++v) g.edges.emplace_back(u, v);
  return g;
}

Graph3Reg k4() {
  Graph3Reg g;
  g.num_vertices = 4;
  for (int u = 1; u <= 4; ++u)
    for (int v = u + 1; v <= 4; ++v) g.edges.emplace_back(u, v);
  return g;
}

Rx3cInstance rx3c_k1() {
  Rx3cInstance r;
  r.k = 1;
  r.triples = {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
  return r;
}

void BM_NashScore(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<Value> utilities(24);
  for (auto& u : utilities) u = 1 + static_cast<Value>(rng() % 5);
  for (auto _ : state) benchmark::DoNotOptimize(nash_score(utilities));
}
BENCHMARK(BM_NashScore);

void BM_GadgetEvaluate(benchmark::State& state) {
  Instance inst = gen_mew_rx3c(rx3c_k1());
  Allocation alloc = build_witness(inst, WitnessData{WitnessData::ExactCover, {1}});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_allocation(inst, alloc));
}
BENCHMARK(BM_GadgetEvaluate);

void BM_BruteK4(benchmark::State& state) {
  Instance inst = gen_mnw_vc(k4(), 2, 0, 1, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_exact(inst, Objective::Nsw, Method::Brute));
}
BENCHMARK(BM_BruteK4);

void BM_BnbK33(benchmark::State& state) {
  Instance inst = gen_mnw_vc(k33(), 3, 0, 1, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_exact(inst, Objective::Nsw, Method::Bnb));
}
BENCHMARK(BM_BnbK33);

void BM_SubmodularityScanK1(benchmark::State& state) {
  Instance inst = gen_mew_rx3c(rx3c_k1());
  const Oracle& oracle = inst.submodular_profile().oracles[0];
  for (auto _ : state) benchmark::DoNotOptimize(check_submodularity(oracle));
}
BENCHMARK(BM_SubmodularityScanK1);

void BM_StoreLoadRoundTrip(benchmark::State& state) {
  Instance inst = gen_mnw_vc(k33(), 3, 0, 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(load_instance(store_instance(inst)));
}
BENCHMARK(BM_StoreLoadRoundTrip);

}  // namespace

BENCHMARK_MAIN();
