// Microbenchmarks for the hot paths: the simplex solver, one node-local
// round, a full synchronous network round, and the dense kernels they lean
// on. Not wired into ctest; run the binary directly.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "loewner/graph.hpp"
#include "loewner/lowner_john.hpp"
#include "loewner/psd.hpp"
#include "loewner/random_spd.hpp"
#include "loewner/rng.hpp"
#include "loewner/simulation.hpp"

namespace {

using namespace loewner;

std::vector<SymMat> make_inputs(std::size_t n_nodes, std::size_t dim,
                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SymMat> out;
  out.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    out.push_back(random_spd(rng, dim, 0.5, 3.0));
  }
  return out;
}

void BM_SolveCentral(benchmark::State& state) {
  const auto p_list = make_inputs(static_cast<std::size_t>(state.range(0)),
                                  static_cast<std::size_t>(state.range(1)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_central(p_list, ObjectiveKind::NegLogDet, {}));
  }
}
BENCHMARK(BM_SolveCentral)->Args({2, 2})->Args({6, 2})->Args({6, 4})->Args({10, 4});

void BM_LocalStep(benchmark::State& state) {
  const std::size_t n_nodes = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = static_cast<std::size_t>(state.range(1));
  const auto p_list = make_inputs(n_nodes, dim, 11);
  NodeState node = init_node(0, p_list[0], 1.0);
  std::vector<SymMat> neighbor_qs;
  for (const SymMat& p : p_list) neighbor_qs.push_back(inverse_spd(p));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        local_step(node, neighbor_qs, p_list[0], ObjectiveKind::NegLogDet, {}));
  }
}
BENCHMARK(BM_LocalStep)->Args({3, 2})->Args({6, 2})->Args({6, 4});

void BM_NetworkRound(benchmark::State& state) {
  const std::size_t n_nodes = static_cast<std::size_t>(state.range(0));
  const auto p_list = make_inputs(n_nodes, 2, 13);
  const Graph graph = random_connected_graph(n_nodes, 0.5, 3);
  std::vector<InputTrajectory> trajectories;
  for (const SymMat& p : p_list) trajectories.push_back(StaticTrajectory{p});
  SimulationOptions opt;
  opt.rounds = 1;
  opt.oracle_every = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(graph, trajectories, opt));
  }
}
BENCHMARK(BM_NetworkRound)->Arg(6)->Arg(12)->Arg(24);

void BM_Eigvals(benchmark::State& state) {
  Rng rng(17);
  const SymMat m = random_spd(rng, static_cast<std::size_t>(state.range(0)),
                              0.1, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigvals_sym(m));
  }
}
BENCHMARK(BM_Eigvals)->Arg(2)->Arg(4)->Arg(8);

void BM_InverseSpd(benchmark::State& state) {
  Rng rng(19);
  const SymMat m = random_spd(rng, static_cast<std::size_t>(state.range(0)),
                              0.1, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_spd(m));
  }
}
BENCHMARK(BM_InverseSpd)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
