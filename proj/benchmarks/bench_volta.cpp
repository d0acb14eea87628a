#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "volta/energy.hpp"
#include "volta/frame.hpp"
#include "volta/models.hpp"
#include "volta/network.hpp"
#include "volta/operators.hpp"

namespace {

volta::NetworkData random_graph(int n, int extra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  volta::NetworkData data;
  for (int i = 0; i < n; ++i) data.vertices.push_back(std::to_string(i));
  data.base = "0";
  std::uniform_real_distribution<double> logc(-2.3, 2.3);
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    data.edges.push_back(
        {std::to_string(parent(rng)), std::to_string(i), std::exp(logc(rng))});
  }
  for (int k = 0; k < extra; ++k) {
    std::uniform_int_distribution<int> any(0, n - 1);
    const int a = any(rng), b = any(rng);
    if (a == b) continue;
    data.edges.push_back({std::to_string(a), std::to_string(b), std::exp(logc(rng))});
  }
  return data;
}

volta::Network make_graph(int n, int extra, std::uint64_t seed) {
  for (std::uint64_t s = seed;; ++s) {
    const volta::Network net = volta::Network::from_data(random_graph(n, extra, s));
    if (net.valid()) return net;  // duplicate extra edges invalidate rarely
  }
}

void BM_GroundedSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const volta::Network net =
      volta::Network::from_data(volta::path_network(std::vector<double>(n, 1.0)));
  const volta::GroundedSolver solver(net);
  std::vector<double> rhs(static_cast<size_t>(net.vertex_count()), 0.0);
  rhs[1] = 1.0;
  rhs.back() = -1.0;
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve_grounded(rhs));
}
BENCHMARK(BM_GroundedSolve)->Arg(100)->Arg(1000)->Arg(4000);

void BM_DipoleSystemGramian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const volta::Network net = make_graph(n, n / 2, 12);
  for (auto _ : state) {
    const volta::DipoleSystem sys(net);
    benchmark::DoNotOptimize(sys.gramian());
  }
}
BENCHMARK(BM_DipoleSystemGramian)->Arg(50)->Arg(150)->Arg(400);

void BM_FrameAnalysis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const volta::Network net = make_graph(n, n, 34);
  const volta::DipoleSystem sys(net);
  const volta::ParsevalFrame frame(sys, volta::orient_lexicographic(net));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> u(static_cast<size_t>(n));
  for (auto& x : u) x = unif(rng);
  for (auto _ : state) benchmark::DoNotOptimize(frame.analysis(u));
}
BENCHMARK(BM_FrameAnalysis)->Arg(50)->Arg(200);

void BM_FrameConstruction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const volta::Network net = make_graph(n, n / 2, 56);
  const volta::DipoleSystem sys(net);
  for (auto _ : state) {
    const volta::ParsevalFrame frame(sys, volta::orient_lexicographic(net));
    benchmark::DoNotOptimize(frame.gramian());
  }
}
BENCHMARK(BM_FrameConstruction)->Arg(30)->Arg(100);

void BM_ResistanceAllPairs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const volta::Network net = make_graph(n, n, 78);
  for (auto _ : state) {
    const volta::DipoleSystem sys(net);
    double acc = 0.0;
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) acc += sys.resistance(x, y);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_ResistanceAllPairs)->Arg(50)->Arg(120);

void BM_TriangleSpectrum(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(volta::triangle_spectrum(1.0, 2.0, 3.0));
}
BENCHMARK(BM_TriangleSpectrum);

void BM_DefectMarch(benchmark::State& state) {
  const long long N = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(volta::deficiency_recurrence_geometric(1.5, N));
}
BENCHMARK(BM_DefectMarch)->Arg(40)->Arg(400)->Arg(4000);

void BM_TreeProbe(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(volta::tree_deficiency_probe(0.4, 0.4, 0.2, 5, depth));
}
BENCHMARK(BM_TreeProbe)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
