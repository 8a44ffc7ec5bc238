#include <benchmark/benchmark.h>

#include "cliquenash/approx_nash.hpp"
#include "cliquenash/bayesian.hpp"
#include "cliquenash/game.hpp"
#include "cliquenash/linprog.hpp"
#include "cliquenash/recovery.hpp"
#include "cliquenash/reductions.hpp"
#include "cliquenash/rng.hpp"

namespace {

using namespace cliquenash;

BimatrixGame random_game(Rng& rng, int rows, int cols) {
  Matrix mr(rows, cols), mc(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      mr(i, j) = rng.next_double();
      mc(i, j) = rng.next_double();
    }
  }
  return BimatrixGame(std::move(mr), std::move(mc));
}

void BM_Regret(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const BimatrixGame g = random_game(rng, n, n);
  std::vector<double> x(n, 1.0 / n);
  const MixedProfile p(x, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(regret(g, p));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Regret)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_DmpHalfEquilibrium(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const BimatrixGame g = random_game(rng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmp_half_equilibrium(g, 0));
  }
}
BENCHMARK(BM_DmpHalfEquilibrium)->Arg(64)->Arg(256);

void BM_OptimalHalfEquilibrium(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const BimatrixGame g = random_game(rng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_value_half_equilibrium(g));
  }
}
BENCHMARK(BM_OptimalHalfEquilibrium)->Arg(4)->Arg(8)->Arg(16);

void BM_LpSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  LinearProgram lp;
  lp.objective.resize(n);
  for (double& c : lp.objective) c = rng.next_double();
  lp.ineq_lhs = Matrix(n, n);
  lp.ineq_rhs.assign(n, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lp.ineq_lhs(i, j) = rng.next_double();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(lp));
  }
}
BENCHMARK(BM_LpSolve)->RangeMultiplier(2)->Range(8, 64);

void BM_BuildHkGame(benchmark::State& state) {
  const int n_big = static_cast<int>(state.range(0));
  const PlantedGraph g = sample_planted_clique(100, 14, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_hk_game(g, 0.54, 1.0 / 3.0, 1.0 / 3.0, n_big, 5));
  }
}
BENCHMARK(BM_BuildHkGame)->Arg(200)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_SoundnessPipeline(benchmark::State& state) {
  const PlantedGraph g = sample_planted_clique(200, 26, 6);
  ReductionParams params = params_eps_hardness(0.07);
  params.n_big = 400;
  const ReductionArtifact art = build_hk_game(g, params, 6);
  std::vector<double> x(art.layout.total, 0.0);
  for (int v : *g.planted()) x[v] = 1.0 / g.planted()->size();
  const MixedProfile p(x, x);
  ExtractionParams ep{params.s, 0.06, 26, 5.0 / 9.0, 26};
  for (auto _ : state) {
    benchmark::DoNotOptimize(soundness_pipeline(g, art, p, ep));
  }
}
BENCHMARK(BM_SoundnessPipeline)->Unit(benchmark::kMillisecond);

void BM_GadgetBruteForce(benchmark::State& state) {
  const BayesianGame gadget = build_coloring_hardness_game(octahedron());
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_pure_bne(gadget, 0.0, 1e10));
  }
}
BENCHMARK(BM_GadgetBruteForce)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
