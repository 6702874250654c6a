#include <benchmark/benchmark.h>

#include "tbcavi/block_models.hpp"
#include "tbcavi/spectral.hpp"
#include "tbcavi/vi_dcsbm.hpp"
#include "tbcavi/vi_sbm.hpp"

namespace {

using namespace tbcavi;

struct Instance {
  Membership truth;
  Graph graph;
  Membership init;
};

Instance make(std::size_t n, double d, double eps = 0.2) {
  Rng rng(mix_seed(99, n));
  Instance in{Membership::balanced(n, 2), Graph{}, Membership{}};
  in.graph = sample_sbm(solve_planted(n, 2, d, 10.0 / 3.0), in.truth, rng);
  in.init = perturb_labels(in.truth, eps, rng);
  return in;
}

void BM_SampleSbm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PlantedParams pp = solve_planted(n, 2, 8.0, 10.0 / 3.0);
  const Membership z = Membership::balanced(n, 2);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_sbm(pp, z, rng));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SampleSbm)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void BM_UpdatePsi(benchmark::State& state) {
  const Instance in = make(static_cast<std::size_t>(state.range(0)), 8.0);
  const SoftAssignment psi = SoftAssignment::from_labels(in.init);
  SbmParams params{update_block_matrix(in.graph, psi), update_pi(psi)};
  for (auto _ : state) benchmark::DoNotOptimize(update_psi(in.graph, psi, params));
}
BENCHMARK(BM_UpdatePsi)->Arg(600)->Arg(2400);

void BM_PlantedPsiUpdate(benchmark::State& state) {
  const Instance in = make(static_cast<std::size_t>(state.range(0)), 8.0);
  const SoftAssignment psi = SoftAssignment::from_labels(in.init);
  const PlantedEstimates est = planted_params(in.graph, psi);
  for (auto _ : state) benchmark::DoNotOptimize(planted_psi_update(in.graph, psi, est));
}
BENCHMARK(BM_PlantedPsiUpdate)->Arg(600)->Arg(2400);

void BM_FitSbm(benchmark::State& state) {
  const Instance in = make(600, 8.0, 0.4);
  const SoftAssignment psi0 = SoftAssignment::from_labels(in.init);
  FitOptions opt;
  opt.iterations = 20;
  opt.variant = state.range(0) ? Variant::t_bcavi : Variant::bcavi;
  opt.mode = Mode::planted;
  for (auto _ : state) benchmark::DoNotOptimize(fit_sbm(in.graph, psi0, opt, &in.truth));
}
BENCHMARK(BM_FitSbm)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_FitDcsbm(benchmark::State& state) {
  const Instance in = make(600, 12.0);
  const SoftAssignment psi0 = SoftAssignment::from_labels(in.init);
  DcsbmFitOptions opt;
  opt.iterations = 20;
  opt.mode = Mode::planted;
  for (auto _ : state) benchmark::DoNotOptimize(fit_dcsbm(in.graph, psi0, opt, &in.truth));
}
BENCHMARK(BM_FitDcsbm)->Unit(benchmark::kMillisecond);

void BM_SpectralClustering(benchmark::State& state) {
  const Instance in = make(static_cast<std::size_t>(state.range(0)), 12.0);
  Rng rng(3);
  for (auto _ : state) {
    if (state.range(1))
      benchmark::DoNotOptimize(regularized_spectral_clustering(in.graph, 2, rng));
    else
      benchmark::DoNotOptimize(spectral_clustering(in.graph, 2, rng));
  }
}
BENCHMARK(BM_SpectralClustering)->Args({600, 0})->Args({600, 1})->Args({2400, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
