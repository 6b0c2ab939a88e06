#include <benchmark/benchmark.h>

#include "frc/draft.hpp"
#include "frc/model.hpp"
#include "frc/optimizer.hpp"
#include "frc/random.hpp"
#include "frc/synthetic.hpp"

namespace {

void BM_RadarArea(benchmark::State& state) {
  frc::Rng rng(1);
  frc::IndicatorVector v;
  for (auto& x : v.values) x = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(frc::radar_area(v).value);
}
BENCHMARK(BM_RadarArea);

void BM_SuggestPartner(benchmark::State& state) {
  const auto set = frc::synthetic::random_profiles(static_cast<std::size_t>(state.range(0)) + 1, 2);
  std::vector<const frc::RobotProfile*> members, pool;
  for (const auto& [id, p] : set.profiles) (members.empty() ? members : pool).push_back(&p);
  for (auto _ : state) benchmark::DoNotOptimize(frc::suggest_partner(members, pool, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SuggestPartner)->Arg(24)->Arg(60);

// One epoch of the deepest configuration on 850 samples.
void BM_MlpEpoch(benchmark::State& state) {
  frc::synthetic::MatchSampleOptions o;
  o.matches = 850;
  const auto samples = frc::synthetic::oracle_match_samples(o);
  frc::ModelConfig c;
  c.hidden_layers = {50, 50, 50, 50};
  c.max_epochs = 1;
  c.solver = state.range(0) == 0 ? frc::Solver::Adam : frc::Solver::Sgd;
  for (auto _ : state) benchmark::DoNotOptimize(frc::train(c, samples).parameters.data());
}
BENCHMARK(BM_MlpEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_OptimizeAll(benchmark::State& state) {
  const auto set = frc::synthetic::random_profiles(static_cast<std::size_t>(state.range(0)), 3);
  std::vector<frc::TeamId> ranking;
  for (const auto& [id, p] : set.profiles) ranking.push_back(id);
  for (auto _ : state) benchmark::DoNotOptimize(frc::run_optimize_all(frc::new_draft(ranking), set).log.size());
}
BENCHMARK(BM_OptimizeAll)->Arg(24)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
