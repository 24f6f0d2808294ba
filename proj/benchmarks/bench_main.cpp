#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "balance/analysis.hpp"
#include "balance/engine.hpp"
#include "balance/oracle.hpp"

namespace {

using namespace balance;

std::vector<Point2> random_points(std::size_t count) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<Point2> points;
  for (std::size_t i = 0; i < count; ++i) points.emplace_back(u(rng), u(rng));
  return points;
}

void BM_LensNormClosedForm(benchmark::State& state) {
  const auto points = random_points(1024);
  const LensBody k = LensBody::k_body();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lens_norm(points[i++ & 1023], k));
  }
}
BENCHMARK(BM_LensNormClosedForm);

void BM_LensNormBisect(benchmark::State& state) {
  const auto points = random_points(1024);
  const LensBody k = LensBody::k_body();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::lens_norm_bisect(points[i++ & 1023], k, 1e-12));
  }
}
BENCHMARK(BM_LensNormBisect);

void BM_Play(benchmark::State& state, const char* pusher, const char* chooser) {
  GameConfig c;
  c.gamma = std::numbers::pi / 4;
  c.n = state.range(0);
  c.pusher = parse_pusher_spec(pusher);
  c.chooser = parse_chooser_spec(chooser);
  c.record_full = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(play(c).final_value);
  }
  state.SetItemsProcessed(state.iterations() * c.n);
}
BENCHMARK_CAPTURE(BM_Play, tangent_vs_cone, "tangent", "cone")->Arg(10'000)->Arg(100'000);
BENCHMARK_CAPTURE(BM_Play, random_vs_cone, "random", "cone")->Arg(10'000);
BENCHMARK_CAPTURE(BM_Play, tangent_vs_lookahead, "tangent", "lookahead:depth=2,grid=17")
    ->Arg(1'000);

void BM_Minimax(benchmark::State& state) {
  const auto spec = oracle::MinimaxSpec::make(static_cast<int>(state.range(0)), 17,
                                              std::numbers::pi / 4, ValueDef::FinalNorm);
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const auto r = oracle::minimax_value(spec);
    nodes = r.nodes;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_Minimax)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_TCap(benchmark::State& state) {
  const double alpha = alpha_star_closed_form();
  for (auto _ : state) {
    benchmark::DoNotOptimize(t_cap(alpha, std::numbers::pi / 4));
  }
}
BENCHMARK(BM_TCap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
