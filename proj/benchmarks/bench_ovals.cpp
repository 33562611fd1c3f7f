#include <benchmark/benchmark.h>

#include "ovals/asymptotics.hpp"
#include "ovals/foliation.hpp"
#include "ovals/huisken.hpp"

using namespace ovals;

static void BM_SolveBowl(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(solve_bowl(Dimension(2), double(st.range(0))));
}
BENCHMARK(BM_SolveBowl)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_ShootCap(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(shoot_leaf(double(st.range(0)), Dimension(2), 0.0));
}
BENCHMARK(BM_ShootCap)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_SolveTrumpet(benchmark::State& st) {
  const double b = 0.5;
  const double Y = trumpet_seed_height(b, Dimension(2));
  for (auto _ : st) benchmark::DoNotOptimize(solve_trumpet(b, Dimension(2), 0.0, Y));
}
BENCHMARK(BM_SolveTrumpet)->Unit(benchmark::kMillisecond);

static void BM_LeafThrough(benchmark::State& st) {
  AtlasSpec s;
  s.a_max = 60;
  s.b_min = 0.05;
  const auto F = build_foliation(Dimension(2), default_a_grid(s), default_b_grid(s), s.y0);
  double y = 10;
  for (auto _ : st) {
    benchmark::DoNotOptimize(leaf_through(F, y, 0.8));
    y = y > 40 ? 10 : y + 0.37;
  }
}
BENCHMARK(BM_LeafThrough);

static void BM_StepRescaled(benchmark::State& st) {
  AnsatzSpec spec;
  spec.nodes = int(st.range(0));
  const auto S = build_ansatz(spec);
  for (auto _ : st) benchmark::DoNotOptimize(step_rescaled(S, 1e-2));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_StepRescaled)->Arg(1000)->Arg(4000)->Arg(8000)->Unit(benchmark::kMicrosecond);

static void BM_Diagnostics(benchmark::State& st) {
  const auto S = build_ansatz(AnsatzSpec{});
  for (auto _ : st) benchmark::DoNotOptimize(diagnostics(S));
}
BENCHMARK(BM_Diagnostics)->Unit(benchmark::kMicrosecond);

static void BM_Project(benchmark::State& st) {
  const Grid g = default_grid();
  const auto S = build_ansatz(AnsatzSpec{});
  const auto basis = make_basis(7);
  const double dbar = diagnostics(S).dbar;
  for (auto _ : st) {
    const auto v = deviation(graph_profile(S, g));
    benchmark::DoNotOptimize(project(truncate(v, g, dbar, capped_exponent(dbar, 2.0 / 3.0, 0.45)).vbar, g, basis));
  }
}
BENCHMARK(BM_Project)->Unit(benchmark::kMicrosecond);

static void BM_BuildAnsatz(benchmark::State& st) {
  AnsatzSpec spec;
  spec.auto_tip = false;
  for (auto _ : st) benchmark::DoNotOptimize(build_ansatz(spec));
}
BENCHMARK(BM_BuildAnsatz)->Unit(benchmark::kMillisecond);

static void BM_InnerOuter(benchmark::State& st) {
  const auto S = build_ansatz(AnsatzSpec{});
  const Grid g = default_grid();
  for (auto _ : st) benchmark::DoNotOptimize(inner_outer_check(S, g, 4.0));
}
BENCHMARK(BM_InnerOuter)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
