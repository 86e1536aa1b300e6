#include <benchmark/benchmark.h>

#include "graphheat/graph.hpp"
#include "graphheat/heat_content.hpp"
#include "graphheat/paths.hpp"
#include "graphheat/special_functions.hpp"
#include "graphheat/spectral.hpp"

namespace gh = graphheat;

namespace {

using gh::VertexKind;

gh::MetricGraph lasso() {
  return gh::MetricGraph({VertexKind::Dirichlet, VertexKind::Standard}, {gh::Edge{0, 0, 1, 1.0}, gh::Edge{1, 1, 1, 2.0}});
}

gh::MetricGraph figure_eight() {
  return gh::MetricGraph({VertexKind::Dirichlet, VertexKind::Standard},
                         {gh::Edge{0, 0, 1, 1.0}, gh::Edge{1, 1, 1, 1.0}, gh::Edge{2, 1, 1, 1.5}});
}

gh::EvalConfig path_sum(unsigned threads) {
  gh::EvalConfig cfg;
  cfg.tolerance = 1e-12;
  cfg.method = gh::Method::PathSum;
  cfg.threads = threads;
  return cfg;
}

void BM_H(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gh::H(x));
    x = x > 30.0 ? 0.0 : x + 0.37;
  }
}
BENCHMARK(BM_H);

// Walk count grows roughly exponentially in t; the argument is t in hundredths.
void BM_PathSumLasso(benchmark::State& state) {
  const auto g = lasso();
  const double t = static_cast<double>(state.range(0)) / 100.0;
  std::size_t terms = 0;
  for (auto _ : state) {
    const auto v = gh::heat_content(g, t, path_sum(1));
    terms = v.terms_used;
    benchmark::DoNotOptimize(v.value);
  }
  state.counters["walks"] = static_cast<double>(terms);
}
BENCHMARK(BM_PathSumLasso)->Arg(5)->Arg(50)->Arg(200)->Arg(400)->Unit(benchmark::kMicrosecond);

void BM_PathSumFigureEightThreads(benchmark::State& state) {
  const auto g = figure_eight();
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gh::heat_content(g, 1.0, path_sum(threads)).value);
}
BENCHMARK(BM_PathSumFigureEightThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EnumerateDirichletPaths(benchmark::State& state) {
  const auto g = figure_eight();
  const double L = static_cast<double>(state.range(0));
  std::size_t count = 0;
  for (auto _ : state) {
    const auto paths = gh::enumerate(g, gh::PathClass::dirichlet(g), L);
    count = paths.size();
    benchmark::DoNotOptimize(paths.data());
  }
  state.counters["paths"] = static_cast<double>(count);
}
BENCHMARK(BM_EnumerateDirichletPaths)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_HeatKernel(benchmark::State& state) {
  const auto g = lasso();
  for (auto _ : state) benchmark::DoNotOptimize(gh::heat_kernel(g, {0, 0.3}, {1, 1.2}, 0.5, path_sum(1)).value);
}
BENCHMARK(BM_HeatKernel)->Unit(benchmark::kMicrosecond);

// Dense spectrum cost; the argument is the node count of the lasso mesh.
void BM_SpectralEigen(benchmark::State& state) {
  const auto g = lasso();
  const double h = 3.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    const auto m = gh::build(g, h);
    benchmark::DoNotOptimize(gh::eigen_heat_content(m, 0.5));
  }
}
BENCHMARK(BM_SpectralEigen)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Stepper(benchmark::State& state) {
  const auto m = gh::build(lasso(), 3.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gh::stepper_heat_content(m, 1.0));
}
BENCHMARK(BM_Stepper)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
