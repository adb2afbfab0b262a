// Serial reference vs OpenMP paths of the per-node kernels.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "hypocauchy/cauchy.hpp"
#include "hypocauchy/loj.hpp"

using namespace hypocauchy;

namespace {

const Region kSquare = Region::rectangle(-1, 1, -1, 1);

FirstIntegral arc3() { return FirstIntegral::arc_normal(3, Region::rectangle(-1.5, 1.5, -1.5, 1.5)); }

QuadratureSpec spec() {
  QuadratureSpec s;
  s.rel_tol = 1e-6;
  s.max_depth = 60;
  s.exclusion_radius_floor = 1e-5;
  return s;
}

void apply_tz(benchmark::State& state, Execution exec) {
  const auto z = arc3();
  const Field f = [](Point p) { return Complex(1.0 + 0.5 * p.x, 0.3 * p.y); };
  const Grid grid = Grid::cell_centred(kSquare, static_cast<std::size_t>(state.range(0)),
                                       static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto u = apply_TZ(z, kSquare, f, grid, spec(), Complex(0, 0.5), 2.0, exec);
    benchmark::DoNotOptimize(u.values.data());
  }
  state.counters["nodes"] = static_cast<double>(grid.size());
  state.counters["threads"] = exec == Execution::Serial ? 1 : omp_get_max_threads();
}

void kernel_norms(benchmark::State& state, Execution exec) {
  const auto z = arc3();
  std::vector<Point> pts;
  const Grid grid = Grid::cell_centred(kSquare, 5, 5);
  for (std::size_t i = 0; i < grid.size(); ++i) pts.push_back(grid.node(i));
  QuadratureSpec s = spec();
  s.exclusion_radius_floor = 1e-4;
  for (auto _ : state) {
    auto rep = kernel_sup_experiment(z, kSquare, 1.25, pts, s, 100, exec);
    benchmark::DoNotOptimize(rep.sup_norm);
  }
}

// The sampler has no serial switch; the thread count is pinned instead.
void inequality(benchmark::State& state) {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_inequality_arc(3, 1000000, 7));
  omp_set_num_threads(saved);
  state.counters["threads"] = static_cast<double>(state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(apply_tz, serial, Execution::Serial)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(apply_tz, parallel, Execution::Parallel)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(kernel_norms, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(kernel_norms, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(inequality)->Arg(1)->Arg(omp_get_num_procs())->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
