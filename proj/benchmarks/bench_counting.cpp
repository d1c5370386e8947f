#include <benchmark/benchmark.h>

#include "surfstates/counting.hpp"
#include "surfstates/hamiltonians.hpp"

using namespace surfstates;

namespace {

Eigen::MatrixXd landau_field() {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, 2);
  B(0, 1) = 1.0;
  B(1, 0) = -1.0;
  return B;
}

SparseHermitian landau(double L, double h) { return build_transverse(LatticeWindow::cube(2, L, h), landau_field()).matrix; }

// One count on the same matrix through both backends; the crossover sets dense_cap.
void BM_CountDense(benchmark::State& state) {
  const auto H = landau(static_cast<double>(state.range(0)) * 0.25, 0.25);
  CountingOptions opts;
  opts.dense_cap = static_cast<std::size_t>(H.rows());
  for (auto _ : state) benchmark::DoNotOptimize(count_below(H, 1.0, opts).count);
  state.counters["n"] = static_cast<double>(H.rows());
}
BENCHMARK(BM_CountDense)->Arg(16)->Arg(24)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_CountInertia(benchmark::State& state) {
  const auto H = landau(static_cast<double>(state.range(0)) * 0.25, 0.25);
  CountingOptions opts;
  opts.dense_cap = 0;
  for (auto _ : state) benchmark::DoNotOptimize(count_below(H, 1.0, opts).count);
  state.counters["n"] = static_cast<double>(H.rows());
}
BENCHMARK(BM_CountInertia)->Arg(16)->Arg(24)->Arg(32)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

// Repeated counts reuse the symbolic analysis.
void BM_CounterReuse(benchmark::State& state) {
  const auto H = landau(20.0, 0.1);
  CountingOptions opts;
  opts.dense_cap = 0;
  SpectrumCounter counter(H, opts);
  double E = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(counter(E));
    E = E > 3.5 ? 0.5 : E + 0.25;
  }
  state.counters["n"] = static_cast<double>(H.rows());
}
BENCHMARK(BM_CounterReuse)->Unit(benchmark::kMillisecond);

}  // namespace
