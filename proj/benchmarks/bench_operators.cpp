#include <benchmark/benchmark.h>

#include "surfstates/counting.hpp"
#include "surfstates/hamiltonians.hpp"

using namespace surfstates;

namespace {

void BM_BuildTransverse(benchmark::State& state) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, 2);
  B(0, 1) = 1.0;
  B(1, 0) = -1.0;
  const auto window = LatticeWindow::cube(2, static_cast<double>(state.range(0)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(build_transverse(window, B).matrix.nonZeros());
  state.counters["n"] = static_cast<double>(window.size());
}
BENCHMARK(BM_BuildTransverse)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_DisorderedOperator(benchmark::State& state) {
  SurfaceModel m;
  m.B = Eigen::MatrixXd::Zero(2, 2);
  m.B(0, 1) = 1.0;
  m.B(1, 0) = -1.0;
  m.parallel = solve_parallel(ExplicitSpectrumModel{{-1.5, -0.4}, 0.0}, std::nullopt, 2);
  m.mode = LongitudinalMode::injected(2);
  m.disorder = DisorderModel{{CompactShape{0.5, 1.0}, ConstantFactor{}}, CouplingLaw::uniform(0.3)};
  SurfaceExperiment exp(m, LatticeWindow::cube(2, static_cast<double>(state.range(0)), 0.25));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(exp.disordered_operator(seed++).matrix.nonZeros());
}
BENCHMARK(BM_DisorderedOperator)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GroundEnergyIterative(benchmark::State& state) {
  const auto op = build_transverse(LatticeWindow::cube(2, static_cast<double>(state.range(0)), 0.1),
                                   Eigen::MatrixXd::Zero(2, 2));
  for (auto _ : state) benchmark::DoNotOptimize(ground_energy(op));
}
BENCHMARK(BM_GroundEnergyIterative)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
