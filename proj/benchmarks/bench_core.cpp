// Cost of the dense kernels that dominate scans: the Hermitian eigensolver
// (one per grid point), the field matrix exponential behind the analytic
// states, the QGT sum and the Bures stencil.

#include <benchmark/benchmark.h>

#include "djcm/bures.hpp"
#include "djcm/model.hpp"
#include "djcm/qgt.hpp"
#include "djcm/sweep.hpp"

namespace {

using namespace djcm;

void BM_HamiltonianEigen(benchmark::State& state) {
  const FockQubitSpace space(static_cast<int>(state.range(0)));
  const CMatrix h = build_hamiltonian(space, {1.0, 0.8, 0.3}).matrix();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermitian_eigendecomposition(h).values.data());
  }
  state.SetLabel("dim=" + std::to_string(space.dim()));
}
BENCHMARK(BM_HamiltonianEigen)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_AnalyticEigenstate(benchmark::State& state) {
  const FockQubitSpace space(static_cast<int>(state.range(0)));
  const ModelParams p(1.0, 0.9, 0.0);
  const EigenLabel label = EigenLabel::bright(3, Branch::plus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize_eigenstate(space, label, p).state.amplitudes().data());
  }
}
BENCHMARK(BM_AnalyticEigenstate)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_QgtSum(benchmark::State& state) {
  const FockQubitSpace space(200);
  const SpectralData data = prepare_spectral_data(space, {1.0, 0.8, 0.0});
  const EigenLabel label = EigenLabel::bright(2, Branch::minus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qgt_sum(data, label).G.data());
  }
}
BENCHMARK(BM_QgtSum)->Unit(benchmark::kMillisecond);

void BM_SpectralDataPreparation(benchmark::State& state) {
  const FockQubitSpace space(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(prepare_spectral_data(space, {1.0, 0.8, 0.0}).eigen.values.data());
  }
}
BENCHMARK(BM_SpectralDataPreparation)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_QgtFiniteDifference(benchmark::State& state) {
  const FockQubitSpace space(200);
  const ModelParams p(1.0, 0.8, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qgt_fd(space, p, EigenLabel::dark()).G.data());
  }
}
BENCHMARK(BM_QgtFiniteDifference)->Unit(benchmark::kMillisecond);

void BM_BuresMetric(benchmark::State& state) {
  const FockQubitSpace space(200);
  const ModelParams p(1.0, 0.8, 0.0);
  const auto subsystem = static_cast<Subsystem>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bures_metric(space, p, EigenLabel::bright(1, Branch::plus), subsystem).g.data());
  }
  state.SetLabel(std::string(to_string(subsystem)));
}
BENCHMARK(BM_BuresMetric)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_UhlmannFidelity(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const FockQubitSpace space(dim / 2 - 1);
  const ModelParams p(1.0, 0.5, 0.0);
  const DensityMatrix a = DensityMatrix::pure(realize_eigenstate(space, EigenLabel::dark(), p).state);
  const DensityMatrix b =
      DensityMatrix::pure(realize_eigenstate(space, EigenLabel::dark(), p.with_eta(0.51)).state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(uhlmann_fidelity(a, b));
  }
}
BENCHMARK(BM_UhlmannFidelity)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SweepTrajectory(benchmark::State& state) {
  const FockQubitSpace space(100);
  const RampSchedule ramp{0.4, ramp_time_to(0.4, 0.8)};
  SweepOptions options;
  options.samples = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(space, ramp, EigenLabel::dark(), 5e-4, options).final_fidelity());
  }
}
BENCHMARK(BM_SweepTrajectory)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
