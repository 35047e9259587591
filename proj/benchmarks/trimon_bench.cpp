#include <benchmark/benchmark.h>

#include <vector>

#include "trimon/circuit_model.hpp"
#include "trimon/crossing.hpp"
#include "trimon/gates.hpp"
#include "trimon/pulse.hpp"
#include "trimon/readout.hpp"
#include "trimon/spectrum.hpp"
#include "trimon/tomography.hpp"

namespace {

using namespace trimon;

DeviceSpec canonical_device() {
  return capacitances_from_charging_energies(
      8.7e9, charging_energies_from_anharmonicities({-111.0e6, -116.0e6, -138.6e6}));
}

void BM_DeriveParams(benchmark::State& state) {
  const DeviceSpec spec = canonical_device();
  for (auto _ : state) benchmark::DoNotOptimize(derive_params(spec));
}
BENCHMARK(BM_DeriveParams);

// Argument: n_max per mode; the Hilbert space has n_max^3 states.
void BM_ExactSpectrumQuartic(benchmark::State& state) {
  const DeviceSpec spec = canonical_device();
  SpectrumOptions opts;
  opts.n_max = static_cast<int>(state.range(0));
  opts.potential = Potential::Quartic;
  for (auto _ : state) benchmark::DoNotOptimize(exact_spectrum(spec, opts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExactSpectrumQuartic)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_ExactSpectrumFullCosine(benchmark::State& state) {
  const DeviceSpec spec = canonical_device();
  SpectrumOptions opts;
  opts.n_max = static_cast<int>(state.range(0));
  opts.potential = Potential::FullCosine;
  for (auto _ : state) benchmark::DoNotOptimize(exact_spectrum(spec, opts));
}
BENCHMARK(BM_ExactSpectrumFullCosine)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

// Argument: time step in ps for a 241 ns single-band pi pulse.
void BM_PropagateCnotPulse(benchmark::State& state) {
  const SpinModel model = SpinModel::measured_reference();
  PulseShape shape = PulseShape::flat_top(241e-9, 10e-9);
  shape.amp_hz = 2.84e6;
  const std::vector<DriveTone> tones =
      tones_for({Qubit::A, Band::Lower, false, -0.5 * kPi, kPi}, shape, model, 0.0);
  PropagationOptions opts;
  opts.dt_s = static_cast<double>(state.range(0)) * 1e-12;
  for (auto _ : state) benchmark::DoNotOptimize(propagate(tones, model, opts));
  state.counters["steps"] = 241e-9 / opts.dt_s;
}
BENCHMARK(BM_PropagateCnotPulse)->Arg(1)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_SimulateSwapCircuit(benchmark::State& state) {
  const SpinModel model = SpinModel::measured_reference();
  for (auto _ : state) benchmark::DoNotOptimize(simulate_circuit(swap_sequence(), model));
}
BENCHMARK(BM_SimulateSwapCircuit)->Unit(benchmark::kMillisecond);

// Argument: shots per setting.
void BM_SampleTomography(benchmark::State& state) {
  const Matrix4cd u = apply_with_frame(bell_sequence()).logical();
  const auto input = TomographyInput::from_preparation(u);
  const MeasurementModel readout = MeasurementModel::default_overlap();
  const auto shots = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_tomography(input, readout, {shots, 42}));
  state.SetItemsProcessed(state.iterations() * 18 * static_cast<int64_t>(shots));
}
BENCHMARK(BM_SampleTomography)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

// Argument: Nelder-Mead restarts.
void BM_MleReconstruct(benchmark::State& state) {
  const Matrix4cd u = apply_with_frame(bell_sequence()).logical();
  const MeasurementData d = run_tomography(TomographyInput::from_preparation(u),
                                           MeasurementModel::default_overlap(), {10000, 42});
  MleOptions opts;
  opts.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mle_reconstruct(d.f, opts));
}
BENCHMARK(BM_MleReconstruct)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_FitAvoidedCrossing(benchmark::State& state) {
  CrossingModel truth;
  truth.omega_max_hz = 8e9;
  truth.flux_scale = 0.35;
  truth.omega_q_hz = 6e9;
  truth.j_hz = 38.8e6;
  std::vector<double> flux(56);
  for (int i = 0; i < 56; ++i) flux[i] = 0.6 + 0.55 * i / 55.0;
  const auto data = synthetic_crossing(truth, flux, 0.5e6, 7);
  for (auto _ : state) benchmark::DoNotOptimize(fit_avoided_crossing(data));
}
BENCHMARK(BM_FitAvoidedCrossing)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
