#include <benchmark/benchmark.h>

#include "cgbath/coefficients.hpp"
#include "cgbath/dynamics.hpp"
#include "cgbath/sweep.hpp"
#include "cgbath/witness.hpp"

using namespace cgbath;

namespace {

const BathSpectrum kBath{0.1, 1000.0};

void BM_DissipativeEntryFrequency(benchmark::State& state) {
    const SystemConfig sys{1.0, 1.2, static_cast<double>(state.range(0)), 0.1};
    const quad::QuadratureConfig cfg = CoefficientOptions{}.frequency;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dissipative_entry_frequency_domain(kBath, sys, 1, 2, Sign::Minus, Sign::Minus, cfg));
    }
}
BENCHMARK(BM_DissipativeEntryFrequency)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_DissipativeBlockTime(benchmark::State& state) {
    const BathSpectrum bath{10.0, 10.0};
    const SystemConfig sys{1.0, 1.2, static_cast<double>(state.range(0)), 0.1};
    for (auto _ : state) benchmark::DoNotOptimize(dissipative_block_time_domain(bath, sys, 1, 2));
}
BENCHMARK(BM_DissipativeBlockTime)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_HamiltonianEntry(benchmark::State& state) {
    const SystemConfig sys{1.0, 1.2, static_cast<double>(state.range(0)), 0.1};
    const TimeDomainKernel kernel = TimeDomainKernel::from_bath(kBath);
    const quad::QuadratureConfig cfg = CoefficientOptions{}.time;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hamiltonian_entry(kernel, sys, 1, 2, Sign::Minus, Sign::Minus, cfg));
    }
}
BENCHMARK(BM_HamiltonianEntry)->Arg(10)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_Witness(benchmark::State& state) {
    const SystemConfig sys{1.0, 1.05, 20.0, 0.1};
    for (auto _ : state) benchmark::DoNotOptimize(witness(kBath, sys));
}
BENCHMARK(BM_Witness)->Unit(benchmark::kMillisecond);

void BM_GeneratorAndOnset(benchmark::State& state) {
    const BathSpectrum bath{1.0, 10.0};
    const SystemConfig sys{1.0, 1.2, 20.0, 0.1};
    for (auto _ : state) benchmark::DoNotOptimize(entanglement_onset(bath, sys));
}
BENCHMARK(BM_GeneratorAndOnset)->Unit(benchmark::kMillisecond);

void BM_Concurrence(benchmark::State& state) {
    DensityMatrix rho;
    rho.entries.setConstant(cd(0.05, 0.0));
    rho.entries.diagonal() << 0.4, 0.2, 0.3, 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(concurrence(rho));
}
BENCHMARK(BM_Concurrence);

void BM_Sweep(benchmark::State& state) {
    SweepSpec spec;
    spec.axes = {{Parameter::DeltaOmega, {0.0, 0.01, 0.02, 0.05}}, {Parameter::Beta, {0.01, 0.03, 0.1}}};
    spec.fixed = {{Parameter::OmegaMean, 1.0}, {Parameter::OmegaC, 1000.0}, {Parameter::DeltaT, 10.0},
                  {Parameter::Lambda, 0.1}};
    SweepOptions opts;
    opts.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, opts));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
