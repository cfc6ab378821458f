#include <benchmark/benchmark.h>

#include <numbers>

#include "isospec/charfn.hpp"
#include "isospec/family.hpp"
#include "isospec/fredholm.hpp"
#include "isospec/spectrum.hpp"

namespace {

using namespace isospec;

constexpr double kA = std::numbers::pi / 4.0;

FamilyMember demo_member(int nu) {
  const auto p = analytic_pair(kA);
  return build_member(p.h, p.eta, p.e, nu, cplx{2.0, 3.0}, kA);
}

void BM_DeltaClosed(benchmark::State& state) {
  const auto m = demo_member(1);
  const ClosedCharacteristic f(build_w(m.q, m.setup(), 0));
  cplx lambda{37.0, 1.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(lambda));
    lambda += 1e-9;
  }
}
BENCHMARK(BM_DeltaClosed);

void BM_BuildW(benchmark::State& state) {
  const auto m = demo_member(1);
  for (auto _ : state) benchmark::DoNotOptimize(build_w(m.q, m.setup(), 0));
}
BENCHMARK(BM_BuildW)->Unit(benchmark::kMillisecond);

void BM_DeltaDirect(benchmark::State& state) {
  const auto m = demo_member(1);
  const DirectCharacteristic f(m.q, m.setup(), 0, static_cast<int>(state.range(0)));
  cplx lambda{37.0, 1.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(lambda));
    lambda += 1e-9;
  }
}
BENCHMARK(BM_DeltaDirect)->Arg(512)->Arg(2048)->Unit(benchmark::kMicrosecond);

void BM_NystromEigenvalues(benchmark::State& state) {
  const FredholmOperator op(kA, analytic_pair(kA).h);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nystrom_eigenvalues(op, n));
}
BENCHMARK(BM_NystromEigenvalues)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CountRoots(benchmark::State& state) {
  const auto m = demo_member(1);
  const ClosedCharacteristic f(build_w(m.q, m.setup(), 1));
  const CharFn delta = [&f](cplx l) { return f(l); };
  for (auto _ : state) benchmark::DoNotOptimize(count_roots(delta, {{-50.0, -10.0}, {420.25, 10.0}}));
}
BENCHMARK(BM_CountRoots)->Unit(benchmark::kMillisecond);

void BM_ComputeSpectrum(benchmark::State& state) {
  const auto m = demo_member(1);
  const ClosedCharacteristic f(build_w(m.q, m.setup(), 1));
  const CharFn delta = [&f](cplx l) { return f(l); };
  for (auto _ : state) benchmark::DoNotOptimize(compute_spectrum(delta, 1, 1, 20));
}
BENCHMARK(BM_ComputeSpectrum)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
