#include <numbers>

#include <benchmark/benchmark.h>

#include "zoh/controller.hpp"
#include "zoh/design.hpp"
#include "zoh/plant.hpp"
#include "zoh/sim.hpp"

namespace zoh {
namespace {

void BM_ZohLaw(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ControlLawConfig cfg{25.2, 0.7};
  Vector E = Vector::LinSpaced(m, -0.6, 0.9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(zoh_law(E, cfg).u);
    E *= -1.0;
  }
}
BENCHMARK(BM_ZohLaw)->Arg(1)->Arg(4)->Arg(16);

void BM_EvaluateDesign(benchmark::State& state) {
  DesignInputs in;
  in.norms = funnel_norms(FunnelSpec::constant(0.08));
  in.bounds = {2.0, 1.0, 1.0};
  in.yref_acc_bound = 0.98696;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_design(in).tau_max);
}
BENCHMARK(BM_EvaluateDesign);

void BM_SimulateExampleOne(benchmark::State& state) {
  const LinearIOPlant plant = mass_on_car();
  const auto ref = ReferenceSpec::sinusoid_sum({{{0.4, std::numbers::pi / 2, 0.0}}});
  const FunnelSpec funnel = FunnelSpec::constant(0.08);
  const ControlLawConfig law{25.2, 0.7};
  const SimConfig cfg{1.8e-3, 2.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(simulate(plant, ref, funnel, law, cfg).rows.size());
}
BENCHMARK(BM_SimulateExampleOne)->Arg(4)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace zoh

BENCHMARK_MAIN();
