#include <string>

#include <benchmark/benchmark.h>

#include "nlnt/initial_data.hpp"
#include "nlnt/models.hpp"
#include "nlnt/schemes.hpp"

namespace {

// One step of each scheme on Arrhenius smooth data; range(0) is the cell count.
void step(benchmark::State& state, const std::string& scheme) {
  const int cells = static_cast<int>(state.range(0));
  const nlnt::ModelDef model = nlnt::make_arrhenius(0.2, "constant");
  const nlnt::Grid grid(-1.0, 1.0, cells);
  const nlnt::Stepper stepper(model, grid, nlnt::Boundary::Periodic, nlnt::parse_scheme(scheme));
  const nlnt::SystemState s0 = nlnt::init_cell_averages(
      nlnt::find_initial_data("arrhenius-smooth").profile, 1, grid);
  const double dt = 0.2 * grid.dx();
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(s0, dt));
  state.SetItemsProcessed(state.iterations() * cells);
}

void BM_StepLxF1(benchmark::State& s) { step(s, "LxF1"); }
void BM_StepLxF2(benchmark::State& s) { step(s, "LxF2"); }
void BM_StepNtV1(benchmark::State& s) { step(s, "NT-v1"); }
void BM_StepNtV2(benchmark::State& s) { step(s, "NT-v2"); }
BENCHMARK(BM_StepLxF1)->Arg(640)->Arg(20480);
BENCHMARK(BM_StepLxF2)->Arg(640)->Arg(20480);
BENCHMARK(BM_StepNtV1)->Arg(640)->Arg(20480);
BENCHMARK(BM_StepNtV2)->Arg(640)->Arg(20480);

}  // namespace
