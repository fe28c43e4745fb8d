#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "nlnt/correlator.hpp"

namespace {

// Range: cells, taps.
void correlate(benchmark::State& state, nlnt::BandCorrelator::Method method) {
  const int cells = static_cast<int>(state.range(0));
  const int taps = static_cast<int>(state.range(1));
  std::vector<double> w(static_cast<std::size_t>(taps), 1.0 / taps);
  const nlnt::BandCorrelator c(w, 0, cells, nlnt::Boundary::Periodic, method);
  std::vector<double> u(static_cast<std::size_t>(cells)), out(u.size());
  for (int j = 0; j < cells; ++j) u[static_cast<std::size_t>(j)] = std::sin(0.01 * j);
  for (auto _ : state) {
    c.apply(u, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * cells);
}

void args(benchmark::internal::Benchmark* b) {
  for (int cells : {1280, 20480}) {
    for (int taps : {8, 32, 128, 512}) b->Args({cells, taps});
  }
}

void BM_CorrelateDirect(benchmark::State& s) { correlate(s, nlnt::BandCorrelator::Method::Direct); }
void BM_CorrelateFft(benchmark::State& s) { correlate(s, nlnt::BandCorrelator::Method::Fft); }
BENCHMARK(BM_CorrelateDirect)->Apply(args);
BENCHMARK(BM_CorrelateFft)->Apply(args);

}  // namespace
