#include <benchmark/benchmark.h>

#include "pdtk/analysis.hpp"
#include "pdtk/fixtures.hpp"
#include "pdtk/h3.hpp"
#include "pdtk/normalize.hpp"
#include "pdtk/reversal.hpp"

using namespace pdtk;

namespace {

const ColoredAutomaton& colored_h3() {
  static const auto m = from_transducer(build_h3_machine(), h3_values());
  return m;
}

std::string h3_input(std::size_t part) {
  std::string x;
  for (std::size_t i = 0; i < part; ++i) x += "01"[i % 3 == 0];
  return x + "#" + reversed(x) + "#" + x;
}

void BM_OutputsH3(benchmark::State& st) {
  const auto m = build_h3_machine();
  Simulator sim(m);
  const auto w = h3_input(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sim.outputs(w, default_step_bound(w.size())));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_OutputsH3)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_ColorsIdealH3(benchmark::State& st) {
  static const auto ideal = to_ideal_shape(colored_h3()).first;
  ColorSimulator sim(ideal);
  const auto w = h3_input(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sim.colors(w, default_step_bound(w.size())));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_ColorsIdealH3)->RangeMultiplier(4)->Range(4, 64)->Complexity();

void BM_TabulateH3(benchmark::State& st) {
  const auto m = build_h3_machine();
  for (auto _ : st) benchmark::DoNotOptimize(tabulate(m, static_cast<std::size_t>(st.range(0)), {}, 1));
}
BENCHMARK(BM_TabulateH3)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_IdealShape(benchmark::State& st) {
  const std::vector<ColoredAutomaton> corpus{colored_h3(), fixtures::palindrome_matcher(), fixtures::dyck_counter()};
  const auto& m = corpus[static_cast<std::size_t>(st.range(0))];
  for (auto _ : st) benchmark::DoNotOptimize(to_ideal_shape(m));
}
BENCHMARK(BM_IdealShape)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_ReverseH3(benchmark::State& st) {
  const auto e = make_stack_emptying(colored_h3());
  for (auto _ : st) benchmark::DoNotOptimize(reverse(e));
}
BENCHMARK(BM_ReverseH3)->Unit(benchmark::kMillisecond);

void BM_DSet(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(compute_D(colored_h3(), static_cast<std::size_t>(st.range(0)), "(1,2)"));
}
BENCHMARK(BM_DSet)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_LemmaProbes(benchmark::State& st) {
  for (auto _ : st) {
    PathAssignment pi(colored_h3());
    benchmark::DoNotOptimize(lemma_probes(pi, static_cast<std::size_t>(st.range(0))));
  }
}
BENCHMARK(BM_LemmaProbes)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
