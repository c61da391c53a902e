// Serial reference fuzzer against the OpenMP one, on corpus programs. Both
// produce bitwise-equal summaries; the bench checks that before timing.
#include "absint/analysis/compositional.hpp"
#include "absint/analysis/transitional.hpp"
#include "absint/audit/fuzz.hpp"
#include "absint/pipeline/pipeline.hpp"

#include <benchmark/benchmark.h>

#include <stdexcept>

using namespace absint;

namespace {

const AnnotatedProgram& corpus_program(const std::string& name) {
  static std::map<std::string, AnnotatedProgram> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, load_program(std::string(ABSINT_SOURCE_DIR) + "/data/corpus/" + name + ".c"))
             .first;
  return it->second;
}

const char* kPrograms[] = {"gauss_sum", "deep-nested", "mono-crafted_7", "as2013-hybrid"};

FuzzConfig config(std::int64_t runs) { return {static_cast<std::size_t>(runs), 0, 10'000}; }

void BM_FuzzSerial(benchmark::State& state) {
  ConcreteProgram cp(corpus_program(kPrograms[state.range(0)]));
  for (auto _ : state) benchmark::DoNotOptimize(fuzz_serial(cp, config(state.range(1))));
  state.SetLabel(kPrograms[state.range(0)]);
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_FuzzParallel(benchmark::State& state) {
  ConcreteProgram cp(corpus_program(kPrograms[state.range(0)]));
  if (!(fuzz_serial(cp, config(state.range(1))) == fuzz_parallel(cp, config(state.range(1)))))
    state.SkipWithError("parallel summary differs from the serial one");
  for (auto _ : state) benchmark::DoNotOptimize(fuzz_parallel(cp, config(state.range(1))));
  state.SetLabel(kPrograms[state.range(0)]);
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_Compositional(benchmark::State& state) {
  const auto& p = corpus_program(kPrograms[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(run_compositional(p));
  state.SetLabel(kPrograms[state.range(0)]);
}

void BM_Transitional(benchmark::State& state) {
  const auto& p = corpus_program(kPrograms[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(run_transitional(p));
  state.SetLabel(kPrograms[state.range(0)]);
}

}  // namespace

BENCHMARK(BM_FuzzSerial)->ArgsProduct({{0, 1, 2, 3}, {1000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FuzzParallel)->ArgsProduct({{0, 1, 2, 3}, {1000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Compositional)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Transitional)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
