#include <benchmark/benchmark.h>
#include "hwlab/snf.hpp"
using namespace hwlab;
static void BM_placeholder(benchmark::State& st) { for (auto _ : st) benchmark::DoNotOptimize(mat_identity(8)); }
BENCHMARK(BM_placeholder);
BENCHMARK_MAIN();
