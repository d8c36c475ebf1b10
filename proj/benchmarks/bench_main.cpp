#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "eci/cachesim.hpp"
#include "eci/classifier.hpp"
#include "eci/rdist.hpp"

namespace {

std::vector<eci::ClassifiedRequest> make_stream(std::size_t n, std::uint64_t blocks,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> block(0, blocks - 1);
  std::bernoulli_distribution is_write(0.4);
  std::vector<eci::IoRequest> reqs(n);
  for (std::size_t i = 0; i < n; ++i)
    reqs[i] = {0, i, block(rng), is_write(rng) ? eci::Op::Write : eci::Op::Read, 1};
  eci::Classifier cls;
  return cls.classify(reqs);
}

void BM_StackDistance(benchmark::State& state) {
  auto stream = make_stream(static_cast<std::size_t>(state.range(0)), 4096, 7);
  for (auto _ : state) {
    auto profile = eci::stack_distance(stream);
    benchmark::DoNotOptimize(profile);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StackDistance)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

void BM_LruSimulate(benchmark::State& state) {
  auto stream = make_stream(static_cast<std::size_t>(state.range(0)), 4096, 11);
  eci::CacheConfig cfg{1024, eci::WritePolicy::WB, 5000.0, 100.0};
  for (auto _ : state) {
    auto report = eci::simulate(stream, cfg);
    benchmark::DoNotOptimize(report);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LruSimulate)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

void BM_Classify(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> block(0, 4095);
  std::vector<eci::IoRequest> reqs(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < reqs.size(); ++i)
    reqs[i] = {0, i, block(rng), i % 3 ? eci::Op::Read : eci::Op::Write, 1};
  for (auto _ : state) {
    eci::Classifier cls;
    auto tagged = cls.classify(reqs);
    benchmark::DoNotOptimize(tagged);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Classify)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

}  // namespace

BENCHMARK_MAIN();
