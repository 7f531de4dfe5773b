#include <benchmark/benchmark.h>

#include <hippo/bit_vector.hpp>
#include <hippo/wavelet_matrix.hpp>

#include <random>

namespace {

hippo::DynamicBitVector make_bv(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    hippo::DynamicBitVector bv;
    for (std::size_t i = 0; i < n; ++i) bv.push_back(rng() & 1);
    return bv;
}

void BM_BitVectorAppend(benchmark::State& state) {
    std::mt19937_64 rng(1);
    for (auto _ : state) {
        state.PauseTiming();
        hippo::DynamicBitVector bv;
        state.ResumeTiming();
        for (std::int64_t i = 0; i < state.range(0); ++i) bv.push_back(rng() & 1);
        benchmark::DoNotOptimize(bv.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BitVectorAppend)->Range(1 << 12, 1 << 20);

void BM_BitVectorRandomInsert(benchmark::State& state) {
    std::mt19937_64 rng(2);
    for (auto _ : state) {
        state.PauseTiming();
        hippo::DynamicBitVector bv;
        state.ResumeTiming();
        for (std::int64_t i = 0; i < state.range(0); ++i) {
            bv.insert(rng() % (bv.size() + 1), rng() & 1);
        }
        benchmark::DoNotOptimize(bv.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BitVectorRandomInsert)->Range(1 << 12, 1 << 18);

void BM_BitVectorRank(benchmark::State& state) {
    const auto bv = make_bv(static_cast<std::size_t>(state.range(0)), 3);
    std::mt19937_64 rng(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bv.rank1(rng() % (bv.size() + 1)));
    }
}
BENCHMARK(BM_BitVectorRank)->Range(1 << 14, 1 << 22);

void BM_BitVectorSelect(benchmark::State& state) {
    const auto bv = make_bv(static_cast<std::size_t>(state.range(0)), 5);
    std::mt19937_64 rng(6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bv.select1(1 + rng() % bv.ones()));
    }
}
BENCHMARK(BM_BitVectorSelect)->Range(1 << 14, 1 << 22);

void BM_WaveletAppend(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const std::uint32_t width = 16;
    for (auto _ : state) {
        state.PauseTiming();
        hippo::DynamicWaveletMatrix wm(width);
        state.ResumeTiming();
        for (std::int64_t i = 0; i < state.range(0); ++i) wm.append(rng() & 0xffffu);
        benchmark::DoNotOptimize(wm.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WaveletAppend)->Range(1 << 10, 1 << 18);

void BM_WaveletAccess(benchmark::State& state) {
    std::mt19937_64 rng(8);
    hippo::DynamicWaveletMatrix wm(16);
    for (std::int64_t i = 0; i < state.range(0); ++i) wm.append(rng() & 0xffffu);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wm.access(rng() % wm.size()));
    }
}
BENCHMARK(BM_WaveletAccess)->Range(1 << 12, 1 << 20);

void BM_WaveletRank(benchmark::State& state) {
    std::mt19937_64 rng(9);
    hippo::DynamicWaveletMatrix wm(16);
    for (std::int64_t i = 0; i < state.range(0); ++i) wm.append(rng() % 1000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wm.rank(rng() % 1000, rng() % (wm.size() + 1)));
    }
}
BENCHMARK(BM_WaveletRank)->Range(1 << 12, 1 << 20);

}  // namespace

BENCHMARK_MAIN();
