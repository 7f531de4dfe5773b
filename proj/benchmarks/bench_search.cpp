#include <benchmark/benchmark.h>

#include <hippo/keyword_extractor.hpp>
#include <hippo/memory_store.hpp>
#include <hippo/retrieval.hpp>

#include <memory>
#include <random>
#include <string>

namespace {

// Synthetic dialogue: turns drawn from a recurring pool so signatures repeat
// the way real conversations do.
std::unique_ptr<hippo::MemoryStore> make_store(std::uint64_t target_tokens) {
    hippo::StoreConfig cfg;
    cfg.sigma = 65536;
    auto store = std::make_unique<hippo::MemoryStore>(cfg);
    std::mt19937_64 rng(0xbe7au);
    std::vector<std::string> phrases;
    for (int p = 0; p < 400; ++p) {
        std::string text;
        for (int w = 0; w < 18; ++w) {
            text += "word" + std::to_string(rng() % 2000) + " ";
        }
        phrases.push_back(text);
    }
    std::int64_t ts = 0;
    while (store->token_count() < target_tokens) {
        std::string text = phrases[rng() % phrases.size()];
        if (rng() % 16 == 0) text += " marker" + std::to_string(rng() % 64);
        store->ingest_entry(rng() % 2 ? "user" : "agent", ts++, "bench", text);
    }
    return store;
}

void BM_HammingBallScan(benchmark::State& state) {
    const auto store = make_store(static_cast<std::uint64_t>(state.range(0)));
    const auto q = store->model().query_signature(std::vector<std::string>{"word42"});
    for (auto _ : state) {
        benchmark::DoNotOptimize(hippo::ball_candidates(*store, q, 2));
    }
    state.counters["distinct"] = static_cast<double>(store->dictionary().distinct());
}
BENCHMARK(BM_HammingBallScan)->Range(1 << 12, 1 << 19);

void BM_Search(benchmark::State& state) {
    const auto store = make_store(static_cast<std::uint64_t>(state.range(0)));
    hippo::DefaultKeywordExtractor extractor;
    hippo::QueryOptions opt;
    std::mt19937_64 rng(11);
    for (auto _ : state) {
        const std::string query = "marker" + std::to_string(rng() % 64) + " word" +
                                  std::to_string(rng() % 2000);
        benchmark::DoNotOptimize(hippo::run_query(*store, extractor, query, opt));
    }
}
BENCHMARK(BM_Search)->Range(1 << 12, 1 << 19);

void BM_Ingest(benchmark::State& state) {
    std::mt19937_64 rng(12);
    for (auto _ : state) {
        state.PauseTiming();
        hippo::StoreConfig cfg;
        hippo::MemoryStore store(cfg);
        state.ResumeTiming();
        std::int64_t ts = 0;
        while (store.token_count() < static_cast<std::uint64_t>(state.range(0))) {
            std::string text;
            for (int w = 0; w < 18; ++w) text += "word" + std::to_string(rng() % 3000) + " ";
            store.ingest_entry("user", ts++, "bench", text);
        }
        benchmark::DoNotOptimize(store.token_count());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ingest)->Range(1 << 10, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
