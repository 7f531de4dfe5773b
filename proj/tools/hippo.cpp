// hippo: agentic-memory engine CLI.
//
// Verbs: ingest, query, stats, verify, bench. Exit codes: 0 success,
// 1 empty result (query) or failed verification, 2 errors.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include <hippo/errors.hpp>
#include <hippo/keyword_extractor.hpp>
#include <hippo/memory_store.hpp>
#include <hippo/persist.hpp>
#include <hippo/retrieval.hpp>
#include <hippo/transcript.hpp>

namespace {

using Clock = std::chrono::steady_clock;

struct CreateFlags {
    std::uint32_t sigma = 65536;
    std::uint32_t dims = 1024;
    std::uint32_t bits = 32;
    std::uint32_t nnz = 8;
    std::uint32_t window = 2;
    std::uint64_t seed = 0x48495050ull;
    std::string mode = "hyperplane";

    hippo::StoreConfig to_config() const {
        hippo::StoreConfig cfg;
        cfg.sigma = sigma;
        cfg.signature.dimensions = dims;
        cfg.signature.signature_bits = bits;
        cfg.signature.base_nonzeros = nnz;
        cfg.signature.window_radius = window;
        cfg.signature.seed = seed;
        cfg.signature.mode =
            mode == "topd" ? hippo::SignatureMode::kTopD : hippo::SignatureMode::kHyperplane;
        return cfg;
    }
};

void add_create_flags(CLI::App* cmd, CreateFlags& flags) {
    cmd->add_option("--sigma", flags.sigma, "Vocabulary capacity (fixes the content width)");
    cmd->add_option("--dims", flags.dims, "Random-index embedding dimensionality D");
    cmd->add_option("--bits", flags.bits, "Signature bits d");
    cmd->add_option("--nnz", flags.nnz, "Non-zeros per base vector t");
    cmd->add_option("--window", flags.window, "Context window radius");
    cmd->add_option("--seed", flags.seed, "Master seed");
    cmd->add_option("--mode", flags.mode, "Signature mode")
        ->check(CLI::IsMember({"hyperplane", "topd"}));
}

std::unique_ptr<hippo::KeywordExtractor> make_extractor(const std::string& kind) {
    if (kind == "external") {
        auto cfg = hippo::ExternalExtractorConfig::from_environment();
        if (!cfg.has_value()) {
            std::cerr << "HIPPO_EXTRACTOR_URL is not set; using the default extractor\n";
            return std::make_unique<hippo::DefaultKeywordExtractor>();
        }
        return std::make_unique<hippo::ExternalKeywordExtractor>(*cfg);
    }
    return std::make_unique<hippo::DefaultKeywordExtractor>();
}

std::string format_timestamp(std::int64_t micros) {
    std::time_t secs = static_cast<std::time_t>(micros / 1'000'000);
    std::tm tm_utc{};
    gmtime_r(&secs, &tm_utc);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm_utc.tm_year + 1900,
                  tm_utc.tm_mon + 1, tm_utc.tm_mday, tm_utc.tm_hour, tm_utc.tm_min,
                  tm_utc.tm_sec);
    return buf;
}

int cmd_ingest(const std::string& store_path, const std::string& transcript_path,
               const CreateFlags& flags) {
    const auto started = Clock::now();
    const auto doc = hippo::load_transcript(transcript_path);

    std::unique_ptr<hippo::MemoryStore> store;
    if (std::filesystem::exists(store_path)) {
        store = std::make_unique<hippo::MemoryStore>(hippo::load_store(store_path));
    } else {
        store = std::make_unique<hippo::MemoryStore>(flags.to_config());
    }

    std::uint64_t entries = 0;
    const std::uint64_t tokens_before = store->token_count();
    for (const auto& session : doc.sessions) {
        std::int64_t ordinal = 0;
        for (const auto& turn : session.turns) {
            try {
                store->ingest_entry(turn.speaker, session.timestamp_us + ordinal,
                                    session.session_id, turn.text);
                ++entries;
            } catch (const hippo::CapacityError& e) {
                std::cerr << "vocabulary overflow after " << entries
                          << " ingested entries: " << e.what() << "\n"
                          << "aborting without saving\n";
                return 2;
            } catch (const std::invalid_argument&) {
                std::cerr << "skipping empty turn in session '" << session.session_id << "'\n";
            }
            ++ordinal;
        }
    }
    hippo::save_store(*store, store_path);

    const double secs = std::chrono::duration<double>(Clock::now() - started).count();
    std::printf("%llu entries, %llu tokens ingested into %s in %.3f s\n",
                static_cast<unsigned long long>(entries),
                static_cast<unsigned long long>(store->token_count() - tokens_before),
                store_path.c_str(), secs);
    std::printf("store: %llu entries, %llu tokens, vocab %u/%u\n",
                static_cast<unsigned long long>(store->entry_count()),
                static_cast<unsigned long long>(store->token_count()),
                store->vocabulary().size(), store->vocabulary().capacity());
    return 0;
}

int cmd_query(const std::string& store_path, const std::string& query_text,
              const hippo::QueryOptions& options, const std::string& extractor_kind,
              std::uint64_t budget) {
    const auto store = hippo::load_store(store_path);
    auto extractor = make_extractor(extractor_kind);

    hippo::RetrievedResult result;
    try {
        result = hippo::run_query(store, *extractor, query_text, options);
    } catch (const std::invalid_argument& e) {
        std::cerr << "query error: " << e.what() << "\n";
        return 2;
    }

    std::printf("keywords:");
    for (const auto& kw : result.keywords) std::printf(" %s", kw.c_str());
    std::printf("\n");
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
        const auto& e = result.entries[i];
        std::printf("%2zu. [%s | %s | %s] matched=%u tokens=%llu span=[%llu,%llu]\n    %s\n",
                    i + 1, e.metadata.role.c_str(),
                    format_timestamp(e.metadata.timestamp_us).c_str(),
                    e.metadata.session_id.c_str(), e.matched_keywords,
                    static_cast<unsigned long long>(e.token_count),
                    static_cast<unsigned long long>(e.metadata.alpha),
                    static_cast<unsigned long long>(e.metadata.beta), e.text.c_str());
    }
    std::printf("tokens consumed: %llu\n",
                static_cast<unsigned long long>(result.tokens_consumed));
    std::printf("timing: extraction %.3f ms, search %.3f ms, reconstruction %.3f ms, "
                "total %.3f ms\n",
                result.timing.extraction_ms, result.timing.search_ms,
                result.timing.reconstruction_ms, result.timing.total_ms);

    if (budget > 0) {
        const auto ctx = hippo::answer_context(result, budget);
        std::printf("context (%llu tokens within budget %llu):\n%s",
                    static_cast<unsigned long long>(ctx.tokens_included),
                    static_cast<unsigned long long>(budget), ctx.text.c_str());
    }
    return result.entries.empty() ? 1 : 0;
}

int cmd_stats(const std::string& store_path) {
    const auto store = hippo::load_store(store_path);
    const auto st = store.stats();
    std::printf("entries:             %llu\n", static_cast<unsigned long long>(st.entries));
    std::printf("tokens:              %llu\n", static_cast<unsigned long long>(st.tokens));
    std::printf("distinct signatures: %llu\n",
                static_cast<unsigned long long>(st.distinct_signatures));
    std::printf("vocabulary:          %u of %u\n", st.vocab_size, st.vocab_capacity);
    std::printf("content levels:      %u x %llu bits\n", st.content_width,
                static_cast<unsigned long long>(st.tokens));
    std::printf("signature levels:    %u x %llu bits\n", st.signature_bits,
                static_cast<unsigned long long>(st.tokens));
    std::printf("payload bits:        %llu\n",
                static_cast<unsigned long long>(st.content_level_bits +
                                                st.signature_level_bits));
    std::printf("index overhead:      %.3f\n", st.index_overhead_ratio);
    return 0;
}

struct VerifyReport {
    std::string suite;
    bool passed = true;
    std::string detail;
};

int cmd_verify(const std::string& store_path, std::uint64_t samples) {
    const auto store = hippo::load_store(store_path);
    std::mt19937_64 rng(0x5eedau);
    std::vector<VerifyReport> reports;

    // Structure: stream lengths, span tiling, zero counts, dictionary totals.
    {
        VerifyReport rep{"structure"};
        try {
        const std::uint64_t n = store.token_count();
        if (store.content().size() != store.signatures().size()) {
            rep.passed = false;
            rep.detail = "content and signature streams differ in length";
        }
        std::uint64_t expect_alpha = 0;
        for (const auto& e : store.entries()) {
            if (e.alpha != expect_alpha || e.beta < e.alpha) {
                rep.passed = false;
                rep.detail = "span tiling broken at entry " + std::to_string(e.entry_id);
                break;
            }
            expect_alpha = e.beta + 1;
        }
        if (rep.passed && expect_alpha != n) {
            rep.passed = false;
            rep.detail = "spans do not cover the token stream";
        }
        for (std::uint32_t k = 0; rep.passed && k < store.content().width(); ++k) {
            if (store.content().zero_count(k) != store.content().level(k).rank0(n)) {
                rep.passed = false;
                rep.detail = "content level " + std::to_string(k) + " zero count mismatch";
            }
        }
        for (std::uint32_t k = 0; rep.passed && k < store.signatures().width(); ++k) {
            if (store.signatures().zero_count(k) != store.signatures().level(k).rank0(n)) {
                rep.passed = false;
                rep.detail = "signature level " + std::to_string(k) + " zero count mismatch";
            }
        }
        if (rep.passed && store.dictionary().total() != n) {
            rep.passed = false;
            rep.detail = "dictionary total differs from token count";
        }
        if (rep.passed) {
            const std::size_t distinct = store.dictionary().distinct();
            for (std::uint64_t probe = 0; probe < std::min<std::uint64_t>(samples, distinct);
                 ++probe) {
                const std::size_t idx = rng() % distinct;
                const auto& sig = store.dictionary().signature_at(idx);
                if (store.dictionary().count_at(idx) != store.signatures().rank(sig, n)) {
                    rep.passed = false;
                    rep.detail = "dictionary count mismatch for signature " + sig.to_string();
                    break;
                }
            }
        }
        } catch (const std::exception& ex) {
            rep.passed = false;
            rep.detail = ex.what();
        }
        reports.push_back(rep);
    }

    // Content stream vs a materialized array: access/rank/select.
    {
        VerifyReport rep{"content-oracle"};
        try {
        const std::uint64_t n = store.token_count();
        std::vector<std::uint32_t> flat;
        flat.reserve(n);
        for (const auto& e : store.entries()) {
            for (std::uint32_t id : store.reconstruct(e.alpha, e.beta)) flat.push_back(id);
        }
        std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> positions;
        for (std::uint64_t i = 0; i < flat.size(); ++i) positions[flat[i]].push_back(i);

        for (std::uint64_t probe = 0; rep.passed && probe < samples && n > 0; ++probe) {
            const std::uint64_t i = rng() % n;
            const std::uint64_t c = flat[rng() % n];
            const auto& pos = positions[c];
            const auto want_rank = static_cast<std::uint64_t>(
                std::lower_bound(pos.begin(), pos.end(), i) - pos.begin());
            if (store.content().rank(c, i) != want_rank) {
                rep.passed = false;
                rep.detail = "rank(" + std::to_string(c) + ", " + std::to_string(i) +
                             ") != " + std::to_string(want_rank);
                break;
            }
            const std::uint64_t j = 1 + rng() % pos.size();
            const auto got = store.content().select(c, j);
            if (!got.has_value() || *got != pos[j - 1]) {
                rep.passed = false;
                rep.detail = "select(" + std::to_string(c) + ", " + std::to_string(j) + ")";
                break;
            }
            if (store.content().access(i) != flat[i]) {
                rep.passed = false;
                rep.detail = "access(" + std::to_string(i) + ") disagrees with reconstruct";
                break;
            }
        }
        } catch (const std::exception& ex) {
            rep.passed = false;
            rep.detail = ex.what();
        }
        reports.push_back(rep);
    }

    // Ball scan vs per-position probe.
    {
        VerifyReport rep{"signature-ball"};
        try {
        const std::uint64_t n = store.token_count();
        const std::uint64_t probes = std::min<std::uint64_t>(samples / 50 + 1, 20);
        for (std::uint64_t probe = 0; rep.passed && probe < probes && n > 0; ++probe) {
            const auto q = store.signatures().access(rng() % n);
            const std::uint32_t radius = probe % 3;
            std::uint64_t scan_hits = 0;
            for (std::uint64_t i = 0; i < n; ++i) {
                if (hamming(q, store.signatures().access(i)) <= radius) ++scan_hits;
            }
            std::uint64_t ball_hits = 0;
            for (const auto& [sig, count] : store.dictionary().ball(q, radius)) {
                ball_hits += count;
            }
            if (scan_hits != ball_hits) {
                rep.passed = false;
                rep.detail = "ball occurrence total " + std::to_string(ball_hits) +
                             " != position scan " + std::to_string(scan_hits);
            }
        }
        } catch (const std::exception& ex) {
            rep.passed = false;
            rep.detail = ex.what();
        }
        reports.push_back(rep);
    }

    // Reconstruction round-trip through the tokenizer.
    {
        VerifyReport rep{"reconstruction"};
        try {
        const auto& entries = store.entries();
        for (std::uint64_t probe = 0; rep.passed && probe < samples && !entries.empty();
             ++probe) {
            const auto& e = entries[rng() % entries.size()];
            try {
                const auto ids = store.reconstruct(e.alpha, e.beta);
                const std::string text = store.reconstruct_text(e.alpha, e.beta);
                std::vector<std::uint32_t> again;
                for (const auto& tok : store.tokenizer().split(text)) {
                    const auto id = store.vocabulary().find(tok);
                    if (!id.has_value()) throw std::runtime_error("unknown token " + tok);
                    again.push_back(*id);
                }
                if (again != ids) {
                    rep.passed = false;
                    rep.detail = "round-trip mismatch at entry " + std::to_string(e.entry_id);
                }
            } catch (const std::exception& ex) {
                rep.passed = false;
                rep.detail = "entry " + std::to_string(e.entry_id) + ": " + ex.what();
            }
        }
        } catch (const std::exception& ex) {
            rep.passed = false;
            rep.detail = ex.what();
        }
        reports.push_back(rep);
    }

    bool all = true;
    for (const auto& rep : reports) {
        std::printf("%-16s %s%s%s\n", rep.suite.c_str(), rep.passed ? "PASS" : "FAIL",
                    rep.detail.empty() ? "" : "  ", rep.detail.c_str());
        all = all && rep.passed;
    }
    return all ? 0 : 1;
}

int cmd_bench(const std::string& store_path, const std::string& queries_path,
              const hippo::QueryOptions& options, const std::string& extractor_kind,
              const std::string& report_path, unsigned threads) {
    const auto store = hippo::load_store(store_path);

    std::vector<std::string> queries;
    {
        std::ifstream in(queries_path);
        if (!in) {
            std::cerr << "cannot open queries file: " << queries_path << "\n";
            return 2;
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            queries.push_back(line);
        }
    }

    struct Record {
        double extraction_ms = 0, search_ms = 0, reconstruction_ms = 0, total_ms = 0;
        std::uint64_t tokens = 0;
        std::uint64_t results = 0;
    };
    std::vector<Record> records(queries.size());

    const unsigned workers = std::max(1u, threads);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        auto extractor = make_extractor(extractor_kind);
        for (std::size_t i = next.fetch_add(1); i < queries.size(); i = next.fetch_add(1)) {
            try {
                const auto result = hippo::run_query(store, *extractor, queries[i], options);
                records[i] = {result.timing.extraction_ms, result.timing.search_ms,
                              result.timing.reconstruction_ms, result.timing.total_ms,
                              result.tokens_consumed, result.entries.size()};
            } catch (const std::invalid_argument&) {
                records[i] = {};
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    auto aggregate = [](std::vector<double> values) {
        struct Agg {
            double mean = 0, median = 0, p95 = 0;
        } agg;
        if (values.empty()) return agg;
        double sum = 0;
        for (double v : values) sum += v;
        agg.mean = sum / static_cast<double>(values.size());
        std::sort(values.begin(), values.end());
        agg.median = values[values.size() / 2];
        agg.p95 = values[std::min(values.size() - 1,
                                  static_cast<std::size_t>(
                                      static_cast<double>(values.size()) * 0.95))];
        return agg;
    };

    std::string report = "index\textraction_ms\tsearch_ms\treconstruction_ms\ttotal_ms\t"
                         "tokens\tresults\n";
    std::vector<double> ext, search, recon, total, tokens;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        char line[192];
        std::snprintf(line, sizeof(line), "%zu\t%.3f\t%.3f\t%.3f\t%.3f\t%llu\t%llu\n", i,
                      r.extraction_ms, r.search_ms, r.reconstruction_ms, r.total_ms,
                      static_cast<unsigned long long>(r.tokens),
                      static_cast<unsigned long long>(r.results));
        report += line;
        ext.push_back(r.extraction_ms);
        search.push_back(r.search_ms);
        recon.push_back(r.reconstruction_ms);
        total.push_back(r.total_ms);
        tokens.push_back(static_cast<double>(r.tokens));
    }
    std::fputs(report.c_str(), stdout);

    if (!records.empty()) {
        const auto a_total = aggregate(total);
        const auto a_search = aggregate(search);
        const auto a_ext = aggregate(ext);
        const auto a_recon = aggregate(recon);
        const auto a_tok = aggregate(tokens);
        std::printf("queries: %zu\n", records.size());
        std::printf("avg token consumption: %.1f\n", a_tok.mean);
        std::printf("avg total: %.3f ms (median %.3f, p95 %.3f)\n", a_total.mean,
                    a_total.median, a_total.p95);
        std::printf("avg search: %.3f ms (median %.3f, p95 %.3f)\n", a_search.mean,
                    a_search.median, a_search.p95);
        std::printf("avg extraction: %.3f ms, avg reconstruction: %.3f ms\n", a_ext.mean,
                    a_recon.mean);
    } else {
        std::printf("queries: 0\n");
    }

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) {
            std::cerr << "cannot write report: " << report_path << "\n";
            return 2;
        }
        out << report;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hippo: compressed agentic-memory engine"};
    app.require_subcommand(1);

    auto* ingest = app.add_subcommand("ingest", "Ingest a transcript into a store");
    std::string store_path, transcript_path;
    CreateFlags create;
    ingest->add_option("store", store_path, "Store file")->required();
    ingest->add_option("transcript", transcript_path, "Transcript JSON file")->required();
    add_create_flags(ingest, create);

    auto* query = app.add_subcommand("query", "Query a store");
    std::string query_text, extractor_kind = "default";
    hippo::QueryOptions qopt;
    std::uint64_t budget = 0;
    query->add_option("store", store_path, "Store file")->required();
    query->add_option("text", query_text, "Query text")->required();
    query->add_option("--radius", qopt.radius, "Hamming-ball radius");
    query->add_option("--topk", qopt.top_k, "Result limit");
    query->add_option("--tau", qopt.tau, "Minimum matched-keyword fraction")
        ->check(CLI::Range(1e-9, 1.0));
    query->add_option("--budget", budget, "Print a context block under this token budget");
    query->add_option("--extractor", extractor_kind, "Keyword extractor")
        ->check(CLI::IsMember({"default", "external"}));

    auto* stats = app.add_subcommand("stats", "Print store statistics");
    stats->add_option("store", store_path, "Store file")->required();

    auto* verify = app.add_subcommand("verify", "Run randomized self-checks against oracles");
    std::uint64_t samples = 1000;
    verify->add_option("store", store_path, "Store file")->required();
    verify->add_option("--samples", samples, "Probes per suite");

    auto* bench = app.add_subcommand("bench", "Execute a query file and report timings");
    std::string queries_path, report_path;
    unsigned threads = 1;
    bench->add_option("store", store_path, "Store file")->required();
    bench->add_option("queries", queries_path, "One query per line")->required();
    bench->add_option("--radius", qopt.radius, "Hamming-ball radius");
    bench->add_option("--topk", qopt.top_k, "Result limit");
    bench->add_option("--tau", qopt.tau, "Minimum matched-keyword fraction")
        ->check(CLI::Range(1e-9, 1.0));
    bench->add_option("--extractor", extractor_kind, "Keyword extractor")
        ->check(CLI::IsMember({"default", "external"}));
    bench->add_option("--report", report_path, "Write the per-query records to this file");
    bench->add_option("--threads", threads, "Worker threads (reads only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints the message; 0 for --help
        return code == 0 ? 0 : 2;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(store_path, transcript_path, create);
        if (query->parsed()) {
            return cmd_query(store_path, query_text, qopt, extractor_kind, budget);
        }
        if (stats->parsed()) return cmd_stats(store_path);
        if (verify->parsed()) return cmd_verify(store_path, samples);
        if (bench->parsed()) {
            return cmd_bench(store_path, queries_path, qopt, extractor_kind, report_path,
                             threads);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
