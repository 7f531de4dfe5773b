#include "hippo/retrieval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <stdexcept>

namespace hippo {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

std::vector<std::pair<Signature, std::uint64_t>> ball_candidates(const MemoryStore& store,
                                                                 const Signature& q,
                                                                 std::uint32_t radius) {
    return store.dictionary().ball(q, radius);
}

QueryPlan plan_query(const MemoryStore& store, std::string_view query,
                     std::span<const std::string> keywords, const QueryOptions& options) {
    if (options.tau <= 0.0 || options.tau > 1.0) {
        throw std::invalid_argument("plan_query: tau must be in (0, 1]");
    }
    QueryPlan plan;
    plan.query = std::string(query);
    plan.radius = options.radius;
    plan.top_k = options.top_k;
    plan.tau = options.tau;

    const Tokenizer& tokenizer = store.tokenizer();
    for (const std::string& kw : keywords) {
        KeywordCandidates kc;
        kc.keyword = kw;
        const std::vector<std::string> tokens = tokenizer.split(kw);
        if (tokens.empty()) continue;
        kc.query_signature = store.model().query_signature(tokens);
        kc.candidates = ball_candidates(store, kc.query_signature, options.radius);
        for (const auto& [sig, count] : kc.candidates) kc.total_frequency += count;
        plan.keywords.push_back(std::move(kc));
    }
    return plan;
}

RetrievedResult search(const MemoryStore& store, const QueryPlan& plan) {
    const auto t_search = Clock::now();

    RetrievedResult result;
    for (const KeywordCandidates& kc : plan.keywords) result.keywords.push_back(kc.keyword);

    // An entry must contain at least ceil(tau * m) of the m keywords. Any
    // such entry contains one of the (present - required + 1) rarest present
    // keywords, so iterating occurrences of exactly those drivers finds every
    // qualifying entry while still skipping the most frequent signatures.
    const std::size_t m = plan.keywords.size();
    const auto required = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(plan.tau * static_cast<double>(m) - 1e-9)));

    std::vector<std::size_t> present;  // keyword indices with candidates, rarest first
    for (std::size_t k = 0; k < m; ++k) {
        if (plan.keywords[k].total_frequency > 0) present.push_back(k);
    }
    std::sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
        if (plan.keywords[a].total_frequency != plan.keywords[b].total_frequency) {
            return plan.keywords[a].total_frequency < plan.keywords[b].total_frequency;
        }
        return a < b;
    });
    if (present.size() < required) {
        result.timing.search_ms = ms_since(t_search);
        result.timing.total_ms = result.timing.search_ms;
        return result;  // too few keywords exist at all: empty result, not an error
    }

    const auto& signature_stream = store.signatures();
    const std::uint64_t n = signature_stream.size();

    // Walk every occurrence of every driver candidate via select and collect
    // the covering entries.
    std::map<std::uint64_t, std::uint32_t> matched_by_entry;  // entry index -> matched count
    const std::size_t driver_count = present.size() - required + 1;
    for (std::size_t di = 0; di < driver_count; ++di) {
        for (const auto& [sig, dict_count] : plan.keywords[present[di]].candidates) {
            const std::uint64_t occ = signature_stream.rank(sig, n);
            for (std::uint64_t j = 1; j <= occ; ++j) {
                const auto pos = signature_stream.select(sig, j);
                if (!pos.has_value()) break;  // unreachable: j <= occ
                const EntryMetadata& entry = store.covering_entry(*pos);
                matched_by_entry.emplace(entry.entry_id, 0);
            }
        }
    }

    // Validate every keyword per entry: a keyword is contained when any of
    // its ball candidates occurs inside the span.
    for (auto& [entry_id, matched] : matched_by_entry) {
        const EntryMetadata& entry = store.entries()[entry_id];
        for (std::size_t k = 0; k < m; ++k) {
            for (const auto& [sig, dict_count] : plan.keywords[k].candidates) {
                if (signature_stream.range_count(sig, entry.alpha, entry.beta + 1) > 0) {
                    ++matched;
                    break;
                }
            }
        }
    }

    // Threshold, rank, truncate.
    std::vector<std::pair<std::uint64_t, std::uint32_t>> kept;
    for (const auto& [entry_id, matched] : matched_by_entry) {
        if (matched >= required) kept.emplace_back(entry_id, matched);
    }
    std::sort(kept.begin(), kept.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        const EntryMetadata& ea = store.entries()[a.first];
        const EntryMetadata& eb = store.entries()[b.first];
        if (ea.timestamp_us != eb.timestamp_us) return ea.timestamp_us > eb.timestamp_us;
        return ea.entry_id < eb.entry_id;
    });
    if (kept.size() > plan.top_k) kept.resize(plan.top_k);

    result.timing.search_ms = ms_since(t_search);

    const auto t_reconstruct = Clock::now();
    for (const auto& [entry_id, matched] : kept) {
        const EntryMetadata& entry = store.entries()[entry_id];
        RetrievedEntry re;
        re.metadata = entry;
        re.text = store.reconstruct_text(entry.alpha, entry.beta);
        re.matched_keywords = matched;
        re.token_count = entry.token_count();
        result.tokens_consumed += re.token_count;
        result.entries.push_back(std::move(re));
    }
    result.timing.reconstruction_ms = ms_since(t_reconstruct);
    result.timing.total_ms = result.timing.search_ms + result.timing.reconstruction_ms;
    return result;
}

RetrievedResult run_query(const MemoryStore& store, KeywordExtractor& extractor,
                          std::string_view query, const QueryOptions& options) {
    const auto t_extract = Clock::now();
    const std::vector<std::string> keywords = extractor.extract(query);
    if (keywords.empty()) {
        throw std::invalid_argument("run_query: no keywords extracted");
    }
    const double extraction_ms = ms_since(t_extract);

    const auto t_plan = Clock::now();
    const QueryPlan plan = plan_query(store, query, keywords, options);
    const double plan_ms = ms_since(t_plan);

    RetrievedResult result = search(store, plan);
    result.timing.extraction_ms = extraction_ms;
    result.timing.search_ms += plan_ms;  // signature conversion and ball scan
    result.timing.total_ms =
        extraction_ms + result.timing.search_ms + result.timing.reconstruction_ms;
    return result;
}

AnswerContext answer_context(const RetrievedResult& result, std::uint64_t token_budget) {
    if (token_budget == 0) throw std::invalid_argument("answer_context: zero budget");
    AnswerContext ctx;
    for (const RetrievedEntry& entry : result.entries) {
        if (ctx.tokens_included + entry.token_count > token_budget) break;
        std::time_t secs = static_cast<std::time_t>(entry.metadata.timestamp_us / 1'000'000);
        std::tm tm_utc{};
        gmtime_r(&secs, &tm_utc);
        char header[96];
        std::snprintf(header, sizeof(header), "[%s | %04d-%02d-%02dT%02d:%02d:%02dZ] ",
                      entry.metadata.role.c_str(), tm_utc.tm_year + 1900, tm_utc.tm_mon + 1,
                      tm_utc.tm_mday, tm_utc.tm_hour, tm_utc.tm_min, tm_utc.tm_sec);
        ctx.text += header;
        ctx.text += entry.text;
        ctx.text += '\n';
        ctx.tokens_included += entry.token_count;
    }
    return ctx;
}

}  // namespace hippo
