#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hippo/keyword_extractor.hpp"
#include "hippo/memory_store.hpp"

namespace hippo {

struct QueryOptions {
    std::uint32_t radius = 2;  // Hamming-ball radius r
    std::uint32_t top_k = 5;
    double tau = 0.5;          // minimum fraction of keywords an entry must contain
};

// One keyword's fuzzy identity: its query signature and every distinct
// stored signature within the Hamming ball, with occurrence counts.
struct KeywordCandidates {
    std::string keyword;
    Signature query_signature;
    std::vector<std::pair<Signature, std::uint64_t>> candidates;
    std::uint64_t total_frequency = 0;
};

struct QueryPlan {
    std::string query;
    std::vector<KeywordCandidates> keywords;
    std::uint32_t radius = 0;
    std::uint32_t top_k = 0;
    double tau = 1.0;
};

struct RetrievedEntry {
    EntryMetadata metadata;
    std::string text;
    std::uint32_t matched_keywords = 0;
    std::uint64_t token_count = 0;
};

struct TimingBreakdown {
    double extraction_ms = 0.0;
    double search_ms = 0.0;
    double reconstruction_ms = 0.0;
    double total_ms = 0.0;
};

struct RetrievedResult {
    std::vector<std::string> keywords;
    std::vector<RetrievedEntry> entries;
    std::uint64_t tokens_consumed = 0;  // sum of reconstructed span lengths
    TimingBreakdown timing;
};

// Every distinct stored signature within `radius` of q, with its count,
// found by an XOR+POPCOUNT scan of the signature dictionary.
std::vector<std::pair<Signature, std::uint64_t>> ball_candidates(const MemoryStore& store,
                                                                 const Signature& q,
                                                                 std::uint32_t radius);

// Signatures and ball candidates for each keyword.
QueryPlan plan_query(const MemoryStore& store, std::string_view query,
                     std::span<const std::string> keywords, const QueryOptions& options);

// Executes the plan: drive occurrences of the rarest keywords' candidates
// through select (just enough of them that any entry meeting the tau
// threshold is seeded), map each hit to its covering entry, validate the
// keywords by rank over the entry spans, then threshold, rank, truncate and
// reconstruct. Fills search/reconstruction timing; extraction timing is the
// caller's when it ran an extractor.
RetrievedResult search(const MemoryStore& store, const QueryPlan& plan);

// Full pipeline: extract keywords, plan, search. Throws
// std::invalid_argument when no keywords can be extracted.
RetrievedResult run_query(const MemoryStore& store, KeywordExtractor& extractor,
                          std::string_view query, const QueryOptions& options);

struct AnswerContext {
    std::string text;
    std::uint64_t tokens_included = 0;
};

// Concatenates entries in rank order under a token budget, stopping before
// the first entry that would exceed it.
AnswerContext answer_context(const RetrievedResult& result, std::uint64_t token_budget);

}  // namespace hippo
