#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hippo/random_index.hpp"
#include "hippo/signature_dictionary.hpp"
#include "hippo/tokenizer.hpp"
#include "hippo/vocabulary.hpp"
#include "hippo/wavelet_matrix.hpp"

namespace hippo {

struct StoreConfig {
    std::uint32_t sigma = 65536;  // vocabulary capacity; fixes the content width
    RandomIndexConfig signature;
};

// One memory entry: speaker/role, caller-supplied timestamp, and the
// inclusive token span [alpha, beta] it occupies in the streams.
struct EntryMetadata {
    std::uint64_t entry_id = 0;
    std::string role;
    std::int64_t timestamp_us = 0;
    std::string session_id;
    std::uint64_t alpha = 0;
    std::uint64_t beta = 0;

    std::uint64_t token_count() const noexcept { return beta - alpha + 1; }
};

struct StoreStats {
    std::uint64_t entries = 0;
    std::uint64_t tokens = 0;
    std::uint64_t distinct_signatures = 0;
    std::uint32_t vocab_size = 0;
    std::uint32_t vocab_capacity = 0;
    std::uint32_t content_width = 0;
    std::uint32_t signature_bits = 0;
    std::uint64_t content_level_bits = 0;    // content_width * tokens
    std::uint64_t signature_level_bits = 0;  // signature_bits * tokens
    double index_overhead_ratio = 0.0;       // heap beyond payload, as a fraction
};

// The memory engine: vocabulary, the co-indexed content and signature
// streams, the metadata table, and the signature dictionary.
//
// Single-writer / multi-reader: ingest calls must be externally serialized;
// reads may run concurrently with each other but not with an ingest.
// Ingest is all-or-nothing at entry granularity and performs no I/O.
class MemoryStore {
  public:
    explicit MemoryStore(StoreConfig config,
                         std::unique_ptr<const Tokenizer> tokenizer = nullptr);

    // Tokenizes the text, appends token ids to the content stream and
    // windowed signatures to the signature stream at matching positions,
    // and records the metadata row. Returns the new entry id.
    //
    // Throws std::invalid_argument when the text tokenizes to nothing and
    // CapacityError when the vocabulary would overflow; the store is
    // unchanged in both cases.
    std::uint64_t ingest_entry(std::string_view role, std::int64_t timestamp_us,
                               std::string_view session_id, std::string_view text);

    // Canonical split plus id allocation for unseen tokens.
    std::vector<std::uint32_t> tokenize(std::string_view text);

    // The unique entry whose span covers token position i.
    const EntryMetadata& covering_entry(std::uint64_t position) const;

    // Token ids of the inclusive span [alpha, beta], read from the content
    // stream; lossless.
    std::vector<std::uint32_t> reconstruct(std::uint64_t alpha, std::uint64_t beta) const;
    std::string reconstruct_text(std::uint64_t alpha, std::uint64_t beta) const;

    StoreStats stats() const;

    std::uint64_t token_count() const noexcept { return content_.size(); }
    std::uint64_t entry_count() const noexcept { return entries_.size(); }

    const StoreConfig& config() const noexcept { return config_; }
    const Vocabulary& vocabulary() const noexcept { return vocab_; }
    const RandomIndexModel& model() const noexcept { return model_; }
    const DynamicWaveletMatrix& content() const noexcept { return content_; }
    const SignatureWaveletMatrix& signatures() const noexcept { return signatures_; }
    const SignatureDictionary& dictionary() const noexcept { return dictionary_; }
    const std::vector<EntryMetadata>& entries() const noexcept { return entries_; }
    const Tokenizer& tokenizer() const noexcept { return *tokenizer_; }

    // Reassembles a store from persisted parts, revalidating the structural
    // invariants (parallel stream lengths, metadata contiguity, dictionary
    // totals). Throws FormatError when they do not hold.
    static MemoryStore rebuild(StoreConfig config, Vocabulary vocab,
                               DynamicWaveletMatrix content, SignatureWaveletMatrix signatures,
                               std::vector<EntryMetadata> entries, SignatureDictionary dictionary,
                               std::unique_ptr<const Tokenizer> tokenizer = nullptr);

  private:
    MemoryStore(StoreConfig config, Vocabulary vocab, DynamicWaveletMatrix content,
                SignatureWaveletMatrix signatures, std::vector<EntryMetadata> entries,
                SignatureDictionary dictionary, std::unique_ptr<const Tokenizer> tokenizer);

    StoreConfig config_;
    std::unique_ptr<const Tokenizer> tokenizer_;
    Vocabulary vocab_;
    RandomIndexModel model_;
    DynamicWaveletMatrix content_;
    SignatureWaveletMatrix signatures_;
    SignatureDictionary dictionary_;
    std::vector<EntryMetadata> entries_;
};

}  // namespace hippo
