#include "hippo/memory_store.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "hippo/errors.hpp"

namespace hippo {

MemoryStore::MemoryStore(StoreConfig config, std::unique_ptr<const Tokenizer> tokenizer)
    : config_(config),
      tokenizer_(tokenizer ? std::move(tokenizer) : std::make_unique<CanonicalTokenizer>()),
      vocab_(config.sigma),
      model_(config.signature),
      content_(Vocabulary::symbol_width(config.sigma)),
      signatures_(config.signature.signature_bits),
      dictionary_(config.signature.signature_bits) {}

MemoryStore::MemoryStore(StoreConfig config, Vocabulary vocab, DynamicWaveletMatrix content,
                         SignatureWaveletMatrix signatures, std::vector<EntryMetadata> entries,
                         SignatureDictionary dictionary,
                         std::unique_ptr<const Tokenizer> tokenizer)
    : config_(config),
      tokenizer_(tokenizer ? std::move(tokenizer) : std::make_unique<CanonicalTokenizer>()),
      vocab_(std::move(vocab)),
      model_(config.signature),
      content_(std::move(content)),
      signatures_(std::move(signatures)),
      dictionary_(std::move(dictionary)),
      entries_(std::move(entries)) {}

std::uint64_t MemoryStore::ingest_entry(std::string_view role, std::int64_t timestamp_us,
                                        std::string_view session_id, std::string_view text) {
    const std::vector<std::string> surfaces = tokenizer_->split(text);
    if (surfaces.empty()) {
        throw std::invalid_argument("ingest_entry: text tokenizes to nothing");
    }

    // Capacity pre-check keeps the ingest all-or-nothing: nothing below this
    // point can fail, so a thrown CapacityError leaves the store untouched.
    std::unordered_set<std::string_view> fresh;
    for (const std::string& s : surfaces) {
        if (!vocab_.find(s).has_value()) fresh.insert(s);
    }
    if (vocab_.size() + fresh.size() > vocab_.capacity()) {
        throw CapacityError("ingest_entry: vocabulary would exceed sigma = " +
                            std::to_string(vocab_.capacity()));
    }

    std::vector<std::uint32_t> ids;
    ids.reserve(surfaces.size());
    for (const std::string& s : surfaces) ids.push_back(vocab_.get_or_add(s));

    const std::vector<Signature> sigs = model_.entry_signatures(surfaces);

    const std::uint64_t alpha = content_.size();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        content_.append(ids[i]);
        signatures_.append(sigs[i]);
        dictionary_.add(sigs[i]);
    }
    const std::uint64_t beta = content_.size() - 1;

    EntryMetadata meta;
    meta.entry_id = entries_.size();
    meta.role = std::string(role);
    meta.timestamp_us = timestamp_us;
    meta.session_id = std::string(session_id);
    meta.alpha = alpha;
    meta.beta = beta;
    entries_.push_back(std::move(meta));
    return entries_.back().entry_id;
}

std::vector<std::uint32_t> MemoryStore::tokenize(std::string_view text) {
    std::vector<std::uint32_t> ids;
    for (const std::string& s : tokenizer_->split(text)) ids.push_back(vocab_.get_or_add(s));
    return ids;
}

const EntryMetadata& MemoryStore::covering_entry(std::uint64_t position) const {
    if (position >= content_.size()) {
        throw std::out_of_range("covering_entry: position >= token count");
    }
    // Spans tile [0, n), so the covering entry is the last one with
    // alpha <= position.
    auto it = std::upper_bound(entries_.begin(), entries_.end(), position,
                               [](std::uint64_t pos, const EntryMetadata& e) {
                                   return pos < e.alpha;
                               });
    return *(it - 1);
}

std::vector<std::uint32_t> MemoryStore::reconstruct(std::uint64_t alpha,
                                                    std::uint64_t beta) const {
    if (alpha > beta || beta >= content_.size()) {
        throw std::out_of_range("reconstruct: bad span");
    }
    std::vector<std::uint32_t> ids;
    ids.reserve(beta - alpha + 1);
    for (std::uint64_t i = alpha; i <= beta; ++i) {
        ids.push_back(static_cast<std::uint32_t>(content_.access(i)));
    }
    return ids;
}

std::string MemoryStore::reconstruct_text(std::uint64_t alpha, std::uint64_t beta) const {
    std::vector<std::string> surfaces;
    for (std::uint32_t id : reconstruct(alpha, beta)) surfaces.push_back(vocab_.surface(id));
    return detokenize(surfaces);
}

StoreStats MemoryStore::stats() const {
    StoreStats st;
    st.entries = entries_.size();
    st.tokens = content_.size();
    st.distinct_signatures = dictionary_.distinct();
    st.vocab_size = vocab_.size();
    st.vocab_capacity = vocab_.capacity();
    st.content_width = content_.width();
    st.signature_bits = signatures_.width();

    std::uint64_t heap_bytes = 0;
    for (std::uint32_t k = 0; k < content_.width(); ++k) {
        st.content_level_bits += content_.level(k).size();
        heap_bytes += content_.level(k).heap_bytes();
    }
    for (std::uint32_t k = 0; k < signatures_.width(); ++k) {
        st.signature_level_bits += signatures_.level(k).size();
        heap_bytes += signatures_.level(k).heap_bytes();
    }
    const std::uint64_t payload_bits = st.content_level_bits + st.signature_level_bits;
    if (payload_bits > 0) {
        st.index_overhead_ratio =
            (static_cast<double>(heap_bytes) * 8.0 - static_cast<double>(payload_bits)) /
            static_cast<double>(payload_bits);
    }
    return st;
}

MemoryStore MemoryStore::rebuild(StoreConfig config, Vocabulary vocab,
                                 DynamicWaveletMatrix content, SignatureWaveletMatrix signatures,
                                 std::vector<EntryMetadata> entries,
                                 SignatureDictionary dictionary,
                                 std::unique_ptr<const Tokenizer> tokenizer) {
    if (content.size() != signatures.size()) {
        throw FormatError("store rebuild: content and signature streams differ in length");
    }
    if (content.width() != Vocabulary::symbol_width(config.sigma) ||
        signatures.width() != config.signature.signature_bits) {
        throw FormatError("store rebuild: stream widths differ from the configuration");
    }
    std::uint64_t expect_alpha = 0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const EntryMetadata& e = entries[k];
        if (e.alpha != expect_alpha || e.beta < e.alpha) {
            throw FormatError("store rebuild: metadata spans are not contiguous");
        }
        expect_alpha = e.beta + 1;
    }
    if (expect_alpha != content.size()) {
        throw FormatError("store rebuild: metadata spans do not tile the streams");
    }
    if (dictionary.total() != signatures.size()) {
        throw FormatError("store rebuild: dictionary totals disagree with the streams");
    }
    return MemoryStore(config, std::move(vocab), std::move(content), std::move(signatures),
                       std::move(entries), std::move(dictionary), std::move(tokenizer));
}

}  // namespace hippo
