#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hippo {

// Turns a natural-language query into a small set of salient keywords.
class KeywordExtractor {
  public:
    virtual ~KeywordExtractor() = default;

    // Up to K keywords; empty when the query carries no content words.
    // Throws std::invalid_argument on an empty query.
    virtual std::vector<std::string> extract(std::string_view query) = 0;
};

// Pure function of the query text: lowercase, strip punctuation, drop
// stopwords, deduplicate, keep the first K by order of appearance.
class DefaultKeywordExtractor : public KeywordExtractor {
  public:
    explicit DefaultKeywordExtractor(std::size_t max_keywords = 5)
        : max_keywords_(max_keywords) {}

    std::vector<std::string> extract(std::string_view query) override;

  private:
    std::size_t max_keywords_;
};

struct ExternalExtractorConfig {
    std::string endpoint_url;  // e.g. http://127.0.0.1:8080/v1/chat/completions
    std::string model;
    std::string api_key;
    std::size_t max_keywords = 5;
    int timeout_seconds = 5;

    // Reads HIPPO_EXTRACTOR_URL / HIPPO_EXTRACTOR_MODEL /
    // HIPPO_EXTRACTOR_API_KEY; nullopt when no URL is configured.
    static std::optional<ExternalExtractorConfig> from_environment();
};

// Chat-completion client asking for a comma-separated keyword list. Any
// transport or parse failure is logged to stderr and answered by the
// deterministic extractor instead; callers never see a network error.
class ExternalKeywordExtractor : public KeywordExtractor {
  public:
    explicit ExternalKeywordExtractor(ExternalExtractorConfig config)
        : config_(std::move(config)), fallback_(config_.max_keywords) {}

    std::vector<std::string> extract(std::string_view query) override;

  private:
    ExternalExtractorConfig config_;
    DefaultKeywordExtractor fallback_;
};

}  // namespace hippo
