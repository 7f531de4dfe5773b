#include "hippo/keyword_extractor.hpp"

#include <cctype>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>

namespace hippo {

namespace {

const std::unordered_set<std::string_view>& stopwords() {
    static const std::unordered_set<std::string_view> kStopwords{
        "a",     "about", "above", "after",  "again",  "all",    "am",     "an",
        "and",   "any",   "are",   "as",     "at",     "be",     "because", "been",
        "before", "being", "below", "between", "both",  "but",    "by",     "can",
        "could", "did",   "do",    "does",   "doing",  "down",   "during", "each",
        "few",   "for",   "from",  "further", "had",   "has",    "have",   "having",
        "he",    "her",   "here",  "hers",   "him",    "his",    "how",    "i",
        "if",    "in",    "into",  "is",     "it",     "its",    "just",   "me",
        "more",  "most",  "my",    "no",     "nor",    "not",    "now",    "of",
        "off",   "on",    "once",  "only",   "or",     "other",  "our",    "out",
        "over",  "own",   "s",     "same",   "she",    "should", "so",     "some",
        "such",  "t",     "than",  "that",   "the",    "their",  "them",   "then",
        "there", "these", "they",  "this",   "those",  "through", "to",    "too",
        "under", "until", "up",    "very",   "was",    "we",     "were",   "what",
        "when",  "where", "which", "while",  "who",    "whom",   "why",    "will",
        "with",  "would", "you",   "your",   "yours",
    };
    return kStopwords;
}

std::vector<std::string> content_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c >= 0x80) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

// Splits the host part of a URL from the request path.
bool split_url(const std::string& url, std::string& base, std::string& path) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return false;
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        base = url;
        path = "/v1/chat/completions";
    } else {
        base = url.substr(0, path_start);
        path = url.substr(path_start);
    }
    return true;
}

}  // namespace

std::vector<std::string> DefaultKeywordExtractor::extract(std::string_view query) {
    if (query.empty()) throw std::invalid_argument("extract: empty query");

    std::vector<std::string> keywords;
    std::unordered_set<std::string_view> seen;
    for (std::string& w : content_words(query)) {
        if (stopwords().contains(w)) continue;
        if (keywords.size() == max_keywords_) break;
        if (seen.contains(w)) continue;
        keywords.push_back(std::move(w));
        seen.insert(keywords.back());
    }
    return keywords;
}

std::optional<ExternalExtractorConfig> ExternalExtractorConfig::from_environment() {
    const char* url = std::getenv("HIPPO_EXTRACTOR_URL");
    if (url == nullptr || *url == '\0') return std::nullopt;
    ExternalExtractorConfig cfg;
    cfg.endpoint_url = url;
    if (const char* model = std::getenv("HIPPO_EXTRACTOR_MODEL")) cfg.model = model;
    if (const char* key = std::getenv("HIPPO_EXTRACTOR_API_KEY")) cfg.api_key = key;
    return cfg;
}

std::vector<std::string> ExternalKeywordExtractor::extract(std::string_view query) {
    if (query.empty()) throw std::invalid_argument("extract: empty query");
    try {
        std::string base, path;
        if (!split_url(config_.endpoint_url, base, path)) {
            throw std::runtime_error("bad endpoint URL: " + config_.endpoint_url);
        }
        httplib::Client client(base);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);

        nlohmann::json body{
            {"model", config_.model},
            {"temperature", 0},
            {"messages",
             {{{"role", "user"},
               {"content", "Extract up to " + std::to_string(config_.max_keywords) +
                               " salient keywords from the following query. Reply with the "
                               "keywords only, comma-separated.\nQuery: " +
                               std::string(query)}}}},
        };
        httplib::Headers headers;
        if (!config_.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + config_.api_key);
        }
        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (!res || res->status != 200) {
            throw std::runtime_error("extractor endpoint returned " +
                                     (res ? std::to_string(res->status) : "no response"));
        }
        const auto reply = nlohmann::json::parse(res->body);
        const std::string content = reply.at("choices").at(0).at("message").at("content");

        std::vector<std::string> keywords;
        std::unordered_set<std::string> seen;
        std::string item;
        std::istringstream stream(content);
        while (std::getline(stream, item)) {
            std::istringstream line(item);
            std::string part;
            while (std::getline(line, part, ',')) {
                std::string word;
                for (unsigned char c : part) {
                    if (std::isalnum(c) || c >= 0x80) word += static_cast<char>(std::tolower(c));
                    else if (!word.empty() && word.back() != ' ') word += ' ';
                }
                while (!word.empty() && word.back() == ' ') word.pop_back();
                if (word.empty() || seen.contains(word)) continue;
                keywords.push_back(word);
                seen.insert(word);
                if (keywords.size() == config_.max_keywords) break;
            }
            if (keywords.size() == config_.max_keywords) break;
        }
        if (keywords.empty()) throw std::runtime_error("extractor returned no keywords");
        return keywords;
    } catch (const std::exception& e) {
        std::cerr << "external keyword extractor failed (" << e.what()
                  << "); using the deterministic extractor\n";
        return fallback_.extract(query);
    }
}

}  // namespace hippo
