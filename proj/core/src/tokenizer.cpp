#include "hippo/tokenizer.hpp"

#include <cctype>

namespace hippo {

namespace {

enum class CharClass { kSpace, kWord, kPunct };

CharClass classify(unsigned char c) {
    if (std::isspace(c)) return CharClass::kSpace;
    if (std::isalnum(c) || c >= 0x80) return CharClass::kWord;  // non-ASCII counts as word
    return CharClass::kPunct;
}

}  // namespace

std::vector<std::string> CanonicalTokenizer::split(std::string_view text) const {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        switch (classify(c)) {
            case CharClass::kSpace:
                if (!current.empty()) {
                    tokens.push_back(std::move(current));
                    current.clear();
                }
                break;
            case CharClass::kWord:
                current += static_cast<char>(std::tolower(c));
                break;
            case CharClass::kPunct:
                if (!current.empty()) {
                    tokens.push_back(std::move(current));
                    current.clear();
                }
                tokens.emplace_back(1, static_cast<char>(c));
                break;
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string detokenize(std::span<const std::string> tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out += ' ';
        out += tokens[i];
    }
    return out;
}

std::string canonicalize(std::string_view text) {
    CanonicalTokenizer tok;
    return detokenize(tok.split(text));
}

}  // namespace hippo
