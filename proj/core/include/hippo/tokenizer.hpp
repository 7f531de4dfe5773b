#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hippo {

// Splits raw text into canonical token surfaces. Swappable so a subword
// model can replace the canonical splitter without touching the store.
class Tokenizer {
  public:
    virtual ~Tokenizer() = default;
    virtual std::vector<std::string> split(std::string_view text) const = 0;
};

// Deterministic canonicalizer: lowercase, split on whitespace and
// punctuation boundaries, punctuation marks become their own tokens.
class CanonicalTokenizer : public Tokenizer {
  public:
    std::vector<std::string> split(std::string_view text) const override;
};

// Inverse presentation: token surfaces joined by single spaces. This is the
// canonical text form, so detokenize(split(x)) == detokenize(split(detokenize(split(x)))).
std::string detokenize(std::span<const std::string> tokens);

// Convenience: the canonical form of a text under the canonical tokenizer.
std::string canonicalize(std::string_view text);

}  // namespace hippo
