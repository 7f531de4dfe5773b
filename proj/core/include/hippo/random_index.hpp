#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hippo/signature.hpp"

namespace hippo {

enum class SignatureMode : std::uint8_t {
    kHyperplane = 0,  // bit k = sign of a fixed random-direction dot product
    kTopD = 1,        // bits over the d most activated components
};

struct RandomIndexConfig {
    std::uint32_t dimensions = 1024;    // D: embedding dimensionality
    std::uint32_t signature_bits = 32;  // d
    std::uint32_t base_nonzeros = 8;    // t: non-zeros per base vector
    std::uint32_t window_radius = 2;    // tokens aggregated on each side
    std::uint64_t seed = 0x48495050ull;
    SignatureMode mode = SignatureMode::kHyperplane;
};

// Sparse ternary vector: exactly t entries, positions ascending, each +1/-1.
struct SparseTernaryVector {
    std::vector<std::uint32_t> index;
    std::vector<std::int8_t> sign;

    std::size_t nonzeros() const noexcept { return index.size(); }
};

// Sum of base vectors over a context window, in exact integer arithmetic.
class ContextEmbedding {
  public:
    explicit ContextEmbedding(std::uint32_t dimensions) : comp_(dimensions, 0) {}

    void add(const SparseTernaryVector& v) { accumulate(v, +1); }
    void subtract(const SparseTernaryVector& v) { accumulate(v, -1); }

    std::span<const std::int32_t> components() const noexcept { return comp_; }
    std::uint32_t dimensions() const noexcept { return static_cast<std::uint32_t>(comp_.size()); }

  private:
    void accumulate(const SparseTernaryVector& v, int scale) {
        for (std::size_t k = 0; k < v.index.size(); ++k) {
            comp_[v.index[k]] += scale * v.sign[k];
        }
    }

    std::vector<std::int32_t> comp_;
};

// Streaming random indexing: deterministic sparse base vectors per token
// surface, windowed context embeddings, and d-bit binarization.
//
// Every output is a pure function of (seed, token surfaces, window, mode,
// D, d, t); regenerating the model from the same configuration reproduces
// each signature bit-exactly. Immutable after construction and freely
// shareable across threads.
class RandomIndexModel {
  public:
    explicit RandomIndexModel(const RandomIndexConfig& config);

    const RandomIndexConfig& config() const noexcept { return config_; }

    // Deterministic ternary vector for a token surface: t non-zeros with
    // ceil(t/2) set to +1 and floor(t/2) to -1, positions and sign placement
    // drawn from a keyed hash of (seed, token). Unknown surfaces are as
    // valid as ingested ones, so any query keyword is signable.
    SparseTernaryVector base_vector(std::string_view token) const;

    // Window of `radius` tokens on each side of position i, clamped to the
    // span: the window never crosses the entry boundary.
    ContextEmbedding context_embedding(std::span<const std::string> entry_tokens,
                                       std::size_t i) const;

    Signature signature_of(const ContextEmbedding& embedding) const;

    // Windowed signature per position of one entry (sliding window).
    std::vector<Signature> entry_signatures(std::span<const std::string> entry_tokens) const;

    // Signature of a keyword: the window is the keyword's own tokens.
    Signature query_signature(std::span<const std::string> keyword_tokens) const;

  private:
    Signature hyperplane_signature(std::span<const std::int32_t> comp,
                                   std::span<const std::uint32_t> touched) const;
    Signature topd_signature(std::span<const std::int32_t> comp) const;

    RandomIndexConfig config_;
    std::vector<double> planes_;  // d x D row-major; hyperplane mode only
};

}  // namespace hippo
