#include "hippo/random_index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace hippo {

namespace {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) without implementation-defined distributions.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform double in (0, 1].
    double open01() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }
};

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

RandomIndexModel::RandomIndexModel(const RandomIndexConfig& config) : config_(config) {
    if (config_.dimensions == 0) {
        throw std::invalid_argument("random index: dimensions must be positive");
    }
    if (config_.signature_bits == 0 || config_.signature_bits > config_.dimensions) {
        throw std::invalid_argument("random index: need 0 < signature bits <= dimensions");
    }
    if (config_.base_nonzeros == 0 || config_.base_nonzeros > config_.dimensions) {
        throw std::invalid_argument("random index: need 0 < base non-zeros <= dimensions");
    }
    if (config_.mode == SignatureMode::kHyperplane) {
        // d fixed random directions with standard normal components,
        // generated by Box-Muller from the master seed.
        const std::size_t total = std::size_t{config_.signature_bits} * config_.dimensions;
        planes_.resize(total);
        SplitMix64 rng(config_.seed ^ 0x9d1c5aa1f31b7ull);
        for (std::size_t k = 0; k < total; k += 2) {
            const double u1 = rng.open01();
            const double u2 = rng.open01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double a = 2.0 * std::numbers::pi * u2;
            planes_[k] = r * std::cos(a);
            if (k + 1 < total) planes_[k + 1] = r * std::sin(a);
        }
    }
}

SparseTernaryVector RandomIndexModel::base_vector(std::string_view token) const {
    SplitMix64 rng(config_.seed ^ fnv1a(token));
    rng.next();  // decouple from the raw hash

    const std::uint32_t t = config_.base_nonzeros;
    SparseTernaryVector v;
    v.index.reserve(t);
    while (v.index.size() < t) {
        auto p = static_cast<std::uint32_t>(rng.below(config_.dimensions));
        if (std::find(v.index.begin(), v.index.end(), p) == v.index.end()) {
            v.index.push_back(p);
        }
    }
    std::sort(v.index.begin(), v.index.end());

    v.sign.assign(t, -1);
    std::fill_n(v.sign.begin(), (t + 1) / 2, std::int8_t{1});
    for (std::uint32_t k = t; k > 1; --k) {  // Fisher-Yates over the sign slots
        std::swap(v.sign[k - 1], v.sign[rng.below(k)]);
    }
    return v;
}

ContextEmbedding RandomIndexModel::context_embedding(std::span<const std::string> entry_tokens,
                                                     std::size_t i) const {
    if (i >= entry_tokens.size()) {
        throw std::out_of_range("context_embedding: position outside the entry");
    }
    const std::size_t w = config_.window_radius;
    const std::size_t lo = i >= w ? i - w : 0;
    const std::size_t hi = std::min(entry_tokens.size() - 1, i + w);
    ContextEmbedding e(config_.dimensions);
    for (std::size_t j = lo; j <= hi; ++j) {
        e.add(base_vector(entry_tokens[j]));
    }
    return e;
}

Signature RandomIndexModel::signature_of(const ContextEmbedding& embedding) const {
    if (embedding.dimensions() != config_.dimensions) {
        throw std::invalid_argument("signature_of: embedding dimensionality mismatch");
    }
    if (config_.mode == SignatureMode::kTopD) {
        return topd_signature(embedding.components());
    }
    std::vector<std::uint32_t> touched;
    const auto comp = embedding.components();
    for (std::uint32_t j = 0; j < comp.size(); ++j) {
        if (comp[j] != 0) touched.push_back(j);
    }
    return hyperplane_signature(comp, touched);
}

Signature RandomIndexModel::hyperplane_signature(std::span<const std::int32_t> comp,
                                                 std::span<const std::uint32_t> touched) const {
    const std::uint32_t d = config_.signature_bits;
    Signature sig(d);
    for (std::uint32_t k = 0; k < d; ++k) {
        const double* row = planes_.data() + std::size_t{k} * config_.dimensions;
        double dot = 0.0;
        for (std::uint32_t j : touched) {
            dot += row[j] * comp[j];
        }
        // A zero embedding has dot == 0 on every direction: the signature is
        // all zeros by definition.
        if (dot > 0.0) sig.set_bit(k, true);
    }
    return sig;
}

Signature RandomIndexModel::topd_signature(std::span<const std::int32_t> comp) const {
    const std::uint32_t d = config_.signature_bits;
    std::vector<std::uint32_t> order(comp.size());
    std::iota(order.begin(), order.end(), 0);
    // Largest |component| first; ties break toward the lower index.
    auto more_activated = [&](std::uint32_t a, std::uint32_t b) {
        const std::int64_t ma = std::abs(static_cast<std::int64_t>(comp[a]));
        const std::int64_t mb = std::abs(static_cast<std::int64_t>(comp[b]));
        return ma != mb ? ma > mb : a < b;
    };
    std::nth_element(order.begin(), order.begin() + d, order.end(), more_activated);
    std::sort(order.begin(), order.begin() + d);  // canonical ascending-index bit order

    Signature sig(d);
    for (std::uint32_t k = 0; k < d; ++k) {
        if (comp[order[k]] > 0) sig.set_bit(k, true);
    }
    return sig;
}

std::vector<Signature> RandomIndexModel::entry_signatures(
    std::span<const std::string> entry_tokens) const {
    const std::size_t n = entry_tokens.size();
    std::vector<Signature> out;
    out.reserve(n);
    if (n == 0) return out;

    std::vector<SparseTernaryVector> bases;
    bases.reserve(n);
    for (const std::string& tok : entry_tokens) bases.push_back(base_vector(tok));

    const std::size_t w = config_.window_radius;
    ContextEmbedding acc(config_.dimensions);
    std::size_t win_lo = 0;
    std::size_t win_hi = 0;  // current window [win_lo, win_hi]
    acc.add(bases[0]);
    std::vector<std::uint32_t> touched;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= w ? i - w : 0;
        const std::size_t hi = std::min(n - 1, i + w);
        while (win_hi < hi) acc.add(bases[++win_hi]);
        while (win_lo < lo) acc.subtract(bases[win_lo++]);

        if (config_.mode == SignatureMode::kTopD) {
            out.push_back(topd_signature(acc.components()));
            continue;
        }
        touched.clear();
        for (std::size_t j = win_lo; j <= win_hi; ++j) {
            touched.insert(touched.end(), bases[j].index.begin(), bases[j].index.end());
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        out.push_back(hyperplane_signature(acc.components(), touched));
    }
    return out;
}

Signature RandomIndexModel::query_signature(std::span<const std::string> keyword_tokens) const {
    if (keyword_tokens.empty()) {
        throw std::invalid_argument("query_signature: empty keyword");
    }
    ContextEmbedding e(config_.dimensions);
    for (const std::string& tok : keyword_tokens) e.add(base_vector(tok));
    return signature_of(e);
}

}  // namespace hippo
