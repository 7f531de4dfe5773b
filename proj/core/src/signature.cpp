#include "hippo/signature.hpp"

#include <bit>
#include <stdexcept>

namespace hippo {

std::uint32_t Signature::popcount() const noexcept {
    std::uint32_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::uint32_t>(std::popcount(w));
    return n;
}

std::strong_ordering Signature::operator<=>(const Signature& other) const noexcept {
    if (auto c = nbits_ <=> other.nbits_; c != 0) return c;
    for (std::size_t i = words_.size(); i-- > 0;) {
        if (auto c = words_[i] <=> other.words_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

std::string Signature::to_string() const {
    std::string s;
    s.reserve(nbits_);
    for (std::uint32_t k = 0; k < nbits_; ++k) s += bit(k) ? '1' : '0';
    return s;
}

Signature Signature::from_string(std::string_view bits) {
    Signature s(static_cast<std::uint32_t>(bits.size()));
    for (std::uint32_t k = 0; k < bits.size(); ++k) {
        if (bits[k] == '1') s.set_bit(k, true);
    }
    return s;
}

std::size_t Signature::Hash::operator()(const Signature& s) const noexcept {
    // FNV-1a over the packed words.
    std::uint64_t h = 0xcbf29ce484222325ull ^ s.nbits_;
    for (std::uint64_t w : s.words_) {
        h ^= w;
        h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
}

std::uint32_t hamming(const Signature& a, const Signature& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming: signature lengths differ");
    }
    return static_cast<std::uint32_t>(hamming_words(a.words(), b.words()));
}

std::uint64_t hamming_words(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += std::popcount(a[i] ^ b[i]);
    return n;
}

bool within_ball(const Signature& q, const Signature& s, std::uint32_t radius) {
    return hamming(q, s) <= radius;
}

}  // namespace hippo
