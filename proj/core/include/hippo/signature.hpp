#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hippo {

// Fixed-length bit string used as a per-token semantic code. Bits pack
// little-endian into 64-bit words: bit k lives in word k/64 at position k%64.
class Signature {
  public:
    Signature() = default;
    explicit Signature(std::uint32_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::uint32_t size() const noexcept { return nbits_; }
    bool empty() const noexcept { return nbits_ == 0; }

    bool bit(std::uint32_t k) const { return (words_[k / 64] >> (k % 64)) & 1u; }
    void set_bit(std::uint32_t k, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (k % 64);
        if (v) {
            words_[k / 64] |= mask;
        } else {
            words_[k / 64] &= ~mask;
        }
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    // Number of set bits.
    std::uint32_t popcount() const noexcept;

    friend bool operator==(const Signature&, const Signature&) = default;

    // Numeric order with word 0 least significant; shorter signatures sort
    // before longer ones. This is the on-disk dictionary order.
    std::strong_ordering operator<=>(const Signature& other) const noexcept;

    // "101..."; bit 0 printed first.
    std::string to_string() const;
    static Signature from_string(std::string_view bits);

    struct Hash {
        std::size_t operator()(const Signature& s) const noexcept;
    };

  private:
    std::uint32_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

// Count of differing bit positions. Throws std::invalid_argument when the
// lengths differ.
std::uint32_t hamming(const Signature& a, const Signature& b);

// XOR+popcount over raw packed words; both spans must cover the same width.
std::uint64_t hamming_words(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

// True iff hamming(q, s) <= radius.
bool within_ball(const Signature& q, const Signature& s, std::uint32_t radius);

}  // namespace hippo
