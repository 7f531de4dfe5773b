#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hippo/signature.hpp"

namespace hippo {

// Occurrence counts per distinct stored signature, with the signature words
// packed into one flat array so Hamming-ball scans run as straight-line
// XOR+POPCOUNT over contiguous memory.
class SignatureDictionary {
  public:
    explicit SignatureDictionary(std::uint32_t signature_bits);

    void add(const Signature& s) { add(s, 1); }
    void add(const Signature& s, std::uint64_t occurrences);

    std::uint64_t count(const Signature& s) const;
    std::size_t distinct() const noexcept { return counts_.size(); }
    std::uint64_t total() const noexcept { return total_; }
    std::uint32_t signature_bits() const noexcept { return bits_; }

    // Every distinct signature within `radius` of q, with its count.
    std::vector<std::pair<Signature, std::uint64_t>> ball(const Signature& q,
                                                          std::uint32_t radius) const;

    const Signature& signature_at(std::size_t idx) const { return order_[idx]; }
    std::uint64_t count_at(std::size_t idx) const { return counts_[idx]; }

  private:
    std::uint32_t bits_;
    std::size_t words_per_sig_;
    std::vector<std::uint64_t> packed_;  // distinct * words_per_sig_
    std::vector<std::uint64_t> counts_;
    std::vector<Signature> order_;       // insertion order, aligned with counts_
    std::unordered_map<Signature, std::size_t, Signature::Hash> index_;
    std::uint64_t total_ = 0;
};

}  // namespace hippo
