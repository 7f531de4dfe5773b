#include "hippo/signature_dictionary.hpp"

#include <bit>
#include <stdexcept>

namespace hippo {

SignatureDictionary::SignatureDictionary(std::uint32_t signature_bits)
    : bits_(signature_bits), words_per_sig_((signature_bits + 63) / 64) {
    if (signature_bits == 0) {
        throw std::invalid_argument("signature dictionary: zero-width signatures");
    }
}

void SignatureDictionary::add(const Signature& s, std::uint64_t occurrences) {
    if (s.size() != bits_) {
        throw std::invalid_argument("signature dictionary: width mismatch");
    }
    if (occurrences == 0) return;
    total_ += occurrences;
    auto it = index_.find(s);
    if (it != index_.end()) {
        counts_[it->second] += occurrences;
        return;
    }
    const std::size_t idx = counts_.size();
    index_.emplace(s, idx);
    counts_.push_back(occurrences);
    order_.push_back(s);
    packed_.insert(packed_.end(), s.words().begin(), s.words().end());
}

std::uint64_t SignatureDictionary::count(const Signature& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? 0 : counts_[it->second];
}

std::vector<std::pair<Signature, std::uint64_t>> SignatureDictionary::ball(
    const Signature& q, std::uint32_t radius) const {
    if (q.size() != bits_) {
        throw std::invalid_argument("signature dictionary: width mismatch");
    }
    std::vector<std::pair<Signature, std::uint64_t>> out;
    const std::uint64_t* qw = q.words().data();
    const std::uint64_t* packed = packed_.data();
    const std::size_t stride = words_per_sig_;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        std::uint64_t dist = 0;
        const std::uint64_t* sw = packed + i * stride;
        for (std::size_t w = 0; w < stride; ++w) {
            dist += std::popcount(qw[w] ^ sw[w]);
        }
        if (dist <= radius) {
            out.emplace_back(order_[i], counts_[i]);
        }
    }
    return out;
}

}  // namespace hippo
