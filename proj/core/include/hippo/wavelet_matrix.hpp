#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hippo/bit_vector.hpp"
#include "hippo/signature.hpp"

namespace hippo {

// Symbol adapters for the wavelet matrix. Level k of the matrix stores bit k
// of each symbol with bit 0 the most significant.

struct U64SymbolTraits {
    using Symbol = std::uint64_t;

    static bool bit(Symbol s, std::uint32_t k, std::uint32_t width) {
        return (s >> (width - 1 - k)) & 1u;
    }
    static Symbol zero(std::uint32_t) { return 0; }
    static void set_bit(Symbol& s, std::uint32_t k, std::uint32_t width) {
        s |= std::uint64_t{1} << (width - 1 - k);
    }
    static bool in_alphabet(Symbol s, std::uint32_t width) {
        return width >= 64 || (s >> width) == 0;
    }
};

struct SignatureSymbolTraits {
    using Symbol = Signature;

    static bool bit(const Symbol& s, std::uint32_t k, std::uint32_t) { return s.bit(k); }
    static Symbol zero(std::uint32_t width) { return Signature(width); }
    static void set_bit(Symbol& s, std::uint32_t k, std::uint32_t) { s.set_bit(k, true); }
    static bool in_alphabet(const Symbol& s, std::uint32_t width) { return s.size() == width; }
};

// Growing wavelet matrix over fixed-width symbols: one bit-vector per bit
// plane plus the per-level zero counts, with access/rank/select executed
// directly on the bit planes.
//
// Appending a symbol runs one top-down traversal: the most significant bit
// lands at the end of level 0 and each following bit lands at the end of its
// prefix bucket in the next level, located with rank over the level above.
// The width is fixed at construction; symbols outside the alphabet are
// rejected rather than widened.
template <typename Traits>
class BasicDynamicWaveletMatrix {
  public:
    using Symbol = typename Traits::Symbol;

    explicit BasicDynamicWaveletMatrix(std::uint32_t width)
        : width_(width), levels_(width), zeros_(width, 0) {
        if (width == 0) throw std::invalid_argument("wavelet matrix width must be positive");
    }

    void append(const Symbol& s) {
        if (!Traits::in_alphabet(s, width_)) {
            throw std::invalid_argument("symbol outside the alphabet for this width");
        }
        std::uint64_t pos = size_;
        for (std::uint32_t k = 0; k < width_; ++k) {
            const bool b = Traits::bit(s, k, width_);
            // The landing position in the next level depends only on the
            // prefix [0, pos), so it can be computed before this insert.
            const std::uint64_t next =
                b ? zeros_[k] + levels_[k].rank1(pos) : levels_[k].rank0(pos);
            levels_[k].insert(pos, b);
            if (!b) ++zeros_[k];
            pos = next;
        }
        ++size_;
    }

    Symbol access(std::uint64_t i) const {
        if (i >= size_) throw std::out_of_range("wavelet matrix access: i >= size");
        Symbol out = Traits::zero(width_);
        for (std::uint32_t k = 0; k < width_; ++k) {
            const bool b = levels_[k].get(i);
            if (b) {
                Traits::set_bit(out, k, width_);
                i = zeros_[k] + levels_[k].rank1(i);
            } else {
                i = levels_[k].rank0(i);
            }
        }
        return out;
    }

    // Occurrences of c in the prefix [0, i).
    std::uint64_t rank(const Symbol& c, std::uint64_t i) const {
        if (i > size_) throw std::out_of_range("wavelet matrix rank: i > size");
        if (!Traits::in_alphabet(c, width_)) return 0;
        auto [p_lo, p_hi] = narrow(c, 0, i);
        return p_hi - p_lo;
    }

    // Occurrences of c in [lo, hi).
    std::uint64_t range_count(const Symbol& c, std::uint64_t lo, std::uint64_t hi) const {
        if (hi > size_ || lo > hi) throw std::out_of_range("wavelet matrix range_count bounds");
        if (!Traits::in_alphabet(c, width_)) return 0;
        auto [p_lo, p_hi] = narrow(c, lo, hi);
        return p_hi - p_lo;
    }

    // Global position of the j-th occurrence of c (j is 1-based); nullopt
    // when fewer than j occurrences exist.
    std::optional<std::uint64_t> select(const Symbol& c, std::uint64_t j) const {
        if (j == 0 || !Traits::in_alphabet(c, width_)) return std::nullopt;
        auto [p_lo, p_hi] = narrow(c, 0, size_);
        if (j > p_hi - p_lo) return std::nullopt;
        std::uint64_t p = p_lo + (j - 1);
        for (std::uint32_t k = width_; k-- > 0;) {
            if (Traits::bit(c, k, width_)) {
                auto pos = levels_[k].select1((p - zeros_[k]) + 1);
                assert(pos.has_value());
                p = *pos;
            } else {
                auto pos = levels_[k].select0(p + 1);
                assert(pos.has_value());
                p = *pos;
            }
        }
        return p;
    }

    std::uint64_t size() const noexcept { return size_; }
    std::uint32_t width() const noexcept { return width_; }

    const DynamicBitVector& level(std::uint32_t k) const { return levels_.at(k); }
    std::uint64_t zero_count(std::uint32_t k) const { return zeros_.at(k); }

    // Persistence hooks: levels are rebuilt from flat bit payloads.
    void restore_level(std::uint32_t k, DynamicBitVector bv, std::uint64_t zero_count) {
        levels_.at(k) = std::move(bv);
        zeros_.at(k) = zero_count;
    }
    void restore_size(std::uint64_t n) { size_ = n; }

  private:
    std::pair<std::uint64_t, std::uint64_t> narrow(const Symbol& c, std::uint64_t p_lo,
                                                   std::uint64_t p_hi) const {
        for (std::uint32_t k = 0; k < width_; ++k) {
            if (Traits::bit(c, k, width_)) {
                p_lo = zeros_[k] + levels_[k].rank1(p_lo);
                p_hi = zeros_[k] + levels_[k].rank1(p_hi);
            } else {
                p_lo = levels_[k].rank0(p_lo);
                p_hi = levels_[k].rank0(p_hi);
            }
        }
        return {p_lo, p_hi};
    }

    std::uint32_t width_;
    std::vector<DynamicBitVector> levels_;
    std::vector<std::uint64_t> zeros_;
    std::uint64_t size_ = 0;
};

using DynamicWaveletMatrix = BasicDynamicWaveletMatrix<U64SymbolTraits>;
using SignatureWaveletMatrix = BasicDynamicWaveletMatrix<SignatureSymbolTraits>;

}  // namespace hippo
