#pragma once

// Naive reference structures used to cross-check the real data structures.
// Everything here is deliberately simple and slow: plain growable arrays,
// linear scans, and a stable-sort wavelet-matrix builder. None of it shares
// code with the structures under test.

#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

// Growable bit array with positional insert and scan-based rank/select.
class NaiveBitVector {
  public:
    void insert(std::size_t pos, bool bit) {
        bits_.insert(bits_.begin() + static_cast<std::ptrdiff_t>(pos), bit ? 1 : 0);
    }
    void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }

    bool get(std::size_t i) const { return bits_[i] != 0; }
    std::size_t size() const { return bits_.size(); }

    std::size_t rank1(std::size_t i) const {
        std::size_t n = 0;
        for (std::size_t k = 0; k < i; ++k) n += bits_[k];
        return n;
    }
    std::size_t rank0(std::size_t i) const { return i - rank1(i); }

    // 1-based occurrence; nullopt when fewer than j occurrences exist.
    std::optional<std::size_t> select1(std::size_t j) const { return select(j, 1); }
    std::optional<std::size_t> select0(std::size_t j) const { return select(j, 0); }

  private:
    std::optional<std::size_t> select(std::size_t j, char v) const {
        if (j == 0) return std::nullopt;
        std::size_t seen = 0;
        for (std::size_t k = 0; k < bits_.size(); ++k) {
            if (bits_[k] == v && ++seen == j) return k;
        }
        return std::nullopt;
    }

    std::vector<char> bits_;
};

// Plain symbol sequence answering access/rank/select/range_count by scan.
template <typename Symbol>
class NaiveSequence {
  public:
    void push_back(const Symbol& s) { seq_.push_back(s); }

    const Symbol& access(std::size_t i) const { return seq_[i]; }
    std::size_t size() const { return seq_.size(); }

    std::size_t rank(const Symbol& c, std::size_t i) const {
        std::size_t n = 0;
        for (std::size_t k = 0; k < i; ++k) n += (seq_[k] == c);
        return n;
    }

    std::optional<std::size_t> select(const Symbol& c, std::size_t j) const {
        if (j == 0) return std::nullopt;
        std::size_t seen = 0;
        for (std::size_t k = 0; k < seq_.size(); ++k) {
            if (seq_[k] == c && ++seen == j) return k;
        }
        return std::nullopt;
    }

    std::size_t range_count(const Symbol& c, std::size_t lo, std::size_t hi) const {
        std::size_t n = 0;
        for (std::size_t k = lo; k < hi; ++k) n += (seq_[k] == c);
        return n;
    }

    const std::vector<Symbol>& data() const { return seq_; }

  private:
    std::vector<Symbol> seq_;
};

// Batch-built wavelet matrix levels: level k holds bit k (MSB first) of the
// sequence as reordered by stable partitions on the previous levels.
// BitOf(symbol, k) must return bit k with k = 0 being the most significant.
template <typename Symbol, typename BitOf>
struct StaticWaveletLevels {
    std::vector<std::vector<char>> levels;
    std::vector<std::size_t> zeros;

    StaticWaveletLevels(const std::vector<Symbol>& symbols, std::size_t width, BitOf bit_of) {
        levels.resize(width);
        zeros.resize(width, 0);
        std::vector<Symbol> cur = symbols;
        for (std::size_t k = 0; k < width; ++k) {
            levels[k].reserve(cur.size());
            std::vector<Symbol> zero_part, one_part;
            for (const Symbol& s : cur) {
                bool b = bit_of(s, k);
                levels[k].push_back(b ? 1 : 0);
                (b ? one_part : zero_part).push_back(s);
            }
            zeros[k] = zero_part.size();
            cur = std::move(zero_part);
            cur.insert(cur.end(), one_part.begin(), one_part.end());
        }
    }
};

}  // namespace oracle
