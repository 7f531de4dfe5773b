#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace hippo {

// Append- and insert-capable bit sequence with logarithmic rank/select.
//
// Bits live in fixed-capacity blocks at the leaves of a shallow B-tree;
// every node caches the bit count and set-bit count of its subtree. A full
// leaf splits at the insertion point, which keeps blocks near capacity under
// the append-at-bucket-end pattern this structure exists to serve. There is
// no delete: the sequence only grows.
//
// Not internally synchronized; concurrent readers are safe only while no
// writer is active.
class DynamicBitVector {
  public:
    DynamicBitVector() = default;
    DynamicBitVector(const DynamicBitVector& other);
    DynamicBitVector& operator=(const DynamicBitVector& other);
    DynamicBitVector(DynamicBitVector&&) noexcept = default;
    DynamicBitVector& operator=(DynamicBitVector&&) noexcept = default;

    // Inserts `bit` at logical position `pos` in [0, size()]; bits at or
    // after `pos` shift up by one. Throws std::out_of_range otherwise.
    void insert(std::uint64_t pos, bool bit);
    void push_back(bool bit) { insert(size_, bit); }

    // Bit at position i. Throws std::out_of_range when i >= size().
    bool get(std::uint64_t i) const;

    // Number of set (resp. clear) bits in the prefix [0, i).
    // Throws std::out_of_range when i > size().
    std::uint64_t rank1(std::uint64_t i) const;
    std::uint64_t rank0(std::uint64_t i) const { return i - rank1(i); }

    // Position of the j-th set (resp. clear) bit, 1-based occurrence.
    // Returns nullopt when fewer than j occurrences exist (or j == 0).
    std::optional<std::uint64_t> select1(std::uint64_t j) const;
    std::optional<std::uint64_t> select0(std::uint64_t j) const;

    std::uint64_t size() const noexcept { return size_; }
    std::uint64_t ones() const noexcept { return ones_; }
    std::uint64_t zeros() const noexcept { return size_ - ones_; }

    // Flat little-endian packing: bit i maps to word i/64, bit position i%64.
    std::vector<std::uint64_t> to_words() const;

    // Rebuilds the block tree from a flat packing (bulk load, leaves full).
    static DynamicBitVector from_bits(std::span<const std::uint64_t> words,
                                      std::uint64_t nbits);

    // Allocated heap footprint, for index-overhead accounting.
    std::uint64_t heap_bytes() const;

  private:
    struct Node;
    using NodePtr = std::unique_ptr<Node>;

    struct Node {
        std::uint64_t num_bits = 0;
        std::uint64_t num_ones = 0;
        std::vector<std::uint64_t> words;  // leaf payload; unused on inner nodes
        std::vector<NodePtr> children;     // empty on leaves

        bool is_leaf() const noexcept { return children.empty(); }
    };

    NodePtr insert_rec(Node& node, std::uint64_t pos, bool bit);
    static NodePtr split_leaf(Node& leaf, std::uint64_t pos);
    static NodePtr split_inner(Node& node);
    static NodePtr clone(const Node& node);

    NodePtr root_;
    std::uint64_t size_ = 0;
    std::uint64_t ones_ = 0;
};

}  // namespace hippo
