#include "hippo/bit_vector.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace hippo {

namespace {

constexpr std::uint64_t kLeafBits = 4096;
constexpr std::uint64_t kLeafWords = kLeafBits / 64;
constexpr std::size_t kMaxChildren = 64;
constexpr std::size_t kWordSlack = 8;  // leaf word-vector growth granularity

std::uint64_t popcount_words(const std::vector<std::uint64_t>& words, std::size_t nwords) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < nwords; ++i) n += std::popcount(words[i]);
    return n;
}

void grow_to(std::vector<std::uint64_t>& words, std::size_t nwords) {
    if (words.capacity() < nwords) {
        words.reserve(std::min<std::size_t>(kLeafWords, nwords + kWordSlack));
    }
    words.resize(nwords, 0);
}

// Copies `count` bits starting at bit `from` of src into dst at bit 0.
// dst must hold ceil(count/64) words; its trailing bits are zeroed.
void copy_bit_range(const std::uint64_t* src, std::size_t src_words, std::uint64_t from,
                    std::uint64_t count, std::uint64_t* dst) {
    if (count == 0) return;
    const std::size_t out_words = (count + 63) / 64;
    const std::size_t w = from / 64;
    const unsigned off = static_cast<unsigned>(from % 64);
    if (off == 0) {
        std::memcpy(dst, src + w, out_words * sizeof(std::uint64_t));
    } else {
        for (std::size_t i = 0; i < out_words; ++i) {
            std::uint64_t lo = src[w + i] >> off;
            std::uint64_t hi = (w + i + 1 < src_words) ? src[w + i + 1] << (64 - off) : 0;
            dst[i] = lo | hi;
        }
    }
    if (count % 64 != 0) {
        dst[out_words - 1] &= (std::uint64_t{1} << (count % 64)) - 1;
    }
}

// Position of the j-th set bit in a word, 1-based; the caller guarantees
// popcount(word) >= j.
unsigned select_in_word(std::uint64_t word, unsigned j) {
    for (unsigned byte = 0; byte < 8; ++byte) {
        unsigned pc = static_cast<unsigned>(std::popcount(word & 0xffu));
        if (pc >= j) {
            for (unsigned bit = 0; bit < 8; ++bit) {
                if ((word >> bit) & 1u) {
                    if (--j == 0) return byte * 8 + bit;
                }
            }
        }
        j -= pc;
        word >>= 8;
    }
    return 64;  // unreachable under the precondition
}

void leaf_insert(std::vector<std::uint64_t>& words, std::uint64_t num_bits, std::uint64_t pos,
                 bool bit) {
    const std::size_t nwords_after = static_cast<std::size_t>((num_bits + 1 + 63) / 64);
    grow_to(words, nwords_after);
    const std::size_t wi = static_cast<std::size_t>(pos / 64);
    const unsigned off = static_cast<unsigned>(pos % 64);
    for (std::size_t w = nwords_after - 1; w > wi; --w) {
        words[w] = (words[w] << 1) | (words[w - 1] >> 63);
    }
    const std::uint64_t lo_mask = (std::uint64_t{1} << off) - 1;  // off < 64 always
    const std::uint64_t w0 = words[wi];
    words[wi] = (w0 & lo_mask) | (std::uint64_t{bit} << off) | ((w0 & ~lo_mask) << 1);
}

std::uint64_t leaf_rank1(const std::vector<std::uint64_t>& words, std::uint64_t i) {
    const std::size_t full = static_cast<std::size_t>(i / 64);
    std::uint64_t n = 0;
    for (std::size_t w = 0; w < full; ++w) n += std::popcount(words[w]);
    const unsigned off = static_cast<unsigned>(i % 64);
    if (off != 0) {
        n += std::popcount(words[full] & ((std::uint64_t{1} << off) - 1));
    }
    return n;
}

}  // namespace

DynamicBitVector::DynamicBitVector(const DynamicBitVector& other)
    : root_(other.root_ ? clone(*other.root_) : nullptr),
      size_(other.size_),
      ones_(other.ones_) {}

DynamicBitVector& DynamicBitVector::operator=(const DynamicBitVector& other) {
    if (this != &other) {
        root_ = other.root_ ? clone(*other.root_) : nullptr;
        size_ = other.size_;
        ones_ = other.ones_;
    }
    return *this;
}

DynamicBitVector::NodePtr DynamicBitVector::clone(const Node& node) {
    auto copy = std::make_unique<Node>();
    copy->num_bits = node.num_bits;
    copy->num_ones = node.num_ones;
    copy->words = node.words;
    copy->children.reserve(node.children.size());
    for (const NodePtr& child : node.children) copy->children.push_back(clone(*child));
    return copy;
}

void DynamicBitVector::insert(std::uint64_t pos, bool bit) {
    if (pos > size_) throw std::out_of_range("DynamicBitVector::insert: pos > size");
    if (!root_) root_ = std::make_unique<Node>();
    NodePtr sibling = insert_rec(*root_, pos, bit);
    if (sibling) {
        auto new_root = std::make_unique<Node>();
        new_root->num_bits = root_->num_bits + sibling->num_bits;
        new_root->num_ones = root_->num_ones + sibling->num_ones;
        new_root->children.push_back(std::move(root_));
        new_root->children.push_back(std::move(sibling));
        root_ = std::move(new_root);
    }
    ++size_;
    ones_ += bit;
}

DynamicBitVector::NodePtr DynamicBitVector::insert_rec(Node& node, std::uint64_t pos, bool bit) {
    if (node.is_leaf()) {
        if (node.num_bits == kLeafBits) {
            NodePtr right = split_leaf(node, pos);
            if (pos < kLeafBits) {
                leaf_insert(node.words, node.num_bits, pos, bit);
                node.num_bits += 1;
                node.num_ones += bit;
            } else {
                leaf_insert(right->words, right->num_bits, 0, bit);
                right->num_bits += 1;
                right->num_ones += bit;
            }
            return right;
        }
        leaf_insert(node.words, node.num_bits, pos, bit);
        node.num_bits += 1;
        node.num_ones += bit;
        return nullptr;
    }

    std::size_t ci = 0;
    while (pos > node.children[ci]->num_bits) {
        pos -= node.children[ci]->num_bits;
        ++ci;
    }
    NodePtr sibling = insert_rec(*node.children[ci], pos, bit);
    node.num_bits += 1;
    node.num_ones += bit;
    if (sibling) {
        node.children.insert(node.children.begin() + static_cast<std::ptrdiff_t>(ci) + 1,
                             std::move(sibling));
        if (node.children.size() > kMaxChildren) return split_inner(node);
    }
    return nullptr;
}

DynamicBitVector::NodePtr DynamicBitVector::split_leaf(Node& leaf, std::uint64_t pos) {
    auto right = std::make_unique<Node>();
    const std::uint64_t rbits = leaf.num_bits - pos;
    if (rbits > 0) {
        grow_to(right->words, static_cast<std::size_t>((rbits + 63) / 64));
        copy_bit_range(leaf.words.data(), leaf.words.size(), pos, rbits, right->words.data());
        right->num_ones = popcount_words(right->words, right->words.size());
    }
    right->num_bits = rbits;

    leaf.num_bits = pos;
    leaf.num_ones -= right->num_ones;
    leaf.words.resize((pos + 63) / 64);
    if (pos % 64 != 0) {
        leaf.words.back() &= (std::uint64_t{1} << (pos % 64)) - 1;
    }
    leaf.words.shrink_to_fit();
    return right;
}

DynamicBitVector::NodePtr DynamicBitVector::split_inner(Node& node) {
    auto right = std::make_unique<Node>();
    const std::size_t half = node.children.size() / 2;
    right->children.assign(std::make_move_iterator(node.children.begin() + half),
                           std::make_move_iterator(node.children.end()));
    node.children.resize(half);
    for (const NodePtr& child : right->children) {
        right->num_bits += child->num_bits;
        right->num_ones += child->num_ones;
    }
    node.num_bits -= right->num_bits;
    node.num_ones -= right->num_ones;
    return right;
}

bool DynamicBitVector::get(std::uint64_t i) const {
    if (i >= size_) throw std::out_of_range("DynamicBitVector::get: i >= size");
    const Node* node = root_.get();
    while (!node->is_leaf()) {
        for (const NodePtr& child : node->children) {
            if (i < child->num_bits) {
                node = child.get();
                break;
            }
            i -= child->num_bits;
        }
    }
    return (node->words[i / 64] >> (i % 64)) & 1u;
}

std::uint64_t DynamicBitVector::rank1(std::uint64_t i) const {
    if (i > size_) throw std::out_of_range("DynamicBitVector::rank1: i > size");
    if (i == 0) return 0;
    const Node* node = root_.get();
    std::uint64_t acc = 0;
    while (!node->is_leaf()) {
        for (const NodePtr& child : node->children) {
            if (i <= child->num_bits) {
                node = child.get();
                break;
            }
            acc += child->num_ones;
            i -= child->num_bits;
        }
    }
    return acc + leaf_rank1(node->words, i);
}

std::optional<std::uint64_t> DynamicBitVector::select1(std::uint64_t j) const {
    if (j == 0 || j > ones_) return std::nullopt;
    const Node* node = root_.get();
    std::uint64_t pos = 0;
    while (!node->is_leaf()) {
        for (const NodePtr& child : node->children) {
            if (j <= child->num_ones) {
                node = child.get();
                break;
            }
            j -= child->num_ones;
            pos += child->num_bits;
        }
    }
    for (std::size_t w = 0;; ++w) {
        const unsigned pc = static_cast<unsigned>(std::popcount(node->words[w]));
        if (j <= pc) {
            return pos + w * 64 + select_in_word(node->words[w], static_cast<unsigned>(j));
        }
        j -= pc;
    }
}

std::optional<std::uint64_t> DynamicBitVector::select0(std::uint64_t j) const {
    if (j == 0 || j > zeros()) return std::nullopt;
    const Node* node = root_.get();
    std::uint64_t pos = 0;
    while (!node->is_leaf()) {
        for (const NodePtr& child : node->children) {
            const std::uint64_t child_zeros = child->num_bits - child->num_ones;
            if (j <= child_zeros) {
                node = child.get();
                break;
            }
            j -= child_zeros;
            pos += child->num_bits;
        }
    }
    for (std::size_t w = 0;; ++w) {
        // Bits past num_bits in the top word are zero; cap the zero count so
        // they are never counted as logical positions.
        const std::uint64_t remaining = node->num_bits - w * 64;
        const unsigned valid = static_cast<unsigned>(remaining < 64 ? remaining : 64);
        const unsigned zc = valid - static_cast<unsigned>(std::popcount(
                                        node->words[w] & (valid == 64
                                                              ? ~std::uint64_t{0}
                                                              : (std::uint64_t{1} << valid) - 1)));
        if (j <= zc) {
            return pos + w * 64 + select_in_word(~node->words[w], static_cast<unsigned>(j));
        }
        j -= zc;
    }
}

std::vector<std::uint64_t> DynamicBitVector::to_words() const {
    std::vector<std::uint64_t> out((size_ + 63) / 64, 0);
    if (!root_) return out;

    std::uint64_t cursor = 0;
    // Iterative DFS appending each leaf's payload at the running bit offset.
    std::vector<std::pair<const Node*, std::size_t>> stack;
    stack.emplace_back(root_.get(), 0);
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (node->is_leaf()) {
            const std::size_t wi = static_cast<std::size_t>(cursor / 64);
            const unsigned off = static_cast<unsigned>(cursor % 64);
            const std::size_t nwords = static_cast<std::size_t>((node->num_bits + 63) / 64);
            if (off == 0) {
                for (std::size_t w = 0; w < nwords; ++w) out[wi + w] |= node->words[w];
            } else {
                for (std::size_t w = 0; w < nwords; ++w) {
                    out[wi + w] |= node->words[w] << off;
                    if (wi + w + 1 < out.size()) {
                        out[wi + w + 1] |= node->words[w] >> (64 - off);
                    }
                }
            }
            cursor += node->num_bits;
            stack.pop_back();
            continue;
        }
        if (next < node->children.size()) {
            const Node* child = node->children[next].get();
            ++next;
            stack.emplace_back(child, 0);
        } else {
            stack.pop_back();
        }
    }
    return out;
}

DynamicBitVector DynamicBitVector::from_bits(std::span<const std::uint64_t> words,
                                             std::uint64_t nbits) {
    DynamicBitVector bv;
    if (nbits == 0) return bv;

    // Build full leaves directly, then stack inner levels bottom-up.
    std::vector<NodePtr> level;
    for (std::uint64_t start = 0; start < nbits; start += kLeafBits) {
        const std::uint64_t count = std::min<std::uint64_t>(kLeafBits, nbits - start);
        auto leaf = std::make_unique<Node>();
        grow_to(leaf->words, static_cast<std::size_t>((count + 63) / 64));
        copy_bit_range(words.data(), words.size(), start, count, leaf->words.data());
        leaf->num_bits = count;
        leaf->num_ones = popcount_words(leaf->words, leaf->words.size());
        bv.ones_ += leaf->num_ones;
        level.push_back(std::move(leaf));
    }
    while (level.size() > 1) {
        std::vector<NodePtr> parents;
        for (std::size_t i = 0; i < level.size(); i += kMaxChildren) {
            auto parent = std::make_unique<Node>();
            const std::size_t end = std::min(level.size(), i + kMaxChildren);
            for (std::size_t k = i; k < end; ++k) {
                parent->num_bits += level[k]->num_bits;
                parent->num_ones += level[k]->num_ones;
                parent->children.push_back(std::move(level[k]));
            }
            parents.push_back(std::move(parent));
        }
        level = std::move(parents);
    }
    bv.root_ = std::move(level.front());
    bv.size_ = nbits;
    return bv;
}

std::uint64_t DynamicBitVector::heap_bytes() const {
    std::uint64_t total = 0;
    std::vector<const Node*> stack;
    if (root_) stack.push_back(root_.get());
    constexpr std::uint64_t kAllocHeader = 16;
    while (!stack.empty()) {
        const Node* node = stack.back();
        stack.pop_back();
        total += sizeof(Node) + kAllocHeader;
        if (node->words.capacity() > 0) {
            total += node->words.capacity() * sizeof(std::uint64_t) + kAllocHeader;
        }
        if (node->children.capacity() > 0) {
            total += node->children.capacity() * sizeof(NodePtr) + kAllocHeader;
        }
        for (const NodePtr& child : node->children) stack.push_back(child.get());
    }
    return total;
}

}  // namespace hippo
