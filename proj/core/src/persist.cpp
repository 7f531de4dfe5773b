#include "hippo/persist.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "hippo/errors.hpp"

namespace hippo {

namespace {

constexpr std::uint64_t kCrcPoly = 0xC96C5795D7870F42ull;  // CRC-64/XZ, reflected

const std::array<std::uint64_t, 256>& crc_table() {
    static const std::array<std::uint64_t, 256> table = [] {
        std::array<std::uint64_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint64_t crc = i;
            for (int bit = 0; bit < 8; ++bit) {
                crc = (crc & 1) ? (crc >> 1) ^ kCrcPoly : crc >> 1;
            }
            t[i] = crc;
        }
        return t;
    }();
    return table;
}

class Writer {
  public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        buf_.insert(buf_.end(), p, p + n);
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
    // Packed bit payload: ceil(nbits/8) bytes of the little-endian words.
    void bit_payload(const std::vector<std::uint64_t>& words, std::uint64_t nbits) {
        const std::uint64_t nbytes = (nbits + 7) / 8;
        for (std::uint64_t b = 0; b < nbytes; ++b) {
            buf_.push_back(static_cast<std::uint8_t>(words[b / 8] >> (8 * (b % 8))));
        }
    }

    std::vector<std::uint8_t> take() { return std::move(buf_); }

  private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
  public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{data_[pos_ + i]} << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{data_[pos_ + i]} << (8 * i);
        pos_ += 8;
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    std::string str() {
        const std::uint32_t len = u32();
        need(len);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), len);
        pos_ += len;
        return s;
    }
    std::vector<std::uint64_t> bit_payload(std::uint64_t nbits) {
        const std::uint64_t nbytes = (nbits + 7) / 8;
        need(nbytes);
        std::vector<std::uint64_t> words((nbits + 63) / 64, 0);
        for (std::uint64_t b = 0; b < nbytes; ++b) {
            words[b / 8] |= std::uint64_t{data_[pos_ + b]} << (8 * (b % 8));
        }
        pos_ += nbytes;
        return words;
    }

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return size_ - pos_; }

  private:
    void need(std::uint64_t n) const {
        if (n > size_ - pos_) throw CorruptionError("store image truncated");
    }

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

void write_levels(Writer& w, std::uint32_t width, auto&& level_at, auto&& zeros_at) {
    for (std::uint32_t k = 0; k < width; ++k) {
        const DynamicBitVector& bv = level_at(k);
        w.u64(bv.size());
        w.bit_payload(bv.to_words(), bv.size());
        w.u64(zeros_at(k));
    }
}

template <typename Matrix>
void read_levels(Reader& r, Matrix& matrix, std::uint32_t width, std::uint64_t n) {
    for (std::uint32_t k = 0; k < width; ++k) {
        const std::uint64_t nbits = r.u64();
        if (nbits != n) {
            throw FormatError("level bit length disagrees with the header token count");
        }
        auto words = r.bit_payload(nbits);
        const std::uint64_t zeros = r.u64();
        matrix.restore_level(k, DynamicBitVector::from_bits(words, nbits), zeros);
    }
    matrix.restore_size(n);
}

}  // namespace

std::uint64_t crc64(const std::uint8_t* data, std::size_t size) {
    const auto& table = crc_table();
    std::uint64_t crc = ~std::uint64_t{0};
    for (std::size_t i = 0; i < size; ++i) {
        crc = table[(crc ^ data[i]) & 0xff] ^ (crc >> 8);
    }
    return ~crc;
}

std::vector<std::uint8_t> serialize_store(const MemoryStore& store) {
    const StoreConfig& cfg = store.config();
    const std::uint64_t n = store.token_count();

    Writer w;
    w.bytes(kStoreMagic, sizeof(kStoreMagic));
    w.u32(kStoreFormatVersion);
    w.u32(cfg.sigma);
    w.u32(store.content().width());
    w.u32(cfg.signature.dimensions);
    w.u32(cfg.signature.signature_bits);
    w.u32(cfg.signature.base_nonzeros);
    w.u32(cfg.signature.window_radius);
    w.u32(static_cast<std::uint32_t>(cfg.signature.mode));
    w.u64(cfg.signature.seed);
    w.u64(n);
    w.u64(store.entry_count());
    w.u64(store.vocabulary().size());

    for (std::uint32_t id = 0; id < store.vocabulary().size(); ++id) {
        w.str(store.vocabulary().surface(id));
    }

    write_levels(
        w, store.content().width(), [&](std::uint32_t k) -> const DynamicBitVector& {
            return store.content().level(k);
        },
        [&](std::uint32_t k) { return store.content().zero_count(k); });
    write_levels(
        w, store.signatures().width(), [&](std::uint32_t k) -> const DynamicBitVector& {
            return store.signatures().level(k);
        },
        [&](std::uint32_t k) { return store.signatures().zero_count(k); });

    for (const EntryMetadata& e : store.entries()) {
        w.u64(e.entry_id);
        w.u64(e.alpha);
        w.u64(e.beta);
        w.i64(e.timestamp_us);
        w.str(e.role);
        w.str(e.session_id);
    }

    // Dictionary rows ascend by signature value so the image is canonical.
    const SignatureDictionary& dict = store.dictionary();
    std::vector<std::size_t> order(dict.distinct());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dict.signature_at(a) < dict.signature_at(b);
    });
    w.u64(dict.distinct());
    for (std::size_t i : order) {
        const Signature& sig = dict.signature_at(i);
        std::vector<std::uint64_t> words(sig.words().begin(), sig.words().end());
        w.bit_payload(words, sig.size());
        w.u64(dict.count_at(i));
    }

    std::vector<std::uint8_t> image = w.take();
    const std::uint64_t checksum = crc64(image.data(), image.size());
    for (int i = 0; i < 8; ++i) image.push_back(static_cast<std::uint8_t>(checksum >> (8 * i)));
    return image;
}

std::uint64_t save_store(const MemoryStore& store, const std::filesystem::path& destination) {
    const std::vector<std::uint8_t> image = serialize_store(store);

    std::filesystem::path temp = destination;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("save_store: cannot open " + temp.string());
        }
        out.write(reinterpret_cast<const char*>(image.data()),
                  static_cast<std::streamsize>(image.size()));
        if (!out) {
            out.close();
            std::filesystem::remove(temp);
            throw std::runtime_error("save_store: write failed for " + temp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(temp, destination, ec);
    if (ec) {
        std::filesystem::remove(temp);
        throw std::runtime_error("save_store: rename failed: " + ec.message());
    }
    return image.size();
}

MemoryStore parse_store(const std::vector<std::uint8_t>& image) {
    if (image.size() < sizeof(kStoreMagic) + 8) {
        throw CorruptionError("store image truncated");
    }
    if (std::memcmp(image.data(), kStoreMagic, sizeof(kStoreMagic)) != 0) {
        throw FormatError("not a store image: bad magic");
    }
    const std::size_t body = image.size() - 8;
    std::uint64_t stored_crc = 0;
    for (int i = 0; i < 8; ++i) stored_crc |= std::uint64_t{image[body + i]} << (8 * i);
    if (crc64(image.data(), body) != stored_crc) {
        throw CorruptionError("store image checksum mismatch");
    }

    Reader r(image.data() + sizeof(kStoreMagic), body - sizeof(kStoreMagic));

    const std::uint32_t version = r.u32();
    if (version != kStoreFormatVersion) {
        throw FormatError("unsupported store format version " + std::to_string(version));
    }

    StoreConfig cfg;
    cfg.sigma = r.u32();
    const std::uint32_t content_width = r.u32();
    cfg.signature.dimensions = r.u32();
    cfg.signature.signature_bits = r.u32();
    cfg.signature.base_nonzeros = r.u32();
    cfg.signature.window_radius = r.u32();
    const std::uint32_t mode = r.u32();
    if (mode > 1) throw FormatError("unknown signature mode " + std::to_string(mode));
    cfg.signature.mode = static_cast<SignatureMode>(mode);
    cfg.signature.seed = r.u64();
    const std::uint64_t n = r.u64();
    const std::uint64_t entry_count = r.u64();
    const std::uint64_t vocab_size = r.u64();

    if (content_width != Vocabulary::symbol_width(cfg.sigma)) {
        throw FormatError("content width disagrees with sigma");
    }
    if (vocab_size > cfg.sigma) {
        throw FormatError("vocabulary larger than sigma");
    }

    Vocabulary vocab(cfg.sigma);
    for (std::uint64_t i = 0; i < vocab_size; ++i) {
        vocab.get_or_add(r.str());
    }
    if (vocab.size() != vocab_size) {
        throw FormatError("duplicate tokens in the vocabulary section");
    }

    DynamicWaveletMatrix content(content_width);
    read_levels(r, content, content_width, n);
    SignatureWaveletMatrix signatures(cfg.signature.signature_bits);
    read_levels(r, signatures, cfg.signature.signature_bits, n);

    std::vector<EntryMetadata> entries;
    entries.reserve(entry_count);
    for (std::uint64_t i = 0; i < entry_count; ++i) {
        EntryMetadata e;
        e.entry_id = r.u64();
        e.alpha = r.u64();
        e.beta = r.u64();
        e.timestamp_us = r.i64();
        e.role = r.str();
        e.session_id = r.str();
        if (e.entry_id != i) throw FormatError("entry ids are not sequential");
        entries.push_back(std::move(e));
    }

    SignatureDictionary dict(cfg.signature.signature_bits);
    const std::uint64_t distinct = r.u64();
    for (std::uint64_t i = 0; i < distinct; ++i) {
        auto words = r.bit_payload(cfg.signature.signature_bits);
        Signature sig(cfg.signature.signature_bits);
        for (std::uint32_t k = 0; k < cfg.signature.signature_bits; ++k) {
            if ((words[k / 64] >> (k % 64)) & 1u) sig.set_bit(k, true);
        }
        dict.add(sig, r.u64());
    }
    if (dict.distinct() != distinct) {
        throw FormatError("duplicate signatures in the dictionary section");
    }
    if (r.remaining() != 0) {
        throw FormatError("trailing bytes after the dictionary section");
    }

    return MemoryStore::rebuild(cfg, std::move(vocab), std::move(content), std::move(signatures),
                                std::move(entries), std::move(dict));
}

MemoryStore load_store(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw std::runtime_error("load_store: cannot open " + source.string());
    }
    std::vector<std::uint8_t> image((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return parse_store(image);
}

}  // namespace hippo
