#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hippo/errors.hpp>
#include <hippo/memory_store.hpp>
#include <hippo/persist.hpp>
#include <hippo/retrieval.hpp>
#include <hippo/keyword_extractor.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using hippo::MemoryStore;
using hippo::StoreConfig;

namespace {

StoreConfig test_config() {
    StoreConfig cfg;
    cfg.sigma = 2048;
    cfg.signature.dimensions = 256;
    cfg.signature.signature_bits = 24;
    return cfg;
}

MemoryStore populated_store(int entries = 80) {
    MemoryStore store(test_config());
    std::mt19937_64 rng(0xdeedu);
    for (int k = 0; k < entries; ++k) {
        std::string text;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) text += "word" + std::to_string(rng() % 90) + " ";
        store.ingest_entry(k % 2 ? "user" : "agent", 1000 + k, "session-" + std::to_string(k % 3),
                           text);
    }
    return store;
}

std::filesystem::path temp_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

std::vector<std::uint8_t> patch_and_resum(std::vector<std::uint8_t> image, std::size_t offset,
                                          std::uint8_t value) {
    image[offset] = value;
    const std::size_t body = image.size() - 8;
    const std::uint64_t crc = hippo::crc64(image.data(), body);
    for (int i = 0; i < 8; ++i) image[body + i] = static_cast<std::uint8_t>(crc >> (8 * i));
    return image;
}

}  // namespace

TEST_CASE("empty store round-trips") {
    MemoryStore store(test_config());
    const auto image = hippo::serialize_store(store);
    const auto loaded = hippo::parse_store(image);
    CHECK(loaded.token_count() == 0);
    CHECK(loaded.entry_count() == 0);
    CHECK(loaded.vocabulary().size() == 0);
    CHECK(loaded.config().sigma == store.config().sigma);
    CHECK(loaded.config().signature.seed == store.config().signature.seed);
}

TEST_CASE("images are deterministic") {
    const auto store = populated_store();
    CHECK(hippo::serialize_store(store) == hippo::serialize_store(store));
}

TEST_CASE("save then load preserves every probed answer") {
    const auto store = populated_store();
    const auto path = temp_path("hippo_roundtrip.store");
    const auto bytes = hippo::save_store(store, path);
    CHECK(bytes == std::filesystem::file_size(path));
    const auto loaded = hippo::load_store(path);

    REQUIRE(loaded.token_count() == store.token_count());
    REQUIRE(loaded.entry_count() == store.entry_count());

    std::mt19937_64 rng(5);
    const auto n = store.token_count();
    for (int probe = 0; probe < 100; ++probe) {
        const std::uint64_t i = rng() % n;
        CHECK(loaded.content().access(i) == store.content().access(i));
        CHECK(loaded.signatures().access(i) == store.signatures().access(i));
        const auto c = store.content().access(i);
        CHECK(loaded.content().rank(c, n) == store.content().rank(c, n));
        const auto j = 1 + rng() % store.content().rank(c, n);
        CHECK(loaded.content().select(c, j) == store.content().select(c, j));
    }
    for (const auto& e : store.entries()) {
        CHECK(loaded.reconstruct_text(e.alpha, e.beta) == store.reconstruct_text(e.alpha, e.beta));
    }

    // Query results are identical through the loaded store.
    hippo::DefaultKeywordExtractor ex;
    hippo::QueryOptions opt;
    opt.radius = 2;
    opt.tau = 0.5;
    for (int q = 0; q < 20; ++q) {
        const std::string query = "word" + std::to_string(rng() % 90);
        const auto a = hippo::run_query(store, ex, query, opt);
        const auto b = hippo::run_query(loaded, ex, query, opt);
        REQUIRE(a.entries.size() == b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            CHECK(a.entries[i].metadata.entry_id == b.entries[i].metadata.entry_id);
            CHECK(a.entries[i].text == b.entries[i].text);
        }
        CHECK(a.tokens_consumed == b.tokens_consumed);
    }
    std::filesystem::remove(path);
}

TEST_CASE("saving twice produces byte-identical files") {
    const auto store = populated_store(30);
    const auto p1 = temp_path("hippo_twice_a.store");
    const auto p2 = temp_path("hippo_twice_b.store");
    hippo::save_store(store, p1);
    hippo::save_store(store, p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("single-byte corruption is always detected") {
    const auto store = populated_store(40);
    auto image = hippo::serialize_store(store);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        auto corrupted = image;
        const std::size_t offset = rng() % corrupted.size();
        corrupted[offset] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        CHECK_THROWS(hippo::parse_store(corrupted));
    }
    // Flipping a checksum byte itself must also fail.
    auto corrupted = image;
    corrupted[corrupted.size() - 3] ^= 0x40;
    CHECK_THROWS_AS(hippo::parse_store(corrupted), hippo::CorruptionError);
}

TEST_CASE("truncation is detected") {
    const auto store = populated_store(20);
    auto image = hippo::serialize_store(store);
    for (std::size_t keep : {std::size_t{0}, std::size_t{4}, image.size() / 2, image.size() - 1}) {
        std::vector<std::uint8_t> cut(image.begin(), image.begin() + keep);
        CHECK_THROWS(hippo::parse_store(cut));
    }
}

TEST_CASE("unknown versions and magics are named") {
    const auto store = populated_store(10);
    const auto image = hippo::serialize_store(store);

    // Version field sits right after the 8-byte magic.
    const auto bumped = patch_and_resum(image, 8, 2);
    CHECK_THROWS_WITH_AS(hippo::parse_store(bumped), doctest::Contains("version 2"),
                         hippo::FormatError);

    auto bad_magic = image;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(hippo::parse_store(bad_magic), hippo::FormatError);
}

TEST_CASE("level payload size matches the configured widths") {
    const auto store = populated_store(50);
    const auto image = hippo::serialize_store(store);
    const auto st = store.stats();
    const std::uint64_t payload_bits = st.content_level_bits + st.signature_level_bits;
    // Payload bytes plus per-level framing plus sections; the image must be
    // dominated by the payload for a store of this shape.
    CHECK(image.size() * 8 >= payload_bits);
}
