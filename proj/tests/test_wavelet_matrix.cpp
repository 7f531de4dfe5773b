#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hippo/wavelet_matrix.hpp>

#include <random>
#include <string>

#include "support/oracles.hpp"

using hippo::DynamicWaveletMatrix;

namespace {

std::string level_string(const DynamicWaveletMatrix& wm, std::uint32_t k) {
    std::string s;
    const auto& bv = wm.level(k);
    for (std::uint64_t i = 0; i < bv.size(); ++i) s += bv.get(i) ? '1' : '0';
    return s;
}

bool msb_bit(std::uint64_t s, std::size_t k, std::uint32_t width) {
    return (s >> (width - 1 - k)) & 1u;
}

void check_against_static(const DynamicWaveletMatrix& wm, const std::vector<std::uint64_t>& seq) {
    oracle::StaticWaveletLevels levels(seq, wm.width(), [&](std::uint64_t s, std::size_t k) {
        return msb_bit(s, k, wm.width());
    });
    for (std::uint32_t k = 0; k < wm.width(); ++k) {
        REQUIRE(wm.level(k).size() == seq.size());
        CHECK(wm.zero_count(k) == levels.zeros[k]);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (wm.level(k).get(i) != (levels.levels[k][i] != 0)) {
                FAIL("level ", k, " bit ", i, " differs from static build");
            }
        }
    }
}

}  // namespace

TEST_CASE("single append places bits top-down") {
    DynamicWaveletMatrix wm(3);
    wm.append(5);  // 101
    CHECK(wm.size() == 1);
    CHECK(level_string(wm, 0) == "1");
    CHECK(level_string(wm, 1) == "0");
    CHECK(level_string(wm, 2) == "1");
    CHECK(wm.access(0) == 5);
}

TEST_CASE("known five-symbol sequence") {
    DynamicWaveletMatrix wm(3);
    for (std::uint64_t s : {5, 3, 5, 7, 3}) wm.append(s);

    SUBCASE("level contents match the batch build") {
        CHECK(level_string(wm, 0) == "10110");
        CHECK(level_string(wm, 1) == "11001");
        CHECK(level_string(wm, 2) == "11111");
        CHECK(wm.zero_count(0) == 2);
        CHECK(wm.zero_count(1) == 2);
        CHECK(wm.zero_count(2) == 0);
    }
    SUBCASE("access round-trips") {
        std::vector<std::uint64_t> expect{5, 3, 5, 7, 3};
        for (std::size_t i = 0; i < expect.size(); ++i) CHECK(wm.access(i) == expect[i]);
        CHECK(wm.access(3) == 7);
    }
    SUBCASE("rank") {
        CHECK(wm.rank(5, 5) == 2);
        CHECK(wm.rank(5, 0) == 0);
        CHECK(wm.rank(3, 0) == 0);
        CHECK(wm.rank(6, 5) == 0);
        CHECK(wm.rank(3, 2) == 1);
        CHECK(wm.rank(7, 5) == 1);
    }
    SUBCASE("select") {
        CHECK(wm.select(3, 2) == 4);
        CHECK(wm.select(5, 1) == 0);
        CHECK(wm.select(5, 2) == 2);
        CHECK(wm.select(7, 1) == 3);
        CHECK_FALSE(wm.select(5, 3).has_value());
        CHECK_FALSE(wm.select(6, 1).has_value());
        CHECK_FALSE(wm.select(3, 0).has_value());
    }
    SUBCASE("range_count") {
        CHECK(wm.range_count(5, 0, 5) == 2);
        CHECK(wm.range_count(3, 1, 2) == 1);
        CHECK(wm.range_count(3, 2, 2) == 0);
        CHECK(wm.range_count(7, 0, 3) == 0);
    }
}

TEST_CASE("errors") {
    DynamicWaveletMatrix wm(3);
    wm.append(5);
    CHECK_THROWS_AS(wm.append(8), std::invalid_argument);
    CHECK_THROWS_AS(wm.access(1), std::out_of_range);
    CHECK_THROWS_AS(wm.rank(5, 2), std::out_of_range);
    CHECK_THROWS_AS(wm.range_count(5, 1, 0), std::out_of_range);
    CHECK_THROWS_AS(wm.range_count(5, 0, 2), std::out_of_range);
}

TEST_CASE("static-build equivalence at several prefix lengths") {
    std::mt19937_64 rng(0x5eedu);
    for (std::size_t n : {1u, 2u, 10u, 1000u}) {
        DynamicWaveletMatrix wm(8);
        std::vector<std::uint64_t> seq;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = rng() & 0xffu;
            wm.append(s);
            seq.push_back(s);
            // Every checked prefix must match a fresh batch build.
            if (n <= 10 || (i + 1) % 100 == 0 || i + 1 == n) {
                check_against_static(wm, seq);
            }
        }
    }
}

TEST_CASE("oracle equivalence across widths") {
    std::mt19937_64 rng(0xca7u);
    for (std::uint32_t width : {3u, 8u, 16u, 32u}) {
        DynamicWaveletMatrix wm(width);
        oracle::NaiveSequence<std::uint64_t> ref;
        const std::uint64_t mask =
            width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
        const std::size_t n = 20'000;
        for (std::size_t i = 0; i < n; ++i) {
            // Cluster symbols so rank/select see repeats even at width 32.
            std::uint64_t s = (rng() % 1000) & mask;
            wm.append(s);
            ref.push_back(s);
        }
        REQUIRE(wm.size() == n);

        for (int probe = 0; probe < 2'500; ++probe) {
            std::size_t i = rng() % n;
            CHECK(wm.access(i) == ref.access(i));
        }
        for (int probe = 0; probe < 2'500; ++probe) {
            std::uint64_t c = ref.access(rng() % n);
            std::size_t i = rng() % (n + 1);
            CHECK(wm.rank(c, i) == ref.rank(c, i));
        }
        for (int probe = 0; probe < 2'500; ++probe) {
            std::uint64_t c = ref.access(rng() % n);
            std::size_t occ = ref.rank(c, n);
            std::size_t j = 1 + rng() % (occ + 1);  // sometimes one past the end
            CHECK(wm.select(c, j) == ref.select(c, j));
        }
        for (int probe = 0; probe < 1'000; ++probe) {
            std::uint64_t c = ref.access(rng() % n);
            std::size_t lo = rng() % (n + 1);
            std::size_t hi = lo + rng() % (n + 1 - lo);
            CHECK(wm.range_count(c, lo, hi) == ref.range_count(c, lo, hi));
        }
        for (int probe = 0; probe < 200; ++probe) {
            std::uint64_t c = (1000 + rng() % 1000) & mask;
            if (ref.rank(c, n) == 0) {
                CHECK(wm.rank(c, n) == 0);
                CHECK_FALSE(wm.select(c, 1).has_value());
            }
        }
    }
}

TEST_CASE("select then access is the identity") {
    std::mt19937_64 rng(11);
    DynamicWaveletMatrix wm(8);
    for (int i = 0; i < 5'000; ++i) wm.append(rng() % 200);
    for (int probe = 0; probe < 1'000; ++probe) {
        std::uint64_t c = rng() % 200;
        std::uint64_t occ = wm.rank(c, wm.size());
        if (occ == 0) continue;
        std::uint64_t j = 1 + rng() % occ;
        auto pos = wm.select(c, j);
        REQUIRE(pos.has_value());
        CHECK(wm.access(*pos) == c);
        CHECK(wm.rank(c, *pos) == j - 1);
    }
}

TEST_CASE("level bit budget is exact") {
    DynamicWaveletMatrix wm(16);
    std::mt19937_64 rng(21);
    const std::size_t n = 50'000;
    for (std::size_t i = 0; i < n; ++i) wm.append(rng() & 0xffffu);
    std::uint64_t total_bits = 0;
    for (std::uint32_t k = 0; k < wm.width(); ++k) {
        total_bits += wm.level(k).size();
        CHECK(wm.zero_count(k) == wm.level(k).rank0(wm.level(k).size()));
    }
    CHECK(total_bits == std::uint64_t{16} * n);

    // Index overhead stays a bounded fraction of the payload.
    std::uint64_t heap_bits = 0;
    for (std::uint32_t k = 0; k < wm.width(); ++k) heap_bits += wm.level(k).heap_bytes() * 8;
    CHECK(heap_bits < total_bits + total_bits / 2);
}
