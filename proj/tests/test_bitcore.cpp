#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "bitstring.hpp"
#include "errors.hpp"
#include "rng.hpp"

using namespace sparrow;

namespace {

BitString bs(const char* s)
{
    return BitString::from_string(s);
}

Mask mask(const char* s)
{
    return Mask{BitString::from_string(s)};
}

} // namespace

TEST_CASE("xor truth table and width checks")
{
    CHECK((bs("1010") ^ bs("0000")) == bs("1010"));
    CHECK((bs("1010") ^ bs("1010")) == bs("0000"));
    CHECK((bs("1101") ^ bs("0100")) == bs("1001"));
    CHECK_THROWS_AS(bs("1010") ^ bs("101"), Error);
}

TEST_CASE("positional erasure follows the MSB-first convention")
{
    CHECK(erase_bits(bs("1101"), mask("0000")) == bs("1101"));
    CHECK(erase_bits(bs("1101"), mask("1111")) == BitString());
    CHECK(erase_bits(bs("1101"), mask("1111")).width() == 0);
    CHECK(erase_bits(bs("1101"), mask("0100")) == bs("101"));
    // Survivors keep their original order.
    CHECK(erase_bits(bs("10110100"), mask("01100000")) == bs("110100"));
    CHECK_THROWS_AS(erase_bits(bs("1101"), mask("00000")), Error);
}

TEST_CASE("hamming distance")
{
    CHECK(hamming_distance(bs("1010"), bs("1010")) == 0);
    CHECK(hamming_distance(bs("0000"), bs("1111")) == 4);
    CHECK(hamming_distance(bs("1101"), bs("0100")) == 2);
    CHECK_THROWS_AS(hamming_distance(bs("10"), bs("100")), Error);
}

TEST_CASE("bit position 0 is the most significant bit")
{
    const BitString x = bs("10");
    CHECK(x.bit(0));
    CHECK(!x.bit(1));
    CHECK(x.low_u64() == 2);
    CHECK(BitString::from_value(4, 0b1101).to_string() == "1101");
}

TEST_CASE("text rendering round-trips")
{
    Rng rng(7);
    for (int width : {0, 1, 5, 17, 64, 65, 100, 255, 256}) {
        const BitString x = BitString::random(width, rng);
        CHECK(x.width() == width);
        const std::string text = x.to_string();
        CHECK(static_cast<int>(text.size()) == width);
        CHECK(BitString::from_string(text) == x);
    }
    CHECK_THROWS_AS(BitString::from_string("10x1"), Error);
    CHECK_THROWS_AS(BitString::from_value(4, 16), Error);
    CHECK_THROWS_AS(BitString::zeros(257), Error);
}

TEST_CASE("weight-k masks: degenerate weights are unique")
{
    Rng rng(1);
    CHECK(Mask::random_weight(8, 0, rng).bits() == bs("00000000"));
    CHECK(Mask::random_weight(8, 8, rng).bits() == bs("11111111"));
    CHECK_THROWS_AS(Mask::random_weight(8, 9, rng), Error);
    CHECK_THROWS_AS(Mask::random_weight(8, -1, rng), Error);
}

TEST_CASE("weight-k masks are uniform over the brute-force enumeration")
{
    // Enumerate the C(4,2) = 6 masks independently.
    std::set<std::uint64_t> expected;
    for (std::uint64_t v = 0; v < 16; ++v)
        if (__builtin_popcountll(v) == 2)
            expected.insert(v);
    REQUIRE(expected.size() == 6);

    const int trials = 100000;
    Rng rng(42);
    std::map<std::uint64_t, int> counts;
    for (int t = 0; t < trials; ++t) {
        const Mask m = Mask::random_weight(4, 2, rng);
        CHECK(m.weight() == 2);
        counts[m.bits().low_u64()]++;
    }
    CHECK(counts.size() == expected.size());
    // Per-bucket 3 sigma around 1/6, and a chi-square bound (df = 5).
    const double p = 1.0 / 6.0;
    const double sigma = std::sqrt(trials * p * (1 - p));
    double chi2 = 0.0;
    for (std::uint64_t v : expected) {
        REQUIRE(counts.count(v) == 1);
        const double diff = counts[v] - trials * p;
        CHECK(std::abs(diff) < 3.0 * sigma);
        chi2 += diff * diff / (trials * p);
    }
    CHECK(chi2 < 20.5); // chi-square(5) at the 99.9% level
}

TEST_CASE("mask uniformity holds exhaustively for width <= 6")
{
    for (int width = 1; width <= 6; ++width) {
        for (int k = 0; k <= width; ++k) {
            std::set<std::uint64_t> support;
            for (std::uint64_t v = 0; v < (1ULL << width); ++v)
                if (__builtin_popcountll(v) == k)
                    support.insert(v);
            Rng rng(1000 * width + k);
            const int trials = 2000 * static_cast<int>(support.size());
            std::map<std::uint64_t, int> counts;
            for (int t = 0; t < trials; ++t)
                counts[Mask::random_weight(width, k, rng).bits().low_u64()]++;
            REQUIRE(counts.size() == support.size());
            const double expected = 2000.0;
            const double sigma = std::sqrt(expected * (1.0 - 1.0 / support.size()));
            for (const auto& [v, c] : counts) {
                CHECK(support.count(v) == 1);
                if (support.size() == 1)
                    CHECK(c == trials); // the single mask is drawn every time
                else
                    CHECK(std::abs(c - expected) < 4.5 * sigma);
            }
        }
    }
}

TEST_CASE("algebraic properties on random draws")
{
    Rng rng(99);
    for (int t = 0; t < 2000; ++t) {
        const int width = 1 + static_cast<int>(rng.below(256));
        const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(width) + 1));
        const BitString x = BitString::random(width, rng);
        const BitString e = BitString::random(width, rng);
        const Mask m = Mask::random_weight(width, k, rng);

        CHECK(erase_bits(x, m).width() + m.weight() == x.width());
        CHECK(((x ^ e) ^ e) == x);
        CHECK(hamming_distance(x, x ^ e) == e.popcount());
        CHECK(m.weight() == m.bits().popcount());
        CHECK(hamming_distance(x, e) == hamming_distance(e, x));
        CHECK((hamming_distance(x, e) == 0) == (x == e));
    }
}

TEST_CASE("byte packing is MSB-first with zero padding")
{
    const BitString x = bs("101000011");
    const auto bytes = x.to_bytes();
    REQUIRE(bytes.size() == 2);
    CHECK(bytes[0] == 0xA1);
    CHECK(bytes[1] == 0x80);
    CHECK(BitString().to_bytes().empty());
}

TEST_CASE("rng streams are deterministic and forkable")
{
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u64() == b.next_u64());
    Rng f1 = a.fork(3), f2 = b.fork(3), f3 = b.fork(4);
    CHECK(f1.next_u64() == f2.next_u64());
    Rng f3b = a.fork(4);
    CHECK(f3.next_u64() == f3b.next_u64());

    Rng c(5);
    CHECK_THROWS_AS(c.below(0), std::invalid_argument);
    for (int i = 0; i < 1000; ++i) {
        CHECK(c.below(7) < 7);
        const double u = c.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(c.poisson(0.0) == 0);
}

TEST_CASE("poisson draws have the right mean")
{
    Rng rng(11);
    const double lambda = 1.5;
    const int trials = 200000;
    long long sum = 0;
    for (int t = 0; t < trials; ++t)
        sum += rng.poisson(lambda);
    const double mean = static_cast<double>(sum) / trials;
    // sigma of the sample mean = sqrt(lambda / trials)
    CHECK(std::abs(mean - lambda) < 4.0 * std::sqrt(lambda / trials));
}
