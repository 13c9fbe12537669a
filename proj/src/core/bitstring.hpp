#ifndef SPARROW_CORE_BITSTRING_HPP
#define SPARROW_CORE_BITSTRING_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rng.hpp"

namespace sparrow {

/// Fixed-width binary datum, up to 256 bits. Position 0 is the most
/// significant bit; the canonical text rendering is the big-endian binary
/// string of exactly width() characters. Values are immutable; every
/// operation returns a new BitString and checks width compatibility.
///
/// Width 0 (the empty string) is a legal value: it is what full-width
/// erasure produces.
class BitString {
public:
    static constexpr int kMaxWidth = 256;

    /// Empty string (width 0).
    BitString() : width_(0), limbs_{} {}

    static BitString zeros(int width);
    static BitString ones(int width);

    /// Width <= 64, value < 2^width.
    static BitString from_value(int width, std::uint64_t value);

    /// Parse a big-endian binary string of '0'/'1' characters.
    static BitString from_string(std::string_view bits);

    /// First `width` bits of an MSB-first byte sequence (inverse of
    /// to_bytes for the unpadded prefix).
    static BitString from_bytes_msb(std::span<const std::uint8_t> bytes,
                                    int width);

    /// Uniform random value of the given width.
    static BitString random(int width, Rng& rng);

    int width() const { return width_; }
    bool empty() const { return width_ == 0; }

    /// Bit at position pos, where position 0 is the MSB.
    bool bit(int pos) const
    {
        check_pos(pos);
        const int idx = width_ - 1 - pos;
        return (limbs_[static_cast<std::size_t>(idx / 64)] >> (idx % 64)) & 1ULL;
    }

    /// Copy with the bit at pos set to v.
    BitString with_bit(int pos, bool v) const;

    int popcount() const;

    /// Numeric value; requires width <= 64.
    std::uint64_t low_u64() const;

    /// Big-endian binary rendering, exactly width() characters.
    std::string to_string() const;

    /// MSB-first byte packing: position 0 lands in the top bit of byte 0,
    /// zero-padded at the end to a byte boundary. Width 0 gives no bytes.
    std::vector<std::uint8_t> to_bytes() const;

    /// to_bytes into a caller buffer of at least (width+7)/8 bytes;
    /// returns the byte count.
    int write_bytes(std::uint8_t* out) const;

    /// Complement within the width.
    BitString complement() const;

    /// Last (least significant) n positions, i.e. positions width-n..width-1.
    BitString low_bits(int n) const;

    /// 64-bit stable hash key of (width, value).
    std::uint64_t hash_key() const;

    BitString operator^(const BitString& other) const;

    friend bool operator==(const BitString& a, const BitString& b) = default;
    std::strong_ordering operator<=>(const BitString& other) const;

private:
    static void check_width(int width);
    void check_pos(int pos) const;

    /// Set value bit idx (idx 0 = least significant); no range check.
    void set_value_bit(int idx)
    {
        limbs_[static_cast<std::size_t>(idx / 64)] |= 1ULL << (idx % 64);
    }

    friend BitString erase_bits(const BitString& x, const class Mask& m);

    int width_;
    std::array<std::uint64_t, 4> limbs_; // value form, limb 0 least significant
};

/// Count of differing positions between two equal-width strings.
int hamming_distance(const BitString& a, const BitString& b);

/// A BitString whose Hamming weight is tracked; used as an error or
/// erasure pattern.
class Mask {
public:
    explicit Mask(BitString bits);

    /// Uniform over all C(width, k) masks of weight exactly k.
    /// Fisher-Yates selection of k distinct positions.
    static Mask random_weight(int width, int k, Rng& rng);

    const BitString& bits() const { return bits_; }
    int width() const { return bits_.width(); }
    int weight() const { return weight_; }

    friend bool operator==(const Mask& a, const Mask& b) = default;

private:
    BitString bits_;
    int weight_;
};

/// Drop the positions of x where m has a set bit; survivors keep their
/// original order. Result width is x.width() - m.weight().
BitString erase_bits(const BitString& x, const Mask& m);

} // namespace sparrow

#endif
