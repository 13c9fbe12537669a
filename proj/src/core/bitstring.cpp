#include "bitstring.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "errors.hpp"

namespace sparrow {

void BitString::check_width(int width)
{
    if (width < 0 || width > kMaxWidth)
        raise(ErrorCode::Range, "BitString width must be in [0, 256], got " +
                                    std::to_string(width));
}

void BitString::check_pos(int pos) const
{
    if (pos < 0 || pos >= width_)
        raise(ErrorCode::Range, "BitString bit position out of range");
}

BitString BitString::zeros(int width)
{
    check_width(width);
    BitString s;
    s.width_ = width;
    return s;
}

BitString BitString::ones(int width)
{
    return zeros(width).complement();
}

BitString BitString::from_value(int width, std::uint64_t value)
{
    check_width(width);
    if (width > 64)
        raise(ErrorCode::Range, "BitString::from_value requires width <= 64");
    if (width < 64 && value >> width != 0)
        raise(ErrorCode::Range, "BitString::from_value: value does not fit width");
    BitString s;
    s.width_ = width;
    s.limbs_[0] = value;
    return s;
}

BitString BitString::from_string(std::string_view bits)
{
    check_width(static_cast<int>(bits.size()));
    BitString s;
    s.width_ = static_cast<int>(bits.size());
    for (int pos = 0; pos < s.width_; ++pos) {
        const char c = bits[static_cast<std::size_t>(pos)];
        if (c != '0' && c != '1')
            raise(ErrorCode::InvalidArgument,
                  "BitString::from_string: expected only '0' or '1'");
        if (c == '1') {
            const int idx = s.width_ - 1 - pos;
            s.limbs_[static_cast<std::size_t>(idx / 64)] |= 1ULL << (idx % 64);
        }
    }
    return s;
}

BitString BitString::from_bytes_msb(std::span<const std::uint8_t> bytes,
                                    int width)
{
    check_width(width);
    const int total = (width + 7) / 8;
    if (static_cast<std::size_t>(total) > bytes.size())
        raise(ErrorCode::InvalidArgument,
              "from_bytes_msb: byte sequence shorter than declared width");
    // Big-endian load of the covering bytes, then drop the tail padding.
    BitString s;
    s.width_ = width;
    for (int j = 0; j < total; ++j) {
        const int bitpos = 8 * (total - 1 - j);
        s.limbs_[static_cast<std::size_t>(bitpos / 64)] |=
            static_cast<std::uint64_t>(bytes[static_cast<std::size_t>(j)])
            << (bitpos % 64);
    }
    const int pad = total * 8 - width;
    if (pad != 0) {
        for (int i = 0; i < 3; ++i)
            s.limbs_[static_cast<std::size_t>(i)] =
                (s.limbs_[static_cast<std::size_t>(i)] >> pad) |
                (s.limbs_[static_cast<std::size_t>(i + 1)] << (64 - pad));
        s.limbs_[3] >>= pad;
    }
    return s;
}

BitString BitString::random(int width, Rng& rng)
{
    check_width(width);
    BitString s;
    s.width_ = width;
    const int limbs = (width + 63) / 64;
    for (int i = 0; i < limbs; ++i)
        s.limbs_[static_cast<std::size_t>(i)] = rng.next_u64();
    const int top_bits = width % 64;
    if (limbs > 0 && top_bits != 0)
        s.limbs_[static_cast<std::size_t>(limbs - 1)] &=
            (~0ULL) >> (64 - top_bits);
    return s;
}

BitString BitString::with_bit(int pos, bool v) const
{
    if (pos < 0 || pos >= width_)
        raise(ErrorCode::Range, "BitString::with_bit: position out of range");
    BitString s = *this;
    const int idx = width_ - 1 - pos;
    const std::uint64_t m = 1ULL << (idx % 64);
    if (v)
        s.limbs_[static_cast<std::size_t>(idx / 64)] |= m;
    else
        s.limbs_[static_cast<std::size_t>(idx / 64)] &= ~m;
    return s;
}

int BitString::popcount() const
{
    int total = 0;
    for (std::uint64_t limb : limbs_)
        total += std::popcount(limb);
    return total;
}

std::uint64_t BitString::low_u64() const
{
    if (width_ > 64)
        raise(ErrorCode::Range, "BitString::low_u64 requires width <= 64");
    return limbs_[0];
}

std::string BitString::to_string() const
{
    std::string out(static_cast<std::size_t>(width_), '0');
    for (int pos = 0; pos < width_; ++pos)
        if (bit(pos))
            out[static_cast<std::size_t>(pos)] = '1';
    return out;
}

std::vector<std::uint8_t> BitString::to_bytes() const
{
    std::vector<std::uint8_t> out(static_cast<std::size_t>((width_ + 7) / 8), 0);
    write_bytes(out.data());
    return out;
}

int BitString::write_bytes(std::uint8_t* out) const
{
    // Bytes are the big-endian rendering of the value shifted left so the
    // MSB of the string lands on a byte boundary.
    const int total = (width_ + 7) / 8;
    const int pad = total * 8 - width_;
    std::array<std::uint64_t, 4> v = limbs_;
    if (pad != 0) {
        for (int i = 3; i > 0; --i)
            v[static_cast<std::size_t>(i)] =
                (v[static_cast<std::size_t>(i)] << pad) |
                (v[static_cast<std::size_t>(i - 1)] >> (64 - pad));
        v[0] <<= pad;
    }
    for (int j = 0; j < total; ++j) {
        const int be_idx = 32 - total + j;
        const int limb = 3 - be_idx / 8;
        const int shift = 56 - 8 * (be_idx % 8);
        out[j] = static_cast<std::uint8_t>(
            v[static_cast<std::size_t>(limb)] >> shift);
    }
    return total;
}

BitString BitString::complement() const
{
    BitString s = *this;
    const int limbs = (width_ + 63) / 64;
    for (int i = 0; i < limbs; ++i)
        s.limbs_[static_cast<std::size_t>(i)] = ~s.limbs_[static_cast<std::size_t>(i)];
    const int top_bits = width_ % 64;
    if (limbs > 0 && top_bits != 0)
        s.limbs_[static_cast<std::size_t>(limbs - 1)] &=
            (~0ULL) >> (64 - top_bits);
    for (int i = limbs; i < 4; ++i)
        s.limbs_[static_cast<std::size_t>(i)] = 0;
    return s;
}

BitString BitString::low_bits(int n) const
{
    if (n < 0 || n > width_)
        raise(ErrorCode::Range, "BitString::low_bits: count out of range");
    BitString s;
    s.width_ = n;
    const int limbs = (n + 63) / 64;
    for (int i = 0; i < limbs; ++i)
        s.limbs_[static_cast<std::size_t>(i)] = limbs_[static_cast<std::size_t>(i)];
    const int top_bits = n % 64;
    if (limbs > 0 && top_bits != 0)
        s.limbs_[static_cast<std::size_t>(limbs - 1)] &=
            (~0ULL) >> (64 - top_bits);
    return s;
}

std::uint64_t BitString::hash_key() const
{
    std::uint64_t h = mix64(static_cast<std::uint64_t>(width_) ^ 0xA5A5A5A5A5A5A5A5ULL);
    for (std::uint64_t limb : limbs_)
        h = mix64(h ^ limb);
    return h;
}

BitString BitString::operator^(const BitString& other) const
{
    if (width_ != other.width_)
        raise(ErrorCode::WidthMismatch,
              "xor: width mismatch (" + std::to_string(width_) + " vs " +
                  std::to_string(other.width_) + ")");
    BitString s = *this;
    for (std::size_t i = 0; i < s.limbs_.size(); ++i)
        s.limbs_[i] ^= other.limbs_[i];
    return s;
}

std::strong_ordering BitString::operator<=>(const BitString& other) const
{
    if (width_ != other.width_)
        return width_ <=> other.width_;
    for (int i = 3; i >= 0; --i) {
        const auto a = limbs_[static_cast<std::size_t>(i)];
        const auto b = other.limbs_[static_cast<std::size_t>(i)];
        if (a != b)
            return a <=> b;
    }
    return std::strong_ordering::equal;
}

int hamming_distance(const BitString& a, const BitString& b)
{
    return (a ^ b).popcount();
}

Mask::Mask(BitString bits) : bits_(std::move(bits)), weight_(bits_.popcount()) {}

Mask Mask::random_weight(int width, int k, Rng& rng)
{
    if (width < 0 || width > BitString::kMaxWidth)
        raise(ErrorCode::Range, "Mask::random_weight: bad width");
    if (k < 0 || k > width)
        raise(ErrorCode::Range, "Mask::random_weight: k must be in [0, width]");
    std::array<int, BitString::kMaxWidth> positions{};
    std::iota(positions.begin(), positions.begin() + width, 0);
    BitString bits = BitString::zeros(width);
    for (int i = 0; i < k; ++i) {
        const auto j =
            i + static_cast<int>(rng.below(static_cast<std::uint64_t>(width - i)));
        std::swap(positions[static_cast<std::size_t>(i)],
                  positions[static_cast<std::size_t>(j)]);
        bits = bits.with_bit(positions[static_cast<std::size_t>(i)], true);
    }
    return Mask(bits);
}

BitString erase_bits(const BitString& x, const Mask& m)
{
    if (x.width() != m.width())
        raise(ErrorCode::WidthMismatch,
              "erase_bits: width mismatch (" + std::to_string(x.width()) +
                  " vs " + std::to_string(m.width()) + ")");
    const int out_width = x.width() - m.weight();
    BitString out = BitString::zeros(out_width);
    int next = 0;
    for (int pos = 0; pos < x.width(); ++pos) {
        if (m.bits().bit(pos))
            continue;
        if (x.bit(pos))
            out.set_value_bit(out_width - 1 - next);
        ++next;
    }
    return out;
}

} // namespace sparrow
