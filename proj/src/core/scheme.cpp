#include "scheme.hpp"

#include <algorithm>

#include "errors.hpp"
#include "sha256.hpp"

namespace sparrow {

namespace {

void append_bits(std::vector<std::uint8_t>& out, const BitString& bits)
{
    const auto packed = bits.to_bytes();
    out.insert(out.end(), packed.begin(), packed.end());
}

} // namespace

const char* variant_name(Variant v)
{
    switch (v) {
    case Variant::Plain: return "plain";
    case Variant::KErrors: return "kerrors";
    case Variant::KErasures: return "kerasures";
    case Variant::Elisha: return "elisha";
    }
    return "?";
}

const char* backend_name(DigestBackend b)
{
    switch (b) {
    case DigestBackend::TruncatedCryptoHash: return "crypto-hash";
    case DigestBackend::RandomPermutation: return "random-permutation";
    case DigestBackend::RandomOracleStub: return "random-oracle";
    }
    return "?";
}

void SchemeConfig::validate() const
{
    if (n_bits < 1 || n_bits > BitString::kMaxWidth)
        raise(ErrorCode::Range, "n_bits must be in [1, 256]");
    switch (variant) {
    case Variant::Plain:
        if (k != 0)
            raise(ErrorCode::InvalidArgument, "plain scheme requires k == 0");
        break;
    case Variant::KErrors:
    case Variant::KErasures:
        if (k < 0 || k > n_bits)
            raise(ErrorCode::Range, "k must be in [0, n_bits]");
        break;
    case Variant::Elisha:
        if (l_bits < n_bits || l_bits > BitString::kMaxWidth)
            raise(ErrorCode::Range, "elisha requires n_bits <= l_bits <= 256");
        if (k < 0 || k > l_bits)
            raise(ErrorCode::Range, "k must be in [0, l_bits]");
        if (salt_bits < 0 || salt_bits > BitString::kMaxWidth)
            raise(ErrorCode::Range, "salt_bits must be in [0, 256]");
        if (backend == DigestBackend::RandomPermutation) {
            if (l_bits != n_bits)
                raise(ErrorCode::InvalidArgument,
                      "random-permutation backend requires l_bits == n_bits");
            if (n_bits > 64)
                raise(ErrorCode::Unsupported,
                      "random-permutation backend supports n_bits <= 64");
        }
        break;
    }
}

int SchemeConfig::payload_width() const
{
    switch (variant) {
    case Variant::Plain:
    case Variant::KErrors: return n_bits;
    case Variant::KErasures: return n_bits - k;
    case Variant::Elisha: return l_bits - k;
    }
    return 0;
}

int SchemeConfig::mask_width() const
{
    return variant == Variant::Elisha ? l_bits : n_bits;
}

SchemeConfig SchemeConfig::plain(int n_bits)
{
    SchemeConfig cfg{Variant::Plain, n_bits, 0, 0, 0,
                     DigestBackend::TruncatedCryptoHash};
    cfg.validate();
    return cfg;
}

SchemeConfig SchemeConfig::kerrors(int n_bits, int k)
{
    SchemeConfig cfg{Variant::KErrors, n_bits, 0, k, 0,
                     DigestBackend::TruncatedCryptoHash};
    cfg.validate();
    return cfg;
}

SchemeConfig SchemeConfig::kerasures(int n_bits, int k)
{
    SchemeConfig cfg{Variant::KErasures, n_bits, 0, k, 0,
                     DigestBackend::TruncatedCryptoHash};
    cfg.validate();
    return cfg;
}

SchemeConfig SchemeConfig::elisha(int n_bits, int l_bits, int k, int salt_bits,
                                  DigestBackend backend)
{
    SchemeConfig cfg{Variant::Elisha, n_bits, l_bits, k, salt_bits, backend};
    cfg.validate();
    return cfg;
}

Scheme::Scheme(SchemeConfig cfg, std::uint64_t oracle_seed)
    : cfg_(cfg), oracle_seed_(oracle_seed), oracle_rng_(mix64(oracle_seed ^ 0x5eedULL))
{
    cfg_.validate();
}

BitString Scheme::digest_crypto(const BitString& x, const BitString& salt) const
{
    // Salt prepended: hash input is the byte packing of salt followed by x.
    std::uint8_t buf[64];
    int len = salt.write_bytes(buf);
    len += x.write_bytes(buf + len);
    const auto d = sha256({buf, static_cast<std::size_t>(len)});
    // Keep the low l_bits of the 256-bit digest value, i.e. its tail.
    const int skip = 256 - cfg_.l_bits;
    return BitString::from_bytes_msb(
        std::span<const std::uint8_t>(d).subspan(
            static_cast<std::size_t>(skip / 8)),
        cfg_.l_bits + skip % 8)
        .low_bits(cfg_.l_bits);
}

BitString Scheme::digest_permutation(const BitString& x, const BitString& salt) const
{
    // Keyed Feistel network over the n-bit value: each round XORs one half
    // with a mix of the key, the round index, and the other half. Every
    // round is invertible, so the map is a bijection of U_N for any key.
    const int n = cfg_.n_bits;
    std::vector<std::uint8_t> key_input = salt.to_bytes();
    key_input.push_back(0x50); // domain tag
    const auto kd = sha256(key_input);
    std::uint64_t key = 0;
    for (int i = 0; i < 8; ++i)
        key = (key << 8) | kd[static_cast<std::size_t>(i)];

    const std::uint64_t value = x.low_u64();
    if (n == 1)
        return BitString::from_value(1, value ^ (key & 1ULL));

    const int hi_w = n / 2;
    const int lo_w = n - hi_w;
    const std::uint64_t hi_mask = (hi_w == 64) ? ~0ULL : ((1ULL << hi_w) - 1);
    const std::uint64_t lo_mask = (lo_w == 64) ? ~0ULL : ((1ULL << lo_w) - 1);
    std::uint64_t hi = (value >> lo_w) & hi_mask;
    std::uint64_t lo = value & lo_mask;
    for (std::uint64_t round = 0; round < 8; ++round) {
        if (round % 2 == 0)
            hi ^= mix64(key ^ (round * 0x9E3779B97F4A7C15ULL) ^ lo) & hi_mask;
        else
            lo ^= mix64(key ^ (round * 0xC2B2AE3D27D4EB4FULL) ^ hi) & lo_mask;
    }
    const std::uint64_t out = (hi << lo_w) | lo;
    return n == 64 ? BitString::from_value(64, out)
                   : BitString::from_value(n, out & ((1ULL << n) - 1));
}

BitString Scheme::digest_oracle(const BitString& x, const BitString& salt) const
{
    const std::string memo_key = salt.to_string() + ":" + x.to_string();
    std::lock_guard<std::mutex> lock(oracle_mutex_);
    auto it = oracle_memo_.find(memo_key);
    if (it != oracle_memo_.end())
        return it->second;
    BitString d = BitString::random(cfg_.l_bits, oracle_rng_);
    oracle_memo_.emplace(memo_key, d);
    return d;
}

BitString Scheme::digest(const BitString& x, const BitString& salt) const
{
    if (cfg_.variant != Variant::Elisha)
        raise(ErrorCode::InvalidArgument, "digest is only defined for elisha");
    if (x.width() != cfg_.n_bits)
        raise(ErrorCode::WidthMismatch, "digest: identity width mismatch");
    if (salt.width() != cfg_.salt_bits)
        raise(ErrorCode::WidthMismatch, "digest: salt width mismatch");
    switch (cfg_.backend) {
    case DigestBackend::TruncatedCryptoHash: return digest_crypto(x, salt);
    case DigestBackend::RandomPermutation: return digest_permutation(x, salt);
    case DigestBackend::RandomOracleStub: return digest_oracle(x, salt);
    }
    raise(ErrorCode::InvalidArgument, "unknown digest backend");
}

ObfuscatedBroadcast Scheme::obfuscate(const BitString& x, Rng& rng) const
{
    if (x.width() != cfg_.n_bits)
        raise(ErrorCode::WidthMismatch, "obfuscate: identity width mismatch");
    ObfuscatedBroadcast y;
    y.tag = cfg_.variant;
    switch (cfg_.variant) {
    case Variant::Plain:
        y.payload = x;
        break;
    case Variant::KErrors: {
        const Mask e = Mask::random_weight(cfg_.n_bits, cfg_.k, rng);
        y.payload = x ^ e.bits();
        y.hint.k = cfg_.k;
        break;
    }
    case Variant::KErasures: {
        const Mask e = Mask::random_weight(cfg_.n_bits, cfg_.k, rng);
        y.payload = erase_bits(x, e);
        y.hint.mask = e;
        break;
    }
    case Variant::Elisha: {
        // Draw order is fixed: salt first, then the erasure mask.
        const BitString salt = BitString::random(cfg_.salt_bits, rng);
        const BitString d = digest(x, salt);
        const Mask e = Mask::random_weight(cfg_.l_bits, cfg_.k, rng);
        y.payload = erase_bits(d, e);
        y.hint.mask = e;
        y.hint.salt = salt;
        break;
    }
    }
    return y;
}

Decision Scheme::decide(const ObfuscatedBroadcast& y, const BitString& x_i) const
{
    if (y.tag != cfg_.variant)
        raise(ErrorCode::InvalidArgument, "decide: broadcast tag does not match scheme");
    if (x_i.width() != cfg_.n_bits)
        raise(ErrorCode::WidthMismatch, "decide: identity width mismatch");
    switch (cfg_.variant) {
    case Variant::Plain:
        return y.payload == x_i ? Decision::Proceed : Decision::BackOff;
    case Variant::KErrors:
        if (y.hint.k != cfg_.k)
            raise(ErrorCode::InvalidArgument, "decide: hint K does not match scheme");
        return hamming_distance(y.payload, x_i) == y.hint.k ? Decision::Proceed
                                                            : Decision::BackOff;
    case Variant::KErasures: {
        if (!y.hint.mask || y.hint.mask->width() != cfg_.n_bits ||
            y.hint.mask->weight() != cfg_.k)
            raise(ErrorCode::InvalidArgument, "decide: bad erasure mask hint");
        return erase_bits(x_i, *y.hint.mask) == y.payload ? Decision::Proceed
                                                          : Decision::BackOff;
    }
    case Variant::Elisha: {
        if (!y.hint.mask || y.hint.mask->width() != cfg_.l_bits ||
            y.hint.mask->weight() != cfg_.k)
            raise(ErrorCode::InvalidArgument, "decide: bad erasure mask hint");
        if (!y.hint.salt || y.hint.salt->width() != cfg_.salt_bits)
            raise(ErrorCode::InvalidArgument, "decide: bad salt hint");
        const BitString d = digest(x_i, *y.hint.salt);
        return erase_bits(d, *y.hint.mask) == y.payload ? Decision::Proceed
                                                        : Decision::BackOff;
    }
    }
    raise(ErrorCode::InvalidArgument, "unknown scheme variant");
}

std::vector<std::uint8_t> encode_msg4(const ObfuscatedBroadcast& y,
                                      const SchemeConfig& cfg)
{
    if (y.tag != cfg.variant)
        raise(ErrorCode::InvalidArgument, "encode_msg4: tag/config mismatch");
    if (y.payload.width() != cfg.payload_width())
        raise(ErrorCode::WidthMismatch, "encode_msg4: payload width mismatch");
    if (cfg.variant == Variant::KErrors && cfg.k > 255)
        raise(ErrorCode::Unsupported, "encode_msg4: K hint field is one byte");

    std::vector<std::uint8_t> out;
    out.push_back(static_cast<std::uint8_t>(y.tag));
    const int plen = y.payload.width();
    out.push_back(static_cast<std::uint8_t>(plen >> 8));
    out.push_back(static_cast<std::uint8_t>(plen & 0xFF));
    append_bits(out, y.payload);
    switch (cfg.variant) {
    case Variant::Plain:
        break;
    case Variant::KErrors:
        out.push_back(static_cast<std::uint8_t>(y.hint.k));
        break;
    case Variant::KErasures:
        append_bits(out, y.hint.mask->bits());
        break;
    case Variant::Elisha:
        append_bits(out, y.hint.mask->bits());
        append_bits(out, *y.hint.salt);
        break;
    }
    return out;
}

ObfuscatedBroadcast decode_msg4(std::span<const std::uint8_t> bytes,
                                const SchemeConfig& cfg)
{
    cfg.validate();
    if (bytes.size() < 3)
        raise(ErrorCode::InvalidArgument, "decode_msg4: truncated header");
    if (bytes[0] != static_cast<std::uint8_t>(cfg.variant))
        raise(ErrorCode::InvalidArgument, "decode_msg4: scheme tag mismatch");
    const int plen = (static_cast<int>(bytes[1]) << 8) | static_cast<int>(bytes[2]);
    if (plen != cfg.payload_width())
        raise(ErrorCode::InvalidArgument, "decode_msg4: payload length mismatch");

    std::size_t off = 3;
    const std::size_t payload_bytes = static_cast<std::size_t>((plen + 7) / 8);
    if (bytes.size() < off + payload_bytes)
        raise(ErrorCode::InvalidArgument, "decode_msg4: truncated payload");
    ObfuscatedBroadcast y;
    y.tag = cfg.variant;
    y.payload = BitString::from_bytes_msb(bytes.subspan(off), plen);
    off += payload_bytes;

    auto read_bits = [&](int width) {
        const std::size_t nbytes = static_cast<std::size_t>((width + 7) / 8);
        if (bytes.size() < off + nbytes)
            raise(ErrorCode::InvalidArgument, "decode_msg4: truncated hint");
        BitString b = BitString::from_bytes_msb(bytes.subspan(off), width);
        off += nbytes;
        return b;
    };

    switch (cfg.variant) {
    case Variant::Plain:
        break;
    case Variant::KErrors:
        if (bytes.size() < off + 1)
            raise(ErrorCode::InvalidArgument, "decode_msg4: truncated hint");
        y.hint.k = bytes[off++];
        if (y.hint.k != cfg.k)
            raise(ErrorCode::InvalidArgument, "decode_msg4: K hint mismatch");
        break;
    case Variant::KErasures: {
        Mask m{read_bits(cfg.n_bits)};
        if (m.weight() != cfg.k)
            raise(ErrorCode::InvalidArgument, "decode_msg4: mask weight mismatch");
        y.hint.mask = m;
        break;
    }
    case Variant::Elisha: {
        Mask m{read_bits(cfg.l_bits)};
        if (m.weight() != cfg.k)
            raise(ErrorCode::InvalidArgument, "decode_msg4: mask weight mismatch");
        y.hint.mask = m;
        y.hint.salt = read_bits(cfg.salt_bits);
        break;
    }
    }
    if (off != bytes.size())
        raise(ErrorCode::InvalidArgument, "decode_msg4: trailing bytes");
    return y;
}

} // namespace sparrow
