#ifndef SPARROW_CORE_SCHEME_HPP
#define SPARROW_CORE_SCHEME_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bitstring.hpp"
#include "rng.hpp"

namespace sparrow {

enum class Variant : std::uint8_t {
    Plain = 0,     // broadcast echoes the identity unchanged
    KErrors = 1,   // K random bit flips, hint carries K
    KErasures = 2, // K random bit deletions, hint carries the mask
    Elisha = 3,    // salted digest followed by K erasures, hint carries mask+salt
};

enum class DigestBackend : std::uint8_t {
    TruncatedCryptoHash = 0, // SHA-256 of (salt || x), low l_bits kept
    RandomPermutation = 1,   // keyed bijection of the identity space, l == n
    RandomOracleStub = 2,    // memoized uniform draw per (x, salt)
};

const char* variant_name(Variant v);
const char* backend_name(DigestBackend b);

/// Parameters of one obfuscation scheme instance.
///
/// Invariants enforced by validate():
///   Plain        k == 0
///   KErrors      0 <= k <= n_bits
///   KErasures    0 <= k <= n_bits
///   Elisha       0 <= k <= l_bits, l_bits >= n_bits; salt_bits == 0 models
///                the unsalted case (no salting nonce drawn).
struct SchemeConfig {
    Variant variant = Variant::Plain;
    int n_bits = 40;
    int l_bits = 0;
    int k = 0;
    int salt_bits = 0;
    DigestBackend backend = DigestBackend::TruncatedCryptoHash;

    void validate() const;

    /// Broadcast payload width: N, N, N-K, L-K per variant.
    int payload_width() const;

    /// Width of the erasure/error mask: N for K-schemes, L for Elisha.
    int mask_width() const;

    static SchemeConfig plain(int n_bits);
    static SchemeConfig kerrors(int n_bits, int k);
    static SchemeConfig kerasures(int n_bits, int k);
    static SchemeConfig elisha(int n_bits, int l_bits, int k, int salt_bits,
                               DigestBackend backend);
};

/// Variant-specific helper data carried in Msg4 alongside the payload.
struct Hint {
    int k = 0;                     // KErrors
    std::optional<Mask> mask;      // KErasures, Elisha
    std::optional<BitString> salt; // Elisha (absent when salt_bits == 0)
};

/// The Msg4 pair Y = [B(X), hint].
struct ObfuscatedBroadcast {
    Variant tag = Variant::Plain;
    BitString payload;
    Hint hint;
};

enum class Decision : std::uint8_t { Proceed = 1, BackOff = 0 };

/// One scheme instance: the broadcast obfuscation function B(X) and the
/// UE decision function D(Y, X_i). Configuration is immutable after
/// construction; obfuscate/decide are pure given the caller's rng. The
/// only mutable state is the RandomOracleStub memo table, which is
/// mutex-guarded.
class Scheme {
public:
    explicit Scheme(SchemeConfig cfg, std::uint64_t oracle_seed = 0);

    const SchemeConfig& config() const { return cfg_; }

    /// L-bit digest of (x, salt). Deterministic per (x, salt) pair.
    /// salt width must equal cfg.salt_bits (width 0 when unsalted).
    BitString digest(const BitString& x, const BitString& salt) const;

    ObfuscatedBroadcast obfuscate(const BitString& x, Rng& rng) const;

    Decision decide(const ObfuscatedBroadcast& y, const BitString& x_i) const;

private:
    BitString digest_crypto(const BitString& x, const BitString& salt) const;
    BitString digest_permutation(const BitString& x, const BitString& salt) const;
    BitString digest_oracle(const BitString& x, const BitString& salt) const;

    SchemeConfig cfg_;
    std::uint64_t oracle_seed_;
    mutable std::mutex oracle_mutex_;
    mutable std::unordered_map<std::string, BitString> oracle_memo_;
    mutable Rng oracle_rng_;
};

/// Msg4 wire format for simulation traces:
///   1 byte scheme tag,
///   2-byte big-endian payload bit length,
///   payload bits padded to a byte boundary,
///   hint fields in fixed order: K as 1 byte (KErrors); mask as a
///   width-padded bitmap (KErasures, Elisha); salt padded to whole bytes
///   (Elisha, when salted).
std::vector<std::uint8_t> encode_msg4(const ObfuscatedBroadcast& y,
                                      const SchemeConfig& cfg);
ObfuscatedBroadcast decode_msg4(std::span<const std::uint8_t> bytes,
                                const SchemeConfig& cfg);

} // namespace sparrow

#endif
