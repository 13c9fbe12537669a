#ifndef SPARROW_CORE_CODEBOOK_HPP
#define SPARROW_CORE_CODEBOOK_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bitstring.hpp"
#include "rng.hpp"

namespace sparrow {

enum class BookStructure : std::uint8_t {
    Random = 0,      // uniform distinct sample
    MinDistance = 1, // pairwise Hamming distance >= d (greedy construction)
    Tagged = 2,      // random payload + checksum tag in the low tag_bits
};

const char* structure_name(BookStructure s);

/// The adversary pair's message set M: 2^m distinct n-bit codewords.
///
/// Books with m == n can be kept implicit (the full identity space, used by
/// the plain-scheme baseline where every 40-bit chunk is its own codeword);
/// such books have no materialized word list and support only index/value
/// round-trips and the plain estimator.
class Codebook {
public:
    /// materialized book; requires m_bits <= 22 (or m == n <= 22).
    static Codebook build(int n_bits, int m_bits, BookStructure structure,
                          int param, Rng& rng);

    /// Implicit book of all 2^n codewords, n <= 64.
    static Codebook full_space(int n_bits);

    static Codebook load(const std::string& path);
    void save(const std::string& path) const;
    static Codebook read(std::istream& in);
    void write(std::ostream& out) const;

    int n_bits() const { return n_bits_; }
    int m_bits() const { return m_bits_; }
    BookStructure structure() const { return structure_; }
    int param() const { return param_; }
    bool implicit_full() const { return implicit_full_; }

    std::uint64_t size() const { return 1ULL << m_bits_; }
    BitString word(std::uint64_t index) const;
    std::optional<std::uint64_t> index_of(const BitString& w) const;
    bool contains(const BitString& w) const;

    const std::vector<BitString>& words() const;

    /// Tagged books: does the low tag field match the payload checksum?
    bool tag_valid(const BitString& w) const;

    /// Checksum of the payload bits: sum of its 4-bit groups mod 2^tag_bits.
    static std::uint64_t payload_checksum(const BitString& payload, int tag_bits);

    /// Budget of candidate draws for the greedy min-distance construction.
    static constexpr std::uint64_t kMinDistanceBudget = 1000000;

private:
    Codebook() = default;
    void rebuild_index();

    int n_bits_ = 0;
    int m_bits_ = 0;
    BookStructure structure_ = BookStructure::Random;
    int param_ = 0; // d for MinDistance, tag_bits for Tagged
    bool implicit_full_ = false;
    std::vector<BitString> words_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> index_; // hash -> word idx
};

} // namespace sparrow

#endif
