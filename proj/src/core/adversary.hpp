#ifndef SPARROW_CORE_ADVERSARY_HPP
#define SPARROW_CORE_ADVERSARY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "codebook.hpp"
#include "scheme.hpp"

namespace sparrow {

/// Ricky's estimator output. Decoded is reported only when exactly one
/// codeword is consistent with the broadcast; two or more consistent
/// candidates are Ambiguous and count as disruption (never resolved by
/// guessing).
struct DecodeOutcome {
    enum class Kind : std::uint8_t { Decoded = 0, Ambiguous = 1, NoMatch = 2 };
    Kind kind = Kind::NoMatch;
    std::optional<BitString> word; // set iff Decoded
    std::uint64_t candidates_considered = 0;
};

/// Best available estimator per scheme: membership for plain, exact-K
/// Hamming shell for k-errors, surviving-position match for k-erasures,
/// digest recomputation with the broadcast salt for elisha.
DecodeOutcome estimate(const ObfuscatedBroadcast& y, const Codebook& book,
                       const Scheme& scheme);

/// Every codeword's broadcast image under one (salt, mask) draw, plus
/// whether any two images alias. Defined for elisha (digest then erase)
/// and k-erasures (erase).
struct BookImages {
    std::vector<BitString> images;
    bool aliased = false;
};

BookImages book_images_elisha(const Codebook& book, const Scheme& scheme,
                              const BitString& salt, const Mask& mask);
BookImages book_images_kerasures(const Codebook& book, const Mask& mask);

/// Precomputed digest -> codeword map for the unsalted, erasure-free
/// configuration; restores error-free decoding (the salted construction
/// rejects this with the table cost instead).
struct PreimageAttack {
    bool feasible = false;
    double cost_log2_per_word = 0.0; // 2^salt_bits entries per codeword
    std::unordered_map<std::string, BitString> table; // digest string -> word
    std::uint64_t digest_collisions = 0;

    std::optional<BitString> decode(const ObfuscatedBroadcast& y) const;
};

/// Requires an elisha scheme with k == 0. salt_bits > 0 yields an
/// infeasibility result; k != 0 is rejected outright (mask randomness
/// defeats a static table regardless of salting).
PreimageAttack preimage_attack(const Codebook& book, const Scheme& scheme);

/// `repeats` independent obfuscations of one codeword (k-erasures only).
std::vector<ObfuscatedBroadcast> repetition_transmit(const BitString& word,
                                                     int repeats,
                                                     const Scheme& scheme,
                                                     Rng& rng);

struct RepetitionRecovery {
    bool complete = false;
    BitString word; // meaningful only when complete
    int positions_recovered = 0;
};

/// Reconstruct every position observed unerased in at least one repeat.
RepetitionRecovery combine_repetitions(std::span<const ObfuscatedBroadcast> reps,
                                       const SchemeConfig& cfg);

/// Exact full-word recovery probability over independent weight-k masks
/// (inclusion-exclusion over always-erased position sets).
double repetition_recovery_exact(int n, int k, int repeats);

/// Independent-position approximation (1 - (k/n)^repeats)^n; masks have
/// fixed weight, so this is only an estimate.
double repetition_recovery_estimate(int n, int k, int repeats);

/// Per-attempt adversary statistics over `trials` transmissions of
/// uniformly chosen codewords.
///
///   decode_success_rate  transmitted word uniquely and correctly decoded
///   ambiguous_rate       estimator saw >= 2 consistent candidates
///   no_match_rate        estimator saw none (cannot happen for own traffic)
///   aliasing_rate        >= 2 codebook words shared one broadcast symbol
///                        (the disruption event; for elisha and k-erasures
///                        this is the whole-book check, for k-errors it
///                        coincides with ambiguous_rate, for plain it is 0)
struct DisruptionReport {
    std::uint64_t trials = 0;
    double decode_success_rate = 0.0;
    double ambiguous_rate = 0.0;
    double no_match_rate = 0.0;
    double aliasing_rate = 0.0;
};

DisruptionReport measure_disruption(const Codebook& book, const Scheme& scheme,
                                    std::uint64_t trials, Rng& rng);

} // namespace sparrow

#endif
