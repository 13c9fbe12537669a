#ifndef SPARROW_CORE_DEMOS_HPP
#define SPARROW_CORE_DEMOS_HPP

#include <cstdint>
#include <string>

namespace sparrow {

/// Preimage-table attack with salting off, then on. The unsalted phase
/// decodes through a precomputed digest->codeword table; the salted phase
/// reports the table cost and the per-attempt channel reliability the
/// adversary is left with. Returns a JSON report.
std::string demo_preimage_report(std::uint64_t trials, std::uint64_t seed,
                                 int unsalted_bits, int unsalted_m,
                                 int salted_bits, int salted_k,
                                 int salted_salt_bits, int salted_m);

/// Repetition countermeasure against k-erasures: measured full-word
/// recovery rate vs the exact mask-combinatorics probability and the
/// independent-position estimate.
std::string demo_repetition_report(int n, int k, int repeats,
                                   std::uint64_t trials, std::uint64_t seed);

/// Minimum-distance codebook against k-errors: decode statistics for a
/// greedy code with pairwise distance >= d.
std::string demo_mindist_report(int n, int m, int d, int k,
                                std::uint64_t trials, std::uint64_t seed);

} // namespace sparrow

#endif
