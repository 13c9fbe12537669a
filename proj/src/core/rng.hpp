#ifndef SPARROW_CORE_RNG_HPP
#define SPARROW_CORE_RNG_HPP

#include <cstdint>
#include <random>

namespace sparrow {

/// Deterministic seeded random stream. All randomness in the library flows
/// through an explicitly passed Rng so that identical seeds reproduce
/// identical runs on every platform. Distributions are implemented here
/// rather than with std:: distribution objects, whose output is not
/// specified by the standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform integer in [0, bound). bound must be > 0. Unbiased (rejection).
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double unit();

    bool bernoulli(double p);

    /// Poisson draw by Knuth's product method; intended for small means.
    int poisson(double mean);

    /// Independent substream derived from this stream's seed and an index.
    Rng fork(std::uint64_t stream_index) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

} // namespace sparrow

#endif
