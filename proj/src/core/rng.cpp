#include "rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sparrow {

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t Rng::next_u64()
{
    return engine_();
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % bound;
}

double Rng::unit()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool Rng::bernoulli(double p)
{
    return unit() < p;
}

int Rng::poisson(double mean)
{
    if (mean < 0.0)
        throw std::invalid_argument("Rng::poisson: mean must be >= 0");
    if (mean == 0.0)
        return 0;
    const double threshold = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= unit();
    } while (p > threshold);
    return k - 1;
}

Rng Rng::fork(std::uint64_t stream_index) const
{
    return Rng(mix64(seed_ ^ mix64(stream_index + 1)));
}

} // namespace sparrow
