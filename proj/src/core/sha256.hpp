#ifndef SPARROW_CORE_SHA256_HPP
#define SPARROW_CORE_SHA256_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace sparrow {

/// FIPS 180-4 SHA-256. Self-contained so the library carries no external
/// crypto dependency; verified against the standard test vectors.
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

} // namespace sparrow

#endif
