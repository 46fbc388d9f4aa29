#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace smoothstop::rng {

/// Philox4x32-10 counter-based bijection (Salmon et al., Random123).
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Standard normal quantile, Wichura's algorithm AS 241 (PPND16).
/// Relative accuracy about 1e-16 on (0, 1).
double normal_quantile(double u);

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a hash of a label, used as a seed-derivation component.
std::uint64_t hash_label(std::string_view label);

/// Per-replicate seed:
///   mix64(mix64(mix64(mix64(master) ^ replicate) ^ hash_label(label)) ^ bits(alpha))
/// where bits(alpha) is the IEEE-754 bit pattern of alpha (+0.0 for alpha == 0).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate,
                          std::string_view label, double alpha);

/// Random-access stream of uniforms and normals keyed by a 64-bit seed.
/// Draw number n uses Philox block n/2 (counter = {n/2 low, n/2 high, 0, 0})
/// and takes the low or high 64-bit half. Draws are independent of the order
/// in which they are requested.
class CounterStream {
public:
    explicit CounterStream(std::uint64_t seed);

    [[nodiscard]] std::uint64_t bits(std::uint64_t n) const;
    /// Uniform on the open interval (0, 1): (top 53 bits + 0.5) * 2^-53.
    [[nodiscard]] double uniform(std::uint64_t n) const;
    /// normal_quantile(uniform(n)).
    [[nodiscard]] double normal(std::uint64_t n) const;

    /// Fills out[i] = normal(first + i), two draws per Philox block.
    void normals(std::uint64_t first, std::size_t count, double* out) const;

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    PhiloxKey key_;
};

}  // namespace smoothstop::rng
