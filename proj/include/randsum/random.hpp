#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace randsum {

// Substream domains. Keeping catalog years and fixed-year replicates in
// separate key spaces means (seed, 7) never aliases between the two.
enum class StreamDomain : std::uint64_t {
    CatalogYear = 0x59454152ULL,
    Replicate = 0x5245504CULL,
    Auxiliary = 0x41555849ULL,
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// xoshiro256** generator whose state is derived by hashing a
// (seed, domain, index) key, so that any substream can be constructed
// directly without advancing a parent stream. Output is bit-identical
// across platforms and independent of how substreams are scheduled.
//
// Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) noexcept;
    RandomStream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next(); }
    result_type next() noexcept;

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept;
    // Uniform on (0, 1).
    double uniform_open() noexcept;
    // Marsaglia polar method; the second variate of each pair is cached.
    double standard_normal() noexcept;

private:
    std::array<std::uint64_t, 4> state_{};
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace randsum
