#include "randsum/random.hpp"

#include <cmath>

namespace randsum {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
}

RandomStream::RandomStream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) noexcept {
    // Chain the three key words through splitmix so that nearby seeds and
    // indices land on unrelated states.
    std::uint64_t key = seed;
    std::uint64_t mixed = splitmix64(key);
    key = mixed ^ static_cast<std::uint64_t>(domain);
    mixed = splitmix64(key);
    key = mixed ^ index;
    mixed = splitmix64(key);
    std::uint64_t sm = mixed;
    for (auto& word : state_) word = splitmix64(sm);
}

RandomStream::result_type RandomStream::next() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() noexcept {
    return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
}

double RandomStream::standard_normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

}  // namespace randsum
