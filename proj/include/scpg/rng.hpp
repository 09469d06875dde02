// rng.hpp -- seedable splitmix64 generator with named substreams.
//
// The engine never touches std:: distributions: their sequences are not
// specified across standard library implementations, and run outputs must
// be byte-reproducible from (config, schedule, seed) alone.

#ifndef SCPG_RNG_HPP
#define SCPG_RNG_HPP

#include <cstdint>
#include <string_view>

namespace scpg {

// splitmix64 (Steele, Lea, Flood 2014). 64-bit state, full period,
// trivially seedable, identical stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53 bits of mantissa.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Derives an independent generator from (seed, label). Used to keep
    // connectivity draws separate from Poisson draws, so the realized
    // wiring for a given seed does not depend on how long the stimulus
    // ran or in which order sources were stepped.
    static Rng substream(std::uint64_t seed, std::string_view label)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        Rng mix(seed ^ h);
        mix.next_u64();
        return Rng(mix.next_u64());
    }

private:
    std::uint64_t state_;
};

} // namespace scpg

#endif
