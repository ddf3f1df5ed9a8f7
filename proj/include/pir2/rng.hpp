#pragma once

#include <cstdint>

namespace pir2 {

// SplitMix64: the single PRNG used for all scheme randomness. Every random
// object in a retrieval is derived from one explicit 64-bit seed so that
// transcripts are reproducible.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform value in [0, bound) by rejection; bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~0ULL) / bound);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

    // Derive an independent stream; used to split message randomness from
    // query randomness under one master seed.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 g(seed ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
        return g.next();
    }

  private:
    std::uint64_t state_;
};

}  // namespace pir2
