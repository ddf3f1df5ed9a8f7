#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pir2/matrix.hpp"

namespace pir2 {

// A fixed (n, k) MDS code over F_q with a systematic generator [I_k | V]:
// the codeword is the evaluation of the degree-(k-1) polynomial interpolating
// the message values at points 0..k-1, taken at points 0..n-1. The generator
// is a pure function of (n, k, q), so every retrieval agrees on the code.
struct MdsCode {
    std::size_t n;
    std::size_t k;
    std::uint64_t q;
    Matrix gen;  // k x n

    std::vector<std::uint64_t> encode(std::span<const std::uint64_t> message,
                                      const Field& f) const;

    // Reconstructs the unique codeword agreeing with the known coordinates.
    // Needs at least k distinct positions; extra positions are verified and a
    // mismatch raises CorruptionError.
    std::vector<std::uint64_t> complete(
        const std::vector<std::pair<std::size_t, std::uint64_t>>& known,
        const Field& f) const;
};

// Process-wide memoized lookup. Safe for concurrent readers; each (n, k, q)
// is constructed at most once. Requires 1 <= k <= n and q > n.
const MdsCode& mds_code(std::size_t n, std::size_t k, const Field& f);

}  // namespace pir2
