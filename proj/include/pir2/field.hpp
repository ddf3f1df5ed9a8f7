#pragma once

#include <cstdint>

#include "pir2/errors.hpp"
#include "pir2/rng.hpp"

namespace pir2 {

// Prime field F_q with q in [3, 2^61). Elements are plain uint64_t values in
// [0, q); all operations reduce modulo q. Multiplication uses a Barrett-style
// reciprocal when q fits in 32 bits, which covers every modulus the schemes
// pick by default.
class Field {
  public:
    explicit Field(std::uint64_t q) : q_(q) {
        if (q < 3 || q >= (1ULL << 61))
            throw ParamError("field modulus must be a prime in [3, 2^61)");
        if (!is_prime(q)) throw ParamError("field modulus must be prime");
        small_ = q < (1ULL << 32);
        recip_ = small_ ? (~0ULL) / q : 0;
    }

    std::uint64_t modulus() const { return q_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + q_ - b;
    }

    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (small_) return reduce_small(a * b);
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(a) * b) % q_);
    }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    // Multiplicative inverse; inverting zero signals a degenerate linear
    // system rather than returning garbage.
    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw SingularMatrixError("inverse of zero in F_q");
        return pow(a, q_ - 2);
    }

    std::uint64_t reduce(std::uint64_t x) const {
        return small_ ? reduce_small(x) : x % q_;
    }

    std::uint64_t random(SplitMix64& rng) const { return rng.below(q_); }

    static bool is_prime(std::uint64_t n);
    // Smallest prime strictly greater than n (and at least 3).
    static std::uint64_t next_prime_above(std::uint64_t n);

  private:
    // Valid for products below 2^64 (always true when q < 2^32).
    std::uint64_t reduce_small(std::uint64_t x) const {
        std::uint64_t est = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(x) * recip_) >> 64);
        std::uint64_t r = x - est * q_;
        while (r >= q_) r -= q_;
        return r;
    }

    std::uint64_t q_;
    std::uint64_t recip_;
    bool small_;
};

}  // namespace pir2
