#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pir2 {

// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs.
// Just enough for exact rational rate arithmetic: +, -, *, divmod, gcd,
// small powers, comparison, and decimal rendering.
class BigInt {
  public:
    BigInt() = default;
    BigInt(long long v);              // NOLINT: deliberately implicit
    BigInt(unsigned long long v);     // NOLINT
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long v) : BigInt(static_cast<long long>(v)) {}
    BigInt(unsigned int v) : BigInt(static_cast<unsigned long long>(v)) {}
    BigInt(unsigned long v) : BigInt(static_cast<unsigned long long>(v)) {}

    bool is_zero() const { return sign_ == 0; }
    int signum() const { return sign_; }
    bool is_odd() const { return sign_ != 0 && (mag_[0] & 1); }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    BigInt& operator+=(const BigInt& b) { return *this = *this + b; }
    BigInt& operator-=(const BigInt& b) { return *this = *this - b; }
    BigInt& operator*=(const BigInt& b) { return *this = *this * b; }

    // Truncated division: quotient rounds toward zero, remainder takes the
    // sign of the dividend; throws on division by zero.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    BigInt operator/(const BigInt& b) const;
    BigInt operator%(const BigInt& b) const;

    static int compare(const BigInt& a, const BigInt& b);
    friend bool operator==(const BigInt& a, const BigInt& b) {
        return compare(a, b) == 0;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) {
        return compare(a, b) != 0;
    }
    friend bool operator<(const BigInt& a, const BigInt& b) {
        return compare(a, b) < 0;
    }
    friend bool operator<=(const BigInt& a, const BigInt& b) {
        return compare(a, b) <= 0;
    }
    friend bool operator>(const BigInt& a, const BigInt& b) {
        return compare(a, b) > 0;
    }
    friend bool operator>=(const BigInt& a, const BigInt& b) {
        return compare(a, b) >= 0;
    }

    static BigInt gcd(BigInt a, BigInt b);  // non-negative
    static BigInt pow(const BigInt& base, unsigned long long exp);

    std::string to_string() const;
    // Throws Error when the value does not fit.
    long long to_ll() const;

  private:
    static int cmp_mag(const std::vector<std::uint32_t>& a,
                       const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> add_mag(
        const std::vector<std::uint32_t>& a,
        const std::vector<std::uint32_t>& b);
    // Requires |a| >= |b|.
    static std::vector<std::uint32_t> sub_mag(
        const std::vector<std::uint32_t>& a,
        const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> mul_mag(
        const std::vector<std::uint32_t>& a,
        const std::vector<std::uint32_t>& b);
    static void divmod_mag(const std::vector<std::uint32_t>& u,
                           const std::vector<std::uint32_t>& v,
                           std::vector<std::uint32_t>& q,
                           std::vector<std::uint32_t>& r);
    static void trim(std::vector<std::uint32_t>& m);
    void normalize();

    int sign_ = 0;                     // -1, 0, +1
    std::vector<std::uint32_t> mag_;   // little-endian limbs, no leading zeros
};

}  // namespace pir2
