#pragma once

#include <string>

#include "pir2/bigint.hpp"

namespace pir2 {

// Exact rational with big-integer numerator and denominator, always kept
// normalized (gcd 1, denominator positive). Rates, bounds, and gaps are held
// in this type end to end; decimals exist only at presentation time.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT: deliberately implicit
    Rational(BigInt n, BigInt d);
    Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int signum() const { return num_.signum(); }

    Rational inverse() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;

    static int compare(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) {
        return compare(a, b) == 0;
    }
    friend bool operator!=(const Rational& a, const Rational& b) {
        return compare(a, b) != 0;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return compare(a, b) < 0;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return compare(a, b) <= 0;
    }
    friend bool operator>(const Rational& a, const Rational& b) {
        return compare(a, b) > 0;
    }
    friend bool operator>=(const Rational& a, const Rational& b) {
        return compare(a, b) >= 0;
    }

    // (num/den)^exp with exp >= 0.
    static Rational pow(const Rational& base, unsigned long long exp);

    // "p/q"; integers render without the "/q" part.
    std::string to_fraction_string() const;
    // Fixed-point decimal with the given number of significant digits,
    // round-half-up on the digit after the last kept one.
    std::string to_decimal_string(int significant_digits = 12) const;

  private:
    void normalize();
    BigInt num_, den_;
};

}  // namespace pir2
