#include "pir2/rational.hpp"

#include "pir2/errors.hpp"

namespace pir2 {

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw Error("rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_.signum() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = 1;
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    num_ = num_ / g;
    den_ = den_ / g;
}

Rational Rational::inverse() const {
    if (is_zero()) throw Error("inverse of zero rational");
    return Rational(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw Error("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::operator-() const { return Rational(-num_, den_); }

int Rational::compare(const Rational& a, const Rational& b) {
    // Denominators are positive, so cross-multiplication preserves order.
    return BigInt::compare(a.num_ * b.den_, b.num_ * a.den_);
}

Rational Rational::pow(const Rational& base, unsigned long long exp) {
    return Rational(BigInt::pow(base.num_, exp), BigInt::pow(base.den_, exp));
}

std::string Rational::to_fraction_string() const {
    if (den_ == BigInt(1)) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

std::string Rational::to_decimal_string(int significant_digits) const {
    if (significant_digits < 1) significant_digits = 1;
    if (num_.is_zero()) return "0";
    const std::string sign = num_.signum() < 0 ? "-" : "";
    const BigInt n = num_.abs();
    const BigInt ipart = n / den_;

    auto half_up = [&](const BigInt& scaled_num) {
        return (scaled_num * BigInt(2) + den_) / (den_ * BigInt(2));
    };

    if (!ipart.is_zero()) {
        const int int_digits = static_cast<int>(ipart.to_string().size());
        int frac_digits = significant_digits - int_digits;
        if (frac_digits <= 0) {
            // Round within the integer part and pad with zeros.
            const BigInt scale = BigInt::pow(BigInt(10), -frac_digits);
            BigInt q = half_up(n / scale);
            std::string s = q.to_string();
            s.append(static_cast<std::size_t>(-frac_digits), '0');
            return sign + s;
        }
        BigInt scaled = half_up(n * BigInt::pow(BigInt(10), frac_digits));
        std::string s = scaled.to_string();
        const std::size_t ip_len = s.size() - static_cast<std::size_t>(frac_digits);
        std::string ip = s.substr(0, ip_len);
        std::string fp = s.substr(ip_len);
        return fp.empty() ? sign + ip : sign + ip + "." + fp;
    }

    // Pure fraction: count leading zeros after the point.
    int zeros = 0;
    BigInt r = n;
    for (;;) {
        r = r * BigInt(10);
        if (r < den_)
            ++zeros;
        else
            break;
    }
    BigInt scaled = half_up(n * BigInt::pow(BigInt(10), zeros + significant_digits));
    std::string s = scaled.to_string();
    if (static_cast<int>(s.size()) > significant_digits) {
        // Rounding carried into a new leading digit.
        zeros -= static_cast<int>(s.size()) - significant_digits;
        if (zeros < 0) return sign + "1." + std::string(significant_digits - 1, '0');
    }
    return sign + "0." + std::string(zeros, '0') + s;
}

}  // namespace pir2
