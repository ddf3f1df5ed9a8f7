#include "pir2/bigint.hpp"

#include <algorithm>
#include <bit>

#include "pir2/errors.hpp"

namespace pir2 {

namespace {
constexpr std::uint64_t kBase = 1ULL << 32;
}

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v > 0 ? 1 : -1;
    unsigned long long m =
        v > 0 ? static_cast<unsigned long long>(v)
              : ~static_cast<unsigned long long>(v) + 1ULL;  // safe for LLONG_MIN
    while (m) {
        mag_.push_back(static_cast<std::uint32_t>(m & 0xffffffffULL));
        m >>= 32;
    }
}

BigInt::BigInt(unsigned long long v) {
    if (v == 0) return;
    sign_ = 1;
    while (v) {
        mag_.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
        v >>= 32;
    }
}

void BigInt::trim(std::vector<std::uint32_t>& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
}

void BigInt::normalize() {
    trim(mag_);
    if (mag_.empty()) sign_ = 0;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

int BigInt::cmp_mag(const std::vector<std::uint32_t>& a,
                    const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<std::uint32_t> BigInt::add_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<std::uint32_t> out;
    out.reserve(n + 1);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = carry;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s += b[i];
        out.push_back(static_cast<std::uint32_t>(s & 0xffffffffULL));
        carry = s >> 32;
    }
    if (carry) out.push_back(static_cast<std::uint32_t>(carry));
    return out;
}

std::vector<std::uint32_t> BigInt::sub_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    out.reserve(a.size());
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(a[i]) - borrow -
                         (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
        if (d < 0) {
            d += static_cast<std::int64_t>(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        out.push_back(static_cast<std::uint32_t>(d));
    }
    trim(out);
    return out;
}

std::vector<std::uint32_t> BigInt::mul_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint32_t> out(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        std::uint64_t carry = 0;
        const std::uint64_t av = a[i];
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint64_t t = av * b[j] + out[i + j] + carry;
            out[i + j] = static_cast<std::uint32_t>(t & 0xffffffffULL);
            carry = t >> 32;
        }
        std::size_t pos = i + b.size();
        while (carry) {
            std::uint64_t t = out[pos] + carry;
            out[pos] = static_cast<std::uint32_t>(t & 0xffffffffULL);
            carry = t >> 32;
            ++pos;
        }
    }
    trim(out);
    return out;
}

// Knuth algorithm D on 32-bit limbs, with a single-limb fast path.
void BigInt::divmod_mag(const std::vector<std::uint32_t>& u,
                        const std::vector<std::uint32_t>& v,
                        std::vector<std::uint32_t>& q,
                        std::vector<std::uint32_t>& r) {
    q.clear();
    r.clear();
    if (v.empty()) throw Error("BigInt: division by zero");
    if (cmp_mag(u, v) < 0) {
        r = u;
        return;
    }
    if (v.size() == 1) {
        const std::uint64_t d = v[0];
        q.assign(u.size(), 0);
        std::uint64_t rem = 0;
        for (std::size_t i = u.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | u[i];
            q[i] = static_cast<std::uint32_t>(cur / d);
            rem = cur % d;
        }
        trim(q);
        if (rem) r.push_back(static_cast<std::uint32_t>(rem));
        return;
    }
    const std::size_t n = v.size();
    const std::size_t m = u.size() - n;
    const int shift = std::countl_zero(v.back());
    // Normalized copies: vn = v << shift, un = u << shift (one extra limb).
    std::vector<std::uint32_t> vn(n), un(u.size() + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
        std::uint64_t hi = static_cast<std::uint64_t>(v[i]) << shift;
        if (shift && i > 0) hi |= static_cast<std::uint64_t>(v[i - 1]) >> (32 - shift);
        vn[i] = static_cast<std::uint32_t>(hi & 0xffffffffULL);
    }
    for (std::size_t i = u.size(); i-- > 0;) {
        std::uint64_t hi = static_cast<std::uint64_t>(u[i]) << shift;
        if (shift && i > 0) hi |= static_cast<std::uint64_t>(u[i - 1]) >> (32 - shift);
        un[i] = static_cast<std::uint32_t>(hi & 0xffffffffULL);
    }
    if (shift) un[u.size()] = static_cast<std::uint32_t>(u.back() >> (32 - shift));

    q.assign(m + 1, 0);
    for (std::size_t j = m + 1; j-- > 0;) {
        std::uint64_t num =
            (static_cast<std::uint64_t>(un[j + n]) << 32) | un[j + n - 1];
        std::uint64_t qhat = num / vn[n - 1];
        std::uint64_t rhat = num % vn[n - 1];
        while (qhat >= kBase ||
               qhat * vn[n - 2] > ((rhat << 32) | un[j + n - 2])) {
            --qhat;
            rhat += vn[n - 1];
            if (rhat >= kBase) break;
        }
        // Multiply-subtract qhat * vn from un[j .. j+n].
        std::int64_t borrow = 0;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t p = qhat * vn[i] + carry;
            carry = p >> 32;
            std::int64_t t = static_cast<std::int64_t>(un[i + j]) - borrow -
                             static_cast<std::int64_t>(p & 0xffffffffULL);
            if (t < 0) {
                t += static_cast<std::int64_t>(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            un[i + j] = static_cast<std::uint32_t>(t);
        }
        std::int64_t t = static_cast<std::int64_t>(un[j + n]) - borrow -
                         static_cast<std::int64_t>(carry);
        if (t < 0) {
            // qhat was one too large; add v back.
            t += static_cast<std::int64_t>(kBase);
            --qhat;
            std::uint64_t c2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t s = static_cast<std::uint64_t>(un[i + j]) + vn[i] + c2;
                un[i + j] = static_cast<std::uint32_t>(s & 0xffffffffULL);
                c2 = s >> 32;
            }
            t += static_cast<std::int64_t>(c2);
            t &= 0xffffffffLL;
        }
        un[j + n] = static_cast<std::uint32_t>(t);
        q[j] = static_cast<std::uint32_t>(qhat);
    }
    trim(q);
    // Denormalize remainder: r = un[0..n) >> shift.
    r.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t lo = static_cast<std::uint64_t>(un[i]) >> shift;
        if (shift && i + 1 < un.size())
            lo |= (static_cast<std::uint64_t>(un[i + 1]) << (32 - shift)) &
                  0xffffffffULL;
        r[i] = static_cast<std::uint32_t>(lo);
    }
    trim(r);
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt out;
    if (a.sign_ == b.sign_) {
        out.sign_ = a.sign_;
        out.mag_ = BigInt::add_mag(a.mag_, b.mag_);
    } else {
        int c = BigInt::cmp_mag(a.mag_, b.mag_);
        if (c == 0) return BigInt();
        if (c > 0) {
            out.sign_ = a.sign_;
            out.mag_ = BigInt::sub_mag(a.mag_, b.mag_);
        } else {
            out.sign_ = b.sign_;
            out.mag_ = BigInt::sub_mag(b.mag_, a.mag_);
        }
    }
    out.normalize();
    return out;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt out;
    if (a.sign_ == 0 || b.sign_ == 0) return out;
    out.sign_ = a.sign_ * b.sign_;
    out.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
    out.normalize();
    return out;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) throw Error("BigInt: division by zero");
    std::vector<std::uint32_t> qm, rm;
    divmod_mag(a.mag_, b.mag_, qm, rm);
    q = BigInt();
    r = BigInt();
    q.mag_ = std::move(qm);
    r.mag_ = std::move(rm);
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
    q.normalize();
    r.normalize();
}

BigInt BigInt::operator/(const BigInt& b) const {
    BigInt q, r;
    divmod(*this, b, q, r);
    return q;
}

BigInt BigInt::operator%(const BigInt& b) const {
    BigInt q, r;
    divmod(*this, b, q, r);
    return r;
}

int BigInt::compare(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    if (a.sign_ == 0) return 0;
    return a.sign_ * cmp_mag(a.mag_, b.mag_);
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a = a.abs();
    b = b.abs();
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

BigInt BigInt::pow(const BigInt& base, unsigned long long exp) {
    BigInt out = 1, acc = base;
    while (exp) {
        if (exp & 1) out *= acc;
        exp >>= 1;
        if (exp) acc *= acc;
    }
    return out;
}

std::string BigInt::to_string() const {
    if (sign_ == 0) return "0";
    std::vector<std::uint32_t> m = mag_;
    std::string digits;
    const std::vector<std::uint32_t> ten9 = {1000000000u};
    while (!m.empty()) {
        std::vector<std::uint32_t> q, r;
        divmod_mag(m, ten9, q, r);
        std::uint32_t chunk = r.empty() ? 0 : r[0];
        m = std::move(q);
        if (m.empty()) {
            digits.insert(0, std::to_string(chunk));
        } else {
            std::string s = std::to_string(chunk);
            digits.insert(0, std::string(9 - s.size(), '0') + s);
        }
    }
    return (sign_ < 0 ? "-" : "") + digits;
}

long long BigInt::to_ll() const {
    if (sign_ == 0) return 0;
    if (mag_.size() > 2) throw Error("BigInt: value out of long long range");
    unsigned long long v = mag_[0];
    if (mag_.size() == 2) v |= static_cast<unsigned long long>(mag_[1]) << 32;
    if (sign_ > 0) {
        if (v > 0x7fffffffffffffffULL)
            throw Error("BigInt: value out of long long range");
        return static_cast<long long>(v);
    }
    if (v > 0x8000000000000000ULL)
        throw Error("BigInt: value out of long long range");
    return -static_cast<long long>(v - 1) - 1;
}

}  // namespace pir2
