#pragma once

// Exact rational complex arithmetic over __int128, used to verify the
// response formulas independently at probe points whose inputs are small
// rationals. Every operation reduces by the gcd and throws on overflow, so
// a passing comparison really is exact-math evidence.

#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace oracle {

using i128 = __int128;

inline i128 iabs(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd128(i128 a, i128 b) {
    a = iabs(a);
    b = iabs(b);
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i128 mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow (mul)");
    return r;
}

inline i128 add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow (add)");
    return r;
}

struct Q {
    i128 n = 0;
    i128 d = 1;

    Q() = default;
    Q(long long v) : n(v), d(1) {}
    Q(i128 n_, i128 d_) : n(n_), d(d_) { reduce(); }

    void reduce() {
        if (d == 0) throw std::domain_error("zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const i128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
    }

    double value() const { return double(n) / double(d); }

    friend Q operator+(const Q& a, const Q& b) {
        return Q(add(mul(a.n, b.d), mul(b.n, a.d)), mul(a.d, b.d));
    }
    friend Q operator-(const Q& a) { return Q(-a.n, a.d); }
    friend Q operator-(const Q& a, const Q& b) { return a + (-b); }
    friend Q operator*(const Q& a, const Q& b) { return Q(mul(a.n, b.n), mul(a.d, b.d)); }
    friend Q operator/(const Q& a, const Q& b) {
        if (b.n == 0) throw std::domain_error("division by zero");
        return Q(mul(a.n, b.d), mul(a.d, b.n));
    }
    friend bool operator==(const Q& a, const Q& b) { return a.n == b.n && a.d == b.d; }
};

// Decimal literal (optionally signed, with fraction and e-exponent) to an
// exact rational: "0.04" -> 1/25, "2.42e15" -> 2420000000000000.
inline Q from_decimal(const std::string& s) {
    std::size_t k = 0;
    bool neg = false;
    if (k < s.size() && (s[k] == '+' || s[k] == '-')) neg = s[k++] == '-';
    i128 digits = 0;
    int frac = 0;
    bool seen_dot = false, seen_digit = false;
    for (; k < s.size(); ++k) {
        const char c = s[k];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("bad decimal: " + s);
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits = add(mul(digits, 10), c - '0');
            if (seen_dot) ++frac;
            seen_digit = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            throw std::invalid_argument("bad decimal: " + s);
        }
    }
    long expo = 0;
    if (k < s.size()) expo = std::strtol(s.c_str() + k + 1, nullptr, 10);
    if (!seen_digit) throw std::invalid_argument("bad decimal: " + s);
    i128 num = neg ? -digits : digits;
    i128 den = 1;
    long p10 = expo - frac;
    for (; p10 > 0; --p10) num = mul(num, 10);
    for (; p10 < 0; ++p10) den = mul(den, 10);
    return Q(num, den);
}

struct QC {
    Q re, im;

    QC() = default;
    QC(Q r, Q i) : re(r), im(i) {}
    QC(long long r) : re(r), im(0) {}

    std::complex<double> value() const { return {re.value(), im.value()}; }

    friend QC operator+(const QC& a, const QC& b) { return {a.re + b.re, a.im + b.im}; }
    friend QC operator-(const QC& a, const QC& b) { return {a.re - b.re, a.im - b.im}; }
    friend QC operator*(const QC& a, const QC& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend QC operator/(const QC& a, const QC& b) {
        const Q m = b.re * b.re + b.im * b.im;
        if (m.n == 0) throw std::domain_error("division by zero");
        return {(a.re * b.re + a.im * b.im) / m, (a.im * b.re - a.re * b.im) / m};
    }
};

inline QC conj(const QC& a) { return {a.re, -a.im}; }

inline QC qc(const std::string& re, const std::string& im) {
    return {from_decimal(re), from_decimal(im)};
}

}  // namespace oracle
