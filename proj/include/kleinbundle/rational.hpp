#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kb {

// Exact rational number over 64-bit integers.  All intermediates go through
// __int128, so products of any two in-range rationals reduce without silent
// wraparound; values that do not fit back into int64 after reduction throw.
// Invariant: den > 0 and gcd(|num|, den) == 1.
class Rational {
public:
    constexpr Rational() = default;
    Rational(long long n) : num_(n) {}
    Rational(long long n, long long d) { assign(n, d); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }

    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // Largest integer <= *this.
    long long floor() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }

    // Renders as "p/q", or "p" when the denominator is 1.
    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) {
            s += '/';
            s += std::to_string(den_);
        }
        return s;
    }

    // Parses "p", "p/q", with optional leading '-'.
    static Rational parse(std::string_view text) {
        auto bad = [&] { throw std::invalid_argument("malformed rational literal: '" + std::string(text) + "'"); };
        if (text.empty()) bad();
        long long n = 0, d = 1;
        std::size_t slash = text.find('/');
        std::string_view np = text.substr(0, slash == std::string_view::npos ? text.size() : slash);
        auto r1 = std::from_chars(np.data(), np.data() + np.size(), n);
        if (r1.ec != std::errc() || r1.ptr != np.data() + np.size()) bad();
        if (slash != std::string_view::npos) {
            std::string_view dp = text.substr(slash + 1);
            if (dp.empty()) bad();
            auto r2 = std::from_chars(dp.data(), dp.data() + dp.size(), d);
            if (r2.ec != std::errc() || r2.ptr != dp.data() + dp.size()) bad();
        }
        return Rational(n, d);
    }

    friend Rational operator+(const Rational& x, const Rational& y) {
        return make128(i128(x.num_) * y.den_ + i128(y.num_) * x.den_, i128(x.den_) * y.den_);
    }
    friend Rational operator-(const Rational& x, const Rational& y) {
        return make128(i128(x.num_) * y.den_ - i128(y.num_) * x.den_, i128(x.den_) * y.den_);
    }
    friend Rational operator*(const Rational& x, const Rational& y) {
        return make128(i128(x.num_) * y.num_, i128(x.den_) * y.den_);
    }
    friend Rational operator/(const Rational& x, const Rational& y) {
        if (y.num_ == 0) throw std::domain_error("rational division by zero");
        return make128(i128(x.num_) * y.den_, i128(x.den_) * y.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& y) { return *this = *this + y; }
    Rational& operator-=(const Rational& y) { return *this = *this - y; }
    Rational& operator*=(const Rational& y) { return *this = *this * y; }
    Rational& operator/=(const Rational& y) { return *this = *this / y; }

    friend bool operator==(const Rational& x, const Rational& y) {
        return x.num_ == y.num_ && x.den_ == y.den_;
    }
    friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
    friend bool operator<(const Rational& x, const Rational& y) {
        return i128(x.num_) * y.den_ < i128(y.num_) * x.den_;
    }
    friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
    friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
    friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

private:
    using i128 = __int128;

    long long num_ = 0;
    long long den_ = 1;

    static i128 gcd128(i128 a, i128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static long long narrow(i128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
        return static_cast<long long>(v);
    }

    static Rational make128(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n, d);
        if (g == 0) g = 1;
        Rational r;
        r.num_ = narrow(n / g);
        r.den_ = narrow(d / g);
        return r;
    }

    void assign(long long n, long long d) { *this = make128(i128(n), i128(d)); }
};

inline Rational abs(const Rational& x) { return x < Rational(0) ? -x : x; }

// Representative of x mod 1 in [0, 1).
inline Rational mod1(const Rational& x) { return x - Rational(x.floor()); }

// Representative of x mod m in [0, m); m must be positive.
inline Rational modulo(const Rational& x, const Rational& m) {
    if (!(Rational(0) < m)) throw std::domain_error("modulo by a non-positive rational");
    Rational q = x / m;
    return x - Rational(q.floor()) * m;
}

// Best rational approximation to x with denominator <= max_den, by
// continued-fraction convergents (Stern-Brocot walk).
inline Rational snap_to_rational(double x, long long max_den = 1000000) {
    if (!std::isfinite(x)) throw std::invalid_argument("cannot snap a non-finite value");
    bool neg = x < 0;
    double y = neg ? -x : x;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = y;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(frac);
        if (fl > 9.0e18) break;
        long long a = static_cast<long long>(fl);
        long long p2 = a * p1 + p0;
        long long q2 = a * q1 + q0;
        if (q2 > max_den || q2 < 0) {
            // take the best semiconvergent still within the bound
            if (q1 > 0) {
                long long k = (max_den - q0) / q1;
                long long ps = k * p1 + p0, qs = k * q1 + q0;
                if (qs >= 1 && std::fabs(y - double(ps) / double(qs)) < std::fabs(y - double(p1) / double(q1)))
                    return Rational(neg ? -ps : ps, qs);
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double rem = frac - fl;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    if (q1 == 0) return Rational(neg ? -p0 : p0, q0);
    return Rational(neg ? -p1 : p1, q1);
}

}  // namespace kb
