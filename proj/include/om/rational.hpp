#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace om {

namespace detail {
inline int64_t checked(__int128 v, const char* op) {
    if (v > INT64_MAX || v < INT64_MIN) throw Error(std::string("rational overflow in ") + op);
    return static_cast<int64_t>(v);
}
} // namespace detail

// Exact rational with 64-bit numerator and denominator, always normalized to
// positive denominator and lowest terms. Intermediate products run in 128-bit
// and overflow throws rather than wrapping.
struct Rat {
    int64_t num = 0;
    int64_t den = 1;

    Rat() = default;
    Rat(int64_t n) : num(n) {}
    Rat(int64_t n, int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw Error("rational with zero denominator");
        if (den < 0) {
            num = detail::checked(-static_cast<__int128>(num), "negate");
            den = detail::checked(-static_cast<__int128>(den), "negate");
        }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    int sign() const { return num > 0 ? 1 : num < 0 ? -1 : 0; }
    bool is_zero() const { return num == 0; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return reduced(n, d, "+");
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        __int128 n = static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return reduced(n, d, "-");
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return reduced(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den, "*");
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num == 0) throw Error("rational division by zero");
        return reduced(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num, "/");
    }
    Rat operator-() const { return Rat(-num, den); }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return (a - b).sign() < 0; }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    static Rat parse(const std::string& tok) {
        try {
            auto slash = tok.find('/');
            if (slash == std::string::npos) return Rat(parse_int(tok));
            return Rat(parse_int(tok.substr(0, slash)), parse_int(tok.substr(slash + 1)));
        } catch (const Error&) {
            throw;
        } catch (...) {
            throw ParseError("bad rational '" + tok + "'");
        }
    }

private:
    static int64_t parse_int(const std::string& s) {
        size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw ParseError("bad integer '" + s + "'");
        return v;
    }

    static Rat reduced(__int128 n, __int128 d, const char* op) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 an = n < 0 ? -n : n;
        __int128 g = gcd128(an, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        Rat r;
        r.num = detail::checked(n, op);
        r.den = detail::checked(d, op);
        if (r.den == 0) throw Error("rational with zero denominator");
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
};

} // namespace om
