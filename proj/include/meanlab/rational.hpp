#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>

#include "meanlab/error.hpp"

namespace meanlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw UsageError("zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

/// The exact value of a finite double.
inline Rational exact_rational(double v) {
    if (!std::isfinite(v)) throw UsageError("non-finite value");
    int e = 0;
    double m = std::frexp(v, &e);
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    e -= 53;
    Rational r{BigInt(mant)};
    if (e >= 0) return r * Rational(BigInt(1) << e);
    return r / Rational(BigInt(1) << -e);
}

/// "p/q" with q > 0, always including the denominator.
inline std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw UsageError("zero denominator in '" + text + "'");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw UsageError("not a rational: '" + text + "'");
    }
}

inline long double to_long_double(const Rational& r) {
    return boost::multiprecision::numerator(r).convert_to<long double>() /
           boost::multiprecision::denominator(r).convert_to<long double>();
}

inline double to_double(const Rational& r) { return static_cast<double>(to_long_double(r)); }

/// Natural log of a positive big integer without overflowing long double.
inline long double log_bigint(const BigInt& n) {
    if (n <= 0) throw UsageError("log of non-positive integer");
    auto bits = boost::multiprecision::msb(n);
    if (bits < 60) return std::log(n.convert_to<long double>());
    auto shift = bits - 59;
    BigInt top = n >> shift;
    return std::log(top.convert_to<long double>()) + static_cast<long double>(shift) * std::log(2.0L);
}

inline long double log_rational(const Rational& r) {
    return log_bigint(boost::multiprecision::numerator(r)) - log_bigint(boost::multiprecision::denominator(r));
}

/// Decimal string with a fixed number of digits after the point.
inline std::string decimal(long double v, int digits = 12) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

/// Closed interval of rationals; used for every certified enclosure.
struct Interval {
    Rational lo;
    Rational hi;

    static Interval point(const Rational& v) { return {v, v}; }
    bool is_point() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
    return r;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        auto t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / gcd64(a, b), b);
}

}  // namespace meanlab
