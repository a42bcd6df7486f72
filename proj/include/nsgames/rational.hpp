#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace nsgames {

using Integer = boost::multiprecision::mpz_int;

// Exact rational arithmetic; values are kept in lowest terms with a positive
// denominator by the backend.
using Rational = boost::multiprecision::mpq_rational;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rational(num) / den;
}

// Accepts "num" or "num/den" with optional sign on either part.
inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (text.empty() || slash == 0 || slash == text.size() - 1)
        throw std::invalid_argument("malformed rational: " + text);
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        const Integer num(text.substr(0, slash));
        const Integer den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num) / Rational(den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational: " + text);
    }
}

// Formats as "num/den", or just "num" for integers.
inline std::string to_string(const Rational& r) {
    const Integer num = boost::multiprecision::numerator(r);
    const Integer den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rational int_pow(const Rational& base, int exp) {
    if (exp < 0) throw std::invalid_argument("negative exponent");
    Rational acc(1), b = base;
    while (exp > 0) {
        if (exp & 1) acc *= b;
        b *= b;
        exp >>= 1;
    }
    return acc;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace nsgames
