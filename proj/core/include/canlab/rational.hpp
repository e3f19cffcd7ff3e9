#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace canlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
    return Rational(BigInt(num), BigInt(den));
}

// Canonical "p/q" rendering, lowest terms, q > 0 (boost::rational keeps both).
inline std::string to_string(const Rational& r) {
    return r.numerator().str() + "/" + r.denominator().str();
}

inline double to_double(const Rational& r) {
    return static_cast<double>(boost::multiprecision::cpp_rational(r.numerator(), r.denominator()));
}

BigInt binomial(unsigned n, unsigned k);

// Floor of the integer square root.
BigInt isqrt_floor(const BigInt& x);

// Deterministic rational upper bound for sqrt(r), r >= 0, with denominator 2^bits.
// Used only by report-only evaluators whose bounds involve square roots.
Rational sqrt_upper(const Rational& r, unsigned bits = 48);

// Exact rational value of a double (doubles are dyadic rationals).
Rational rational_from_double(double x);

// Parse "p/q" or a plain integer "p". Throws std::invalid_argument on junk.
Rational parse_rational(const std::string& text);

}  // namespace canlab
