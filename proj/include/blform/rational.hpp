#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace blform {

/// Arbitrary-precision integer.
using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number. Always stored reduced with positive denominator;
/// the canonical zero is 0/1. Entries of all projection/witness matrices,
/// the parameter beta and cross-ratio values live in this type.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& q) { return numerator(q); }
inline BigInt den(const Rational& q) { return denominator(q); }

inline Rational make_rational(long long p, long long q = 1) {
    if (q == 0) throw std::invalid_argument("rational: zero denominator");
    return Rational(BigInt(p), BigInt(q));
}

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt p(s.substr(0, slash));
        BigInt q(s.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("rational: zero denominator");
        return Rational(p, q);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(std::string("rational: cannot parse '") + s + "'");
    }
}

/// "p" when the denominator is 1, "p/q" otherwise.
inline std::string to_string(const Rational& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

} // namespace blform
