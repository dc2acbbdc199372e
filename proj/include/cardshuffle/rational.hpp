#pragma once

// Exact arithmetic used everywhere in the analysis paths.  No solve path ever
// touches floating point; decimals exist only in the presentation layer.
//
// The default backend is GMP (via boost::multiprecision); define
// CARDSHUFFLE_USE_CPP_INT to build without linking libgmp.

#ifdef CARDSHUFFLE_USE_CPP_INT
#include <boost/multiprecision/cpp_int.hpp>
#else
#include <boost/multiprecision/gmp.hpp>
#endif

#include <cstdint>
#include <string>

#include "cardshuffle/error.hpp"

namespace cardshuffle {

#ifdef CARDSHUFFLE_USE_CPP_INT
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
#else
using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
#endif

inline BigInt num(const Rational& q) { return numerator(q); }
inline BigInt den(const Rational& q) { return denominator(q); }

// a/b as a reduced rational; b may be negative.
inline Rational ratio(const BigInt& a, const BigInt& b) {
    if (b == 0) raise(Errc::singular_matrix, "rational with zero denominator");
    Rational r(a);
    r /= Rational(b);
    return r;
}

inline Rational ratio(long a, long b) { return ratio(BigInt(a), BigInt(b)); }

// H_k = sum_{i=1..k} 1/i, with H_0 = 0.
inline Rational harmonic(int k) {
    if (k < 0) raise(Errc::out_of_range, "harmonic: negative index");
    Rational h(0);
    for (int i = 1; i <= k; ++i) h += ratio(1, i);
    return h;
}

// "p" when the denominator is 1, otherwise "p/q".
inline std::string format_rational(const Rational& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        return ratio(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        raise(Errc::invalid_character, "not a rational: '" + text + "'");
    }
}

// Fixed-point decimal rendering, rounding half away from zero.  Display only.
inline std::string rational_to_decimal(const Rational& q, int places = 6) {
    BigInt n = num(q), d = den(q);
    bool neg = n < 0;
    if (neg) n = -n;
    BigInt scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    BigInt scaled = (2 * n * scale + d) / (2 * d);  // round-half-away for n >= 0
    BigInt ip = scaled / scale, fp = scaled % scale;
    std::string frac = fp.str();
    frac.insert(frac.begin(), static_cast<size_t>(places) - frac.size(), '0');
    std::string out = ip.str();
    if (places > 0) out += "." + frac;
    if (neg && (ip != 0 || fp != 0)) out.insert(out.begin(), '-');
    return out;
}

inline double rational_to_double(const Rational& q) {
    return numerator(q).convert_to<double>() / denominator(q).convert_to<double>();
}

}  // namespace cardshuffle
