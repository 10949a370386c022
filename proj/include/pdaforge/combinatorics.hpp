#pragma once
// Exact big-integer/rational combinatorics plus log-gamma real-valued
// binomials, with deterministic decimal rendering used by every table and
// report writer in the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdaforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// C(n, k) exactly; out-of-range k yields 0 rather than an error.
inline BigInt binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (n < 0) throw std::invalid_argument("binomial: negative n");
    k = std::min(k, n - k);
    BigInt acc = 1;
    for (long long i = 1; i <= k; ++i) {
        acc *= (n - k + i);
        acc /= i; // exact at every step: acc is C(n-k+i, i)
    }
    return acc;
}

// C(n, k) for real arguments via log-gamma; the continuous interpolation
// used when a baseline parameter is not an integer.
inline double binomial_real(double n, double k) {
    if (!(n >= 0.0) || !(k >= 0.0) || k > n) return std::nan("");
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// log10 C(n, k) for real arguments; finite even when C(n,k) overflows double.
inline double log10_binomial_real(double n, double k) {
    if (!(n >= 0.0) || !(k >= 0.0) || k > n) return std::nan("");
    return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) /
           std::log(10.0);
}

inline BigInt pow_int(unsigned base, unsigned exp) {
    return boost::multiprecision::pow(BigInt(base), exp);
}

// Rank of a strictly increasing subset in colexicographic order:
// rank{t_1 < ... < t_k} = sum_i C(t_i, i).
inline std::uint64_t colex_rank(const std::vector<std::size_t>& subset) {
    BigInt acc = 0;
    std::size_t prev = 0;
    bool first = true;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (!first && subset[i] <= prev)
            throw std::invalid_argument("colex_rank: subset must be strictly increasing");
        prev = subset[i];
        first = false;
        acc += binomial(static_cast<long long>(subset[i]), static_cast<long long>(i + 1));
    }
    return acc.convert_to<std::uint64_t>();
}

// Fixed-point rendering of an exact rational, rounding half away from zero.
// Deterministic across platforms; used for all 4-decimal table fields.
inline std::string format_decimal(const Rational& x, int places) {
    if (places < 0) throw std::invalid_argument("format_decimal: negative places");
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(places));
    BigInt scaled = num * scale;
    BigInt q = scaled / den;
    BigInt r = scaled % den;
    if (2 * r >= den) ++q;
    std::string digits = q.str();
    std::string out;
    if (places == 0) {
        out = digits;
    } else {
        if (static_cast<int>(digits.size()) <= places)
            digits.insert(0, places + 1 - digits.size(), '0');
        out = digits.substr(0, digits.size() - places) + "." +
              digits.substr(digits.size() - places);
    }
    if (neg && q != 0) out.insert(0, 1, '-');
    return out;
}

inline std::string format_real_fixed(double x, int places) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, x);
    return std::string(buf);
}

inline std::string format_real_scientific(double x, int places) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", places, x);
    return std::string(buf);
}

// log10 of an exact positive rational, accurate to ~1e-12 relative: split off
// the exponent, evaluate the mantissa in double.
inline double log10_rational(const Rational& x) {
    BigInt num = boost::multiprecision::numerator(x);
    BigInt den = boost::multiprecision::denominator(x);
    if (num <= 0) throw std::invalid_argument("log10_rational: non-positive value");
    auto log10_big = [](const BigInt& v) {
        std::string s = v.str();
        double mant = 0.0;
        int take = static_cast<int>(std::min<std::size_t>(s.size(), 17));
        for (int i = 0; i < take; ++i) mant = mant * 10 + (s[i] - '0');
        return std::log10(mant) + static_cast<double>(s.size() - take);
    };
    return log10_big(num) - log10_big(den);
}

} // namespace pdaforge
