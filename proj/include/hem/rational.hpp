#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace hem {

using Integer = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p", "p/q" or a finite decimal such as "-1.25".
Rational parse_rational(std::string_view text);

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(const Complex& z) { return z == Complex(0.0, 0.0); }

inline Complex to_complex(const Rational& q) { return {q.get_d(), 0.0}; }
inline Complex to_complex(const Complex& z) { return z; }

} // namespace hem
