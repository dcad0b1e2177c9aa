#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace bellnl {

/// Exact rational number. GMP keeps results of arithmetic in lowest terms with
/// a positive denominator.
using Rational = mpq_class;
using Complex = std::complex<double>;

/// Accepts "n/d", "n", or an optional leading sign. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Always "num/den", e.g. "0/1", "-3/8".
std::string rational_to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double v) { return v; }

/// The exact binary value of a finite double.
Rational rational_from_double(double v);

/// Closest rational with denominator at most max_den (continued fractions).
Rational nearest_rational(double v, long max_den);

// Per-scalar policy shared by templated algorithms (simplex, behaviors, ranks).
template <class T> struct ScalarTraits;

template <> struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static int sign(const Rational& v, double /*tol*/ = 0.0) { return sgn(v); }
    static bool is_zero(const Rational& v, double /*tol*/ = 0.0) { return sgn(v) == 0; }
    static double magnitude(const Rational& v) { return std::fabs(v.get_d()); }
};

template <> struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static int sign(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }
    static bool is_zero(double v, double tol) { return std::fabs(v) <= tol; }
    static double magnitude(double v) { return std::fabs(v); }
};

} // namespace bellnl
