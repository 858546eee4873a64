#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace subseries {

/// Signed index type used for coordinates, exponents, Fourier modes and
/// series positions.
using index_t = std::int64_t;

/// Exact rational scalar.
using Rational = mpq_class;

template <typename S>
concept Scalar = std::same_as<S, double> || std::same_as<S, Rational>;

/// Exact conversion: every finite double is a dyadic rational.
Rational to_rational(double x);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.get_d(); }

inline double abs_value(double x) { return x < 0 ? -x : x; }
inline Rational abs_value(const Rational& q) { return abs(q); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

/// Parses "3", "-7/4", "0.125" or "1e-3" into an exact rational. Decimal
/// literals are read as the decimal fraction they spell, not as the nearest
/// double.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// q^k for k >= 0.
Rational pow(const Rational& q, unsigned long k);

}  // namespace subseries
