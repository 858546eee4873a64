#pragma once

// Internal helpers for the MonomialLinf model space: evaluation, sup norms on
// [0,1] in floating point, and exact sup-norm comparisons via Sturm sequences.

#include <vector>

#include "subseries/scalar.hpp"
#include "subseries/space.hpp"

namespace subseries::poly {

/// Dense polynomial, coefficient of t^k at position k, no trailing zeros.
using Dense = std::vector<Rational>;

Dense to_dense(const Entries<Rational>& sparse);

double eval(const Entries<double>& p, double t);
Rational eval(const Dense& p, const Rational& t);

/// sup over [0,1] of |p|; exact for <= 2 terms, refined scan otherwise.
double sup_abs(const Entries<double>& p);

/// Exact sign of (sup over [0,1] of |p|) - r, for r >= 0.
int compare_sup(const Entries<Rational>& p, const Rational& r);

/// Number of distinct real roots of p in the open interval (0,1).
std::size_t distinct_roots_in_unit_interval(const Dense& p);

/// Integral over [a,b] of t^k.
double integral_monomial(double a, double b, index_t k);
Rational integral_monomial(const Rational& a, const Rational& b, index_t k);

}  // namespace subseries::poly
