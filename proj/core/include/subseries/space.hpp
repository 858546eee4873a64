#pragma once

/**
 * @file space.hpp
 * @brief Concrete separable Banach spaces, finitely supported vectors and
 * bounded linear functionals.
 *
 * Every vector is stored in canonical form: a sorted list of (index, value)
 * pairs with no zero values. The meaning of the index depends on the space:
 * a coordinate for the sequence spaces and FiniteDim, an exponent k of t^k for
 * MonomialLinf, and a Fourier mode k of e^{ik theta} for TorusTrig.
 */

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subseries/errors.hpp"
#include "subseries/scalar.hpp"

namespace subseries {

enum class SpaceKind { SeqL1, SeqL2, SeqC0, FiniteDim, MonomialLinf, TorusTrig };
enum class Precision { Float64, ExactRational };

std::string to_string(SpaceKind kind);
std::string to_string(Precision precision);

class Space {
 public:
  static Space seq_l1(Precision precision = Precision::Float64);
  static Space seq_l2(Precision precision = Precision::Float64);
  static Space seq_c0(Precision precision = Precision::Float64);
  /// R^d with the p-norm; p may be +infinity.
  static Space finite_dim(index_t dimension, double p, Precision precision = Precision::Float64);
  /// Polynomials in t under the sup norm on [0,1], paired against L^1
  /// densities (indicators and polynomials).
  static Space monomial_linf(Precision precision = Precision::Float64);
  /// Real combinations of the modes e^{ik theta} under the normalized L^2 norm.
  static Space torus_trig(Precision precision = Precision::Float64);

  SpaceKind kind() const noexcept { return kind_; }
  Precision precision() const noexcept { return precision_; }
  index_t dimension() const noexcept { return dimension_; }
  double exponent() const noexcept { return p_; }

  /// Same space, other precision.
  Space with_precision(Precision precision) const;

  /// Exponent of the p-norm this space uses, +infinity for sup norms.
  double norm_exponent() const;

  bool admits_index(index_t i) const;
  std::string name() const;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  Space(SpaceKind kind, Precision precision, index_t dimension, double p)
      : kind_(kind), precision_(precision), dimension_(dimension), p_(p) {}

  SpaceKind kind_;
  Precision precision_;
  index_t dimension_;
  double p_;
};

template <Scalar S>
constexpr Precision precision_of() {
  if constexpr (std::same_as<S, double>) {
    return Precision::Float64;
  } else {
    return Precision::ExactRational;
  }
}

/// Sorted, zero-free list of (index, value) pairs.
template <Scalar S>
using Entries = std::vector<std::pair<index_t, S>>;

namespace detail {

template <Scalar S>
void canonicalize(Entries<S>& entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Entries<S> out;
  out.reserve(entries.size());
  for (auto& [i, v] : entries) {
    if (!out.empty() && out.back().first == i) {
      out.back().second += v;
    } else {
      out.emplace_back(i, v);
    }
  }
  std::erase_if(out, [](const auto& e) { return is_zero(e.second); });
  entries = std::move(out);
}

template <Scalar S>
Entries<S> merge_scaled(const Entries<S>& a, const Entries<S>& b, const S& scale) {
  Entries<S> out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->first < ia->first) {
      S v = ib->second * scale;
      if (!is_zero(v)) out.emplace_back(ib->first, std::move(v));
      ++ib;
    } else {
      S v = ia->second + ib->second * scale;
      if (!is_zero(v)) out.emplace_back(ia->first, std::move(v));
      ++ia;
      ++ib;
    }
  }
  return out;
}

void check_same_space(const Space& a, const Space& b, const char* op);
void check_precision(const Space& space, Precision expected);
void check_indices(const Space& space, index_t first, index_t last);

}  // namespace detail

template <Scalar S>
class Vector {
 public:
  using scalar_type = S;

  explicit Vector(Space space) : space_(space) { detail::check_precision(space_, precision_of<S>()); }

  Vector(Space space, Entries<S> entries) : space_(space), entries_(std::move(entries)) {
    detail::check_precision(space_, precision_of<S>());
    detail::canonicalize(entries_);
    if (!entries_.empty()) detail::check_indices(space_, entries_.front().first, entries_.back().first);
  }

  Vector(Space space, std::initializer_list<std::pair<index_t, S>> entries)
      : Vector(space, Entries<S>(entries)) {}

  static Vector basis(Space space, index_t i, S value = S(1)) {
    return Vector(space, Entries<S>{{i, std::move(value)}});
  }

  const Space& space() const noexcept { return space_; }
  const Entries<S>& entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }

  S coeff(index_t i) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const auto& e, index_t key) { return e.first < key; });
    return (it != entries_.end() && it->first == i) ? it->second : S(0);
  }

  /// this += scale * other
  Vector& add_scaled(const Vector& other, const S& scale) {
    detail::check_same_space(space_, other.space_, "add_scaled");
    if (subseries::is_zero(scale) || other.entries_.empty()) return *this;
    entries_ = detail::merge_scaled(entries_, other.entries_, scale);
    return *this;
  }

  Vector& operator+=(const Vector& other) { return add_scaled(other, S(1)); }
  Vector& operator-=(const Vector& other) { return add_scaled(other, S(-1)); }
  Vector& operator*=(const S& scale) {
    if (subseries::is_zero(scale)) {
      entries_.clear();
    } else {
      for (auto& e : entries_) e.second *= scale;
    }
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, const S& s) { return a *= s; }
  friend Vector operator*(const S& s, Vector a) { return a *= s; }
  friend Vector operator-(Vector a) { return a *= S(-1); }

  friend bool operator==(const Vector& a, const Vector& b) {
    return a.space_ == b.space_ && a.entries_ == b.entries_;
  }

  /// Lexicographic order on canonical forms; used for multiset comparisons.
  friend bool operator<(const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                                        b.entries_.end(), [](const auto& x, const auto& y) {
                                          if (x.first != y.first) return x.first < y.first;
                                          return x.second < y.second;
                                        });
  }

 private:
  Space space_;
  Entries<S> entries_;
};

using FloatVector = Vector<double>;
using ExactVector = Vector<Rational>;

ExactVector to_exact(const FloatVector& v);
FloatVector to_float(const ExactVector& v);

/// Norm of the ambient space. For MonomialLinf the sup over [0,1] is exact for
/// one- and two-term polynomials and a refined scan otherwise.
double norm(const FloatVector& v);

/// Floating approximation of the norm of an exact vector.
double norm(const ExactVector& v);

/// ||v||^q where q = norm_power_exponent(space): 1 for sup norms and l^1,
/// 2 for l^2 and TorusTrig, p for FiniteDim with integer p. Exact.
Rational norm_power(const ExactVector& v);
unsigned norm_power_exponent(const Space& space);

/// Exact sign of ||v|| - r (r >= 0). Supported for every kind, including
/// MonomialLinf (Sturm sequences); FiniteDim needs an integer or infinite p.
int compare_norm(const ExactVector& v, const Rational& r);

inline bool norm_at_least(const ExactVector& v, const Rational& r) { return compare_norm(v, r) >= 0; }

/// Resolution of the scan used for MonomialLinf sup norms of polynomials
/// with three or more terms.
struct MonomialScanConfig {
  std::size_t uniform_points = 512;
  std::size_t boundary_points = 1536;
  double boundary_depth = 1e-9;  // smallest 1 - t sampled near t = 1
};

const MonomialScanConfig& monomial_scan_config();

/// Sample points in [0,1] used by MonomialLinf scans, sorted, including 0 and 1.
const std::vector<double>& monomial_scan_grid();

/**
 * Bounded linear functional on a Space.
 *
 * For the sequence kinds, FiniteDim and TorusTrig, the pairing is the finite
 * sum of coeff(i) * v(i). For MonomialLinf the functional is an L^1 density g
 * on [0,1] and the pairing is the integral of g times the polynomial: g is
 * the indicator of [a,b] when an interval is set, and the polynomial with
 * coefficients `coeffs` otherwise.
 */
template <Scalar S>
class Functional {
 public:
  Functional(Space space, Entries<S> coeffs) : space_(space), coeffs_(std::move(coeffs)) {
    detail::check_precision(space_, precision_of<S>());
    detail::canonicalize(coeffs_);
    if (!coeffs_.empty()) detail::check_indices(space_, coeffs_.front().first, coeffs_.back().first);
  }

  static Functional indicator(Space space, S a, S b) {
    if (space.kind() != SpaceKind::MonomialLinf) {
      throw ContractViolation("indicator functionals exist only on MonomialLinf");
    }
    if (!(S(0) <= a && a <= b && b <= S(1))) {
      throw ContractViolation("indicator interval must satisfy 0 <= a <= b <= 1");
    }
    Functional f(space, Entries<S>{});
    f.interval_ = std::make_pair(std::move(a), std::move(b));
    return f;
  }

  static Functional coordinate(Space space, index_t i) { return Functional(space, Entries<S>{{i, S(1)}}); }

  const Space& space() const noexcept { return space_; }
  const Entries<S>& coeffs() const noexcept { return coeffs_; }
  const std::optional<std::pair<S, S>>& interval() const noexcept { return interval_; }

  friend bool operator==(const Functional&, const Functional&) = default;

 private:
  Space space_;
  Entries<S> coeffs_;
  std::optional<std::pair<S, S>> interval_;
};

using FloatFunctional = Functional<double>;
using ExactFunctional = Functional<Rational>;

double pair(const FloatFunctional& f, const FloatVector& v);
Rational pair(const ExactFunctional& f, const ExactVector& v);

/// Operator norm of the functional against the space's norm. For MonomialLinf
/// this is the L^1 mass of the density.
double operator_norm(const FloatFunctional& f);

/// Sup over [0,1] of |g| for a MonomialLinf density; the factor that bounds
/// |pair(f, t^N)| by sup|g| / (N+1).
double density_sup(const FloatFunctional& f);

}  // namespace subseries
