#pragma once

// Running sums with incrementally maintained norms. Detectors and block
// searches add one term at a time and query the norm after every step, so
// the per-step cost must not depend on the size of the accumulated support.

#include <map>
#include <memory>
#include <set>
#include <unordered_map>
#include <vector>

#include "subseries/space.hpp"

namespace subseries {

class NormAccumulator {
 public:
  explicit NormAccumulator(Space space);

  /// sum += coeff * v
  void add(const FloatVector& v, double coeff = 1.0);
  double norm() const;
  void clear();
  const Space& space() const noexcept { return space_; }

 private:
  void update_coordinate(index_t i, double delta);

  Space space_;
  std::unordered_map<index_t, double> coords_;
  long double power_sum_ = 0.0L;        // l1: sum |x|, l2: sum x^2, finite p: sum |x|^p
  std::map<double, std::size_t> magnitudes_;  // sup norms: multiset of |x| > 0
  std::vector<double> dense_;           // FiniteDim
  std::vector<double> grid_values_;     // MonomialLinf: sum evaluated on the scan grid
  // MonomialLinf: t^k on the grid for recently used exponents; a term of
  // exponent k+1 after one of exponent k costs one multiply per grid point.
  const std::vector<double>& grid_powers(index_t k);
  std::vector<std::pair<index_t, std::vector<double>>> power_cache_;
};

/// Exact analogue of NormAccumulator; decisions about ||sum|| >= r are exact.
class ExactNormAccumulator {
 public:
  explicit ExactNormAccumulator(Space space);

  void add(const ExactVector& v, const Rational& coeff = Rational(1));
  int compare_norm(const Rational& r) const;
  bool norm_at_least(const Rational& r) const { return compare_norm(r) >= 0; }
  ExactVector value() const;
  void clear();

 private:
  void update_coordinate(index_t i, const Rational& delta);

  Space space_;
  std::map<index_t, Rational> coords_;
  Rational power_sum_;
  std::multiset<Rational> magnitudes_;
  unsigned exponent_ = 1;
  bool sup_norm_ = false;
};

}  // namespace subseries
