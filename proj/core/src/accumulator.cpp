#include "subseries/accumulator.hpp"

#include <algorithm>
#include <cmath>

namespace subseries {
namespace {

bool is_sup_kind(const Space& s) { return std::isinf(s.norm_exponent()); }

}  // namespace

NormAccumulator::NormAccumulator(Space space) : space_(space) {
  detail::check_precision(space_, Precision::Float64);
  if (space_.kind() == SpaceKind::FiniteDim) dense_.assign(static_cast<std::size_t>(space_.dimension()), 0.0);
  if (space_.kind() == SpaceKind::MonomialLinf) grid_values_.assign(monomial_scan_grid().size(), 0.0);
}

void NormAccumulator::clear() {
  coords_.clear();
  power_sum_ = 0.0L;
  magnitudes_.clear();
  std::fill(dense_.begin(), dense_.end(), 0.0);
  std::fill(grid_values_.begin(), grid_values_.end(), 0.0);
}

void NormAccumulator::update_coordinate(index_t i, double delta) {
  double& slot = coords_[i];
  double old = slot;
  double now = old + delta;
  slot = now;
  if (is_sup_kind(space_)) {
    if (old != 0.0) {
      auto it = magnitudes_.find(std::abs(old));
      if (--it->second == 0) magnitudes_.erase(it);
    }
    if (now != 0.0) ++magnitudes_[std::abs(now)];
  } else if (space_.norm_exponent() == 1.0) {
    power_sum_ += static_cast<long double>(std::abs(now)) - std::abs(old);
  } else {
    power_sum_ += static_cast<long double>(now) * now - static_cast<long double>(old) * old;
  }
  if (now == 0.0) coords_.erase(i);
}

void NormAccumulator::add(const FloatVector& v, double coeff) {
  detail::check_same_space(space_, v.space(), "NormAccumulator::add");
  if (coeff == 0.0) return;
  switch (space_.kind()) {
    case SpaceKind::FiniteDim:
      for (const auto& [i, x] : v.entries()) dense_[static_cast<std::size_t>(i)] += coeff * x;
      return;
    case SpaceKind::MonomialLinf: {
      for (const auto& [k, c] : v.entries()) {
        double a = coeff * c;
        const auto& powers = grid_powers(k);
        for (std::size_t g = 0; g < powers.size(); ++g) grid_values_[g] += a * powers[g];
      }
      return;
    }
    default:
      for (const auto& [i, x] : v.entries()) update_coordinate(i, coeff * x);
  }
}

const std::vector<double>& NormAccumulator::grid_powers(index_t k) {
  constexpr std::size_t kCacheSize = 4;
  for (auto& [exp, values] : power_cache_) {
    if (exp == k) return values;
  }
  const auto& grid = monomial_scan_grid();
  std::vector<double> values(grid.size());
  auto previous = std::find_if(power_cache_.begin(), power_cache_.end(), [k](const auto& e) { return e.first == k - 1; });
  if (previous != power_cache_.end()) {
    for (std::size_t g = 0; g < grid.size(); ++g) values[g] = previous->second[g] * grid[g];
  } else {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      values[g] = k == 0 ? 1.0 : (grid[g] == 0.0 ? 0.0 : std::pow(grid[g], static_cast<double>(k)));
    }
  }
  if (power_cache_.size() == kCacheSize) power_cache_.erase(power_cache_.begin());
  power_cache_.emplace_back(k, std::move(values));
  return power_cache_.back().second;
}

double NormAccumulator::norm() const {
  switch (space_.kind()) {
    case SpaceKind::FiniteDim: {
      Entries<double> e;
      for (std::size_t i = 0; i < dense_.size(); ++i) {
        if (dense_[i] != 0.0) e.emplace_back(static_cast<index_t>(i), dense_[i]);
      }
      return subseries::norm(FloatVector(space_, std::move(e)));
    }
    case SpaceKind::MonomialLinf: {
      double m = 0.0;
      for (double x : grid_values_) m = std::max(m, std::abs(x));
      return m;
    }
    default:
      if (is_sup_kind(space_)) return magnitudes_.empty() ? 0.0 : magnitudes_.rbegin()->first;
      if (power_sum_ <= 0.0L) return 0.0;
      if (space_.norm_exponent() == 1.0) return static_cast<double>(power_sum_);
      return static_cast<double>(std::sqrt(power_sum_));
  }
}

ExactNormAccumulator::ExactNormAccumulator(Space space) : space_(space) {
  detail::check_precision(space_, Precision::ExactRational);
  if (space_.kind() != SpaceKind::MonomialLinf) {
    exponent_ = norm_power_exponent(space_);
    sup_norm_ = is_sup_kind(space_);
  }
}

void ExactNormAccumulator::clear() {
  coords_.clear();
  power_sum_ = 0;
  magnitudes_.clear();
}

void ExactNormAccumulator::update_coordinate(index_t i, const Rational& delta) {
  Rational& slot = coords_[i];
  Rational old = slot;
  slot += delta;
  const Rational& now = slot;
  if (space_.kind() != SpaceKind::MonomialLinf) {
    if (sup_norm_) {
      if (sgn(old) != 0) magnitudes_.erase(magnitudes_.find(abs(old)));
      if (sgn(now) != 0) magnitudes_.insert(abs(now));
    } else {
      power_sum_ += pow(abs(now), exponent_) - pow(abs(old), exponent_);
    }
  }
  if (sgn(now) == 0) coords_.erase(i);
}

void ExactNormAccumulator::add(const ExactVector& v, const Rational& coeff) {
  detail::check_same_space(space_, v.space(), "ExactNormAccumulator::add");
  if (sgn(coeff) == 0) return;
  for (const auto& [i, x] : v.entries()) update_coordinate(i, coeff * x);
}

ExactVector ExactNormAccumulator::value() const {
  Entries<Rational> e(coords_.begin(), coords_.end());
  return ExactVector(space_, std::move(e));
}

int ExactNormAccumulator::compare_norm(const Rational& r) const {
  if (space_.kind() == SpaceKind::MonomialLinf) return subseries::compare_norm(value(), r);
  if (sgn(r) < 0) throw ContractViolation("compare_norm needs r >= 0");
  if (sup_norm_) {
    Rational m = magnitudes_.empty() ? Rational(0) : *magnitudes_.rbegin();
    return cmp(m, r);
  }
  return cmp(power_sum_, pow(r, exponent_));
}

}  // namespace subseries
