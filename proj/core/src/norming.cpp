#include "subseries/norming.hpp"

#include <cmath>
#include <limits>

namespace subseries {
namespace {

mpz_class ipow(const mpz_class& base, unsigned long e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

class CoordinateEnumeration final : public FunctionalFamily::Enumeration {
 public:
  explicit CoordinateEnumeration(Space space) : space_(space) {}
  ExactFunctional at(const Position& k) const override {
    if (!k.fits_slong_p()) throw BudgetError("coordinate position out of range");
    return ExactFunctional::coordinate(space_, k.get_si());
  }
  std::optional<Position> size() const override { return std::nullopt; }

 private:
  Space space_;
};

class SignPatternEnumeration final : public FunctionalFamily::Enumeration {
 public:
  explicit SignPatternEnumeration(Space space) : space_(space) {}
  ExactFunctional at(const Position& k) const override {
    // Level m holds 2 * 3^(m-1) patterns; levels 1..m-1 hold 3^(m-1) - 1.
    unsigned long m = 1;
    while (ipow(3, m) - 1 <= k) ++m;
    mpz_class idx = k - (ipow(3, m - 1) - 1);
    mpz_class lower = ipow(3, m - 1);
    bool last_positive = idx >= lower;
    if (last_positive) idx -= lower;
    Entries<Rational> coeffs;
    for (unsigned long i = 0; i + 1 < m; ++i) {
      long digit = mpz_class(idx % 3).get_si();
      idx /= 3;
      if (digit != 1) coeffs.emplace_back(static_cast<index_t>(i), Rational(digit - 1));
    }
    coeffs.emplace_back(static_cast<index_t>(m - 1), Rational(last_positive ? 1 : -1));
    return ExactFunctional(space_, std::move(coeffs));
  }
  std::optional<Position> size() const override { return std::nullopt; }

 private:
  Space space_;
};

enum class DualNorm { L1, L2, Linf, General };

/// Integer lattice levels scaled by a dyadic dual-norm radius.
class LatticeEnumeration final : public FunctionalFamily::Enumeration {
 public:
  LatticeEnumeration(Space space, std::optional<index_t> fixed_positions, DualNorm dual, double q)
      : space_(space), fixed_positions_(fixed_positions), dual_(dual), q_(q) {}

  unsigned long positions(unsigned long level) const {
    return fixed_positions_ ? static_cast<unsigned long>(*fixed_positions_) : level;
  }

  mpz_class level_size(unsigned long level) const { return ipow(2 * level + 1, positions(level)) - 1; }

  ExactFunctional at(const Position& k) const override {
    mpz_class rest = k;
    unsigned long level = 1;
    while (true) {
      mpz_class n = level_size(level);
      if (rest < n) break;
      rest -= n;
      ++level;
    }
    const unsigned long base = 2 * level + 1;
    const unsigned long n = positions(level);
    mpz_class zero_index = (ipow(base, n) - 1) / 2;
    if (rest >= zero_index) rest += 1;
    std::vector<std::pair<index_t, long>> w;
    for (unsigned long i = 0; i < n; ++i) {
      long digit = mpz_class(rest % base).get_si();
      rest /= base;
      long value = digit - static_cast<long>(level);
      if (value != 0) w.emplace_back(static_cast<index_t>(i), value);
    }
    Rational r = radius(w, level);
    Entries<Rational> coeffs;
    for (const auto& [pos, value] : w) {
      index_t idx = space_.kind() == SpaceKind::TorusTrig ? torus_mode(pos) : pos;
      coeffs.emplace_back(idx, Rational(value) / r);
    }
    return ExactFunctional(space_, std::move(coeffs));
  }

  std::optional<Position> size() const override { return std::nullopt; }

  Position position(const std::vector<std::pair<index_t, long>>& w, unsigned level) const {
    if (level == 0) throw ContractViolation("lattice level must be >= 1");
    const unsigned long base = 2 * level + 1;
    const unsigned long n = positions(level);
    mpz_class idx = 0;
    bool nonzero = false;
    std::vector<long> digits(n, static_cast<long>(level));
    for (const auto& [pos, value] : w) {
      if (pos < 0 || static_cast<unsigned long>(pos) >= n) throw ContractViolation("lattice point outside level");
      if (std::labs(value) > static_cast<long>(level)) throw ContractViolation("lattice entry exceeds level");
      digits[static_cast<std::size_t>(pos)] = value + static_cast<long>(level);
      nonzero = nonzero || value != 0;
    }
    if (!nonzero) throw ContractViolation("the zero lattice point is not enumerated");
    for (unsigned long i = n; i-- > 0;) idx = idx * base + digits[i];
    mpz_class zero_index = (ipow(base, n) - 1) / 2;
    if (idx > zero_index) idx -= 1;
    for (unsigned long l = 1; l < level; ++l) idx += level_size(l);
    return idx;
  }

 private:
  Rational radius(const std::vector<std::pair<index_t, long>>& w, unsigned long level) const {
    mpz_class scale = ipow(2, level);
    switch (dual_) {
      case DualNorm::Linf: {
        long m = 0;
        for (const auto& e : w) m = std::max(m, std::labs(e.second));
        return Rational(m);
      }
      case DualNorm::L1: {
        long s = 0;
        for (const auto& e : w) s += std::labs(e.second);
        return Rational(s);
      }
      case DualNorm::L2: {
        mpz_class sq = 0;
        for (const auto& e : w) sq += mpz_class(e.second) * e.second;
        mpz_class target = sq * scale * scale;
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), target.get_mpz_t());
        if (root * root < target) root += 1;
        Rational r(root, scale);
        r.canonicalize();
        return r;
      }
      case DualNorm::General: {
        double s = 0.0;
        for (const auto& e : w) s += std::pow(std::abs(static_cast<double>(e.second)), q_);
        // Relative margin far above the rounding error of pow/sum.
        double norm = std::pow(s, 1.0 / q_) * (1.0 + 1e-12);
        mpz_class m(std::ceil(norm * std::ldexp(1.0, static_cast<int>(level))));
        Rational r(m, scale);
        r.canonicalize();
        return r;
      }
    }
    return Rational(1);
  }

  Space space_;
  std::optional<index_t> fixed_positions_;
  DualNorm dual_;
  double q_;
};

class ListEnumeration final : public FunctionalFamily::Enumeration {
 public:
  explicit ListEnumeration(std::vector<ExactFunctional> items) : items_(std::move(items)) {}
  ExactFunctional at(const Position& k) const override {
    if (k < 0 || k >= static_cast<unsigned long>(items_.size())) throw ContractViolation("family position out of range");
    return items_[k.get_ui()];
  }
  std::optional<Position> size() const override { return Position(static_cast<unsigned long>(items_.size())); }

 private:
  std::vector<ExactFunctional> items_;
};

std::shared_ptr<const LatticeEnumeration> lattice_for(const Space& exact) {
  switch (exact.kind()) {
    case SpaceKind::SeqL2:
    case SpaceKind::TorusTrig:
      return std::make_shared<LatticeEnumeration>(exact, std::nullopt, DualNorm::L2, 2.0);
    case SpaceKind::FiniteDim: {
      double p = exact.norm_exponent();
      if (std::isinf(p)) return std::make_shared<LatticeEnumeration>(exact, exact.dimension(), DualNorm::L1, 1.0);
      if (p == 1.0) {
        return std::make_shared<LatticeEnumeration>(exact, exact.dimension(), DualNorm::Linf,
                                                    std::numeric_limits<double>::infinity());
      }
      if (p == 2.0) return std::make_shared<LatticeEnumeration>(exact, exact.dimension(), DualNorm::L2, 2.0);
      return std::make_shared<LatticeEnumeration>(exact, exact.dimension(), DualNorm::General, p / (p - 1.0));
    }
    default:
      throw ContractViolation("no lattice family for " + exact.name());
  }
}

}  // namespace

FunctionalFamily::FunctionalFamily(Space space, bool norming, std::string description,
                                   std::shared_ptr<const Enumeration> enumeration)
    : space_(space), norming_(norming), description_(std::move(description)), enumeration_(std::move(enumeration)) {}

FloatFunctional FunctionalFamily::enumerate(std::size_t k) const {
  return to_float(enumeration_->at(Position(static_cast<unsigned long>(k))));
}

ExactFunctional FunctionalFamily::enumerate_exact(const Position& k) const {
  if (k < 0) throw ContractViolation("negative family position");
  return enumeration_->at(k);
}

std::vector<FloatFunctional> FunctionalFamily::first(std::size_t K) const {
  std::size_t n = K;
  if (auto s = size(); s && *s < static_cast<unsigned long>(K)) n = s->get_ui();
  std::vector<FloatFunctional> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(enumerate(k));
  return out;
}

FunctionalFamily norming_family(const Space& space) {
  Space exact = space.with_precision(Precision::ExactRational);
  switch (space.kind()) {
    case SpaceKind::SeqC0:
      return {space, true, "coordinate functionals e_n*", std::make_shared<CoordinateEnumeration>(exact)};
    case SpaceKind::SeqL1:
      return {space, true, "{-1,0,+1} sign patterns by support length",
              std::make_shared<SignPatternEnumeration>(exact)};
    case SpaceKind::SeqL2:
      return {space, true, "integer lattice levels scaled to the l2 unit ball", lattice_for(exact)};
    case SpaceKind::TorusTrig:
      return {space, true, "integer mode combinations scaled to the L2 unit ball (includes normalized modes)",
              lattice_for(exact)};
    case SpaceKind::FiniteDim:
      return {space, true, "integer lattice levels scaled to the dual unit ball", lattice_for(exact)};
    case SpaceKind::MonomialLinf:
      throw NotNorming("MonomialLinf has no norming family; use monomial_test_family()");
  }
  throw ContractViolation("unknown space kind");
}

FunctionalFamily monomial_test_family(Precision precision) {
  Space space = Space::monomial_linf(precision);
  Space exact = space.with_precision(Precision::ExactRational);
  std::vector<ExactFunctional> items{
      ExactFunctional::indicator(exact, Rational(0), Rational(1)),
      ExactFunctional::indicator(exact, Rational(0), Rational(1, 2)),
      ExactFunctional(exact, Entries<Rational>{{1, Rational(1)}}),
      ExactFunctional(exact, Entries<Rational>{{2, Rational(1)}}),
  };
  return {space, false, "densities 1_[0,1], 1_[0,1/2], t, t^2", std::make_shared<ListEnumeration>(std::move(items))};
}

Position l1_pattern_position(const FloatVector& v) {
  if (v.is_zero()) throw ContractViolation("the zero vector has no sign pattern");
  const auto& e = v.entries();
  if (e.front().first < 0) throw ContractViolation("negative coordinate");
  auto m = static_cast<unsigned long>(e.back().first) + 1;
  mpz_class idx = 0;
  std::vector<long> digits(m - 1, 1);
  for (const auto& [i, x] : e) {
    if (static_cast<unsigned long>(i) + 1 < m) digits[static_cast<std::size_t>(i)] = x > 0 ? 2 : 0;
  }
  for (std::size_t i = digits.size(); i-- > 0;) idx = idx * 3 + digits[i];
  if (e.back().second > 0) idx += ipow(3, m - 1);
  return idx + ipow(3, m - 1) - 1;
}

Position lattice_position(const Space& space, const std::vector<std::pair<index_t, long>>& w, unsigned level) {
  return lattice_for(space.with_precision(Precision::ExactRational))->position(w, level);
}

index_t torus_position(index_t mode) {
  if (mode > 0) return 2 * mode - 1;
  return -2 * mode;
}

index_t torus_mode(index_t position) {
  if (position < 0) throw ContractViolation("negative torus position");
  return position % 2 == 1 ? (position + 1) / 2 : -(position / 2);
}

double norming_sup(const FloatVector& v, const FunctionalFamily& family, std::size_t K) {
  if (K == 0) throw ContractViolation("norming_sup needs K >= 1");
  detail::check_same_space(v.space(), family.space().with_precision(Precision::Float64), "norming_sup");
  double best = 0.0;
  std::size_t n = K;
  if (auto s = family.size(); s && *s < static_cast<unsigned long>(K)) n = s->get_ui();
  for (std::size_t k = 0; k < n; ++k) best = std::max(best, std::abs(pair(family.enumerate(k), v)));
  return best;
}

FloatFunctional to_float(const ExactFunctional& f) {
  Space space = f.space().with_precision(Precision::Float64);
  if (f.interval()) return FloatFunctional::indicator(space, f.interval()->first.get_d(), f.interval()->second.get_d());
  Entries<double> coeffs;
  coeffs.reserve(f.coeffs().size());
  for (const auto& [i, c] : f.coeffs()) coeffs.emplace_back(i, c.get_d());
  return FloatFunctional(space, std::move(coeffs));
}

}  // namespace subseries
