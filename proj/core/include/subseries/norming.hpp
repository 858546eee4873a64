#pragma once

/**
 * @file norming.hpp
 * @brief Countable families of norm-<=1 functionals with a fixed enumeration.
 *
 * Each space with a norming family enumerates it in a documented order so
 * that position k always names the same functional:
 *
 * - SeqC0: the coordinate functionals e_0*, e_1*, ...
 * - SeqL1: sign patterns (s_0, ..., s_{m-1}) in {-1,0,+1}^m with s_{m-1} != 0,
 *   grouped by length m and ordered lexicographically (-1 < 0 < +1, last
 *   entry most significant) inside a group.
 * - SeqL2, TorusTrig, FiniteDim: lattice levels L = 1, 2, ... . Level L holds
 *   every nonzero integer vector w with |w_i| <= L on the first L positions
 *   (all d positions for FiniteDim), scaled by the dyadic radius
 *   r = ceil(2^L ||w||_dual) / 2^L >= ||w||_dual. Inside a level, w is read as
 *   base (2L+1) digits w_i + L, position 0 least significant. When ||w|| is
 *   rational r is exactly ||w||, so e.g. (3,4) appears as (3/5, 4/5).
 *   TorusTrig positions map to modes 0, 1, -1, 2, -2, ... .
 *
 * Positions are arbitrary-precision integers because the position of a
 * specific functional can be astronomically large; only a short prefix is
 * ever materialized.
 */

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "subseries/space.hpp"

namespace subseries {

using Position = mpz_class;

class FunctionalFamily {
 public:
  class Enumeration {
   public:
    virtual ~Enumeration() = default;
    virtual ExactFunctional at(const Position& k) const = 0;
    /// Number of functionals; empty when infinite.
    virtual std::optional<Position> size() const = 0;
  };

  FunctionalFamily(Space space, bool norming, std::string description,
                   std::shared_ptr<const Enumeration> enumeration);

  const Space& space() const noexcept { return space_; }
  bool norming() const noexcept { return norming_; }
  const std::string& description() const noexcept { return description_; }
  std::optional<Position> size() const { return enumeration_->size(); }

  /// k-th functional, in the precision of the family's space.
  FloatFunctional enumerate(std::size_t k) const;
  ExactFunctional enumerate_exact(const Position& k) const;

  /// The first min(K, size) functionals.
  std::vector<FloatFunctional> first(std::size_t K) const;

 private:
  Space space_;
  bool norming_;
  std::string description_;
  std::shared_ptr<const Enumeration> enumeration_;
};

/// The enumerated norming family of a space. Throws NotNorming for
/// MonomialLinf.
FunctionalFamily norming_family(const Space& space);

/// The four MonomialLinf test densities 1_[0,1], 1_[0,1/2], t, t^2. Not
/// norming; it only probes weak convergence.
FunctionalFamily monomial_test_family(Precision precision = Precision::Float64);

/// Position of the sign pattern sign(v) in the SeqL1 family (v != 0).
Position l1_pattern_position(const FloatVector& v);

/// Position of the lattice point w at level L in a SeqL2, TorusTrig or
/// FiniteDim family; w is given by position (not mode), integer entries,
/// |w_i| <= L, positions < L (< d for FiniteDim).
Position lattice_position(const Space& space, const std::vector<std::pair<index_t, long>>& w, unsigned level);

/// TorusTrig position of a mode: 0, 1, -1, 2, -2, ... -> 0, 1, 2, 3, 4, ...
index_t torus_position(index_t mode);
index_t torus_mode(index_t position);

/// max over the first K functionals of |pair(L, v)|. Nondecreasing in K.
double norming_sup(const FloatVector& v, const FunctionalFamily& family, std::size_t K);

FloatFunctional to_float(const ExactFunctional& f);

}  // namespace subseries
